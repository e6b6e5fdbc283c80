"""Command-line front end.

Verbs: table, check, logical-op, probs, channel, rm-level, rm-build, msd,
stab-convert, oracle-check.  Exit codes: 0 success, 1 analytic-check
failure (e.g. --expect-preserved not met), 2 input error.  Identical
invocations produce byte-identical output; every random element takes an
explicit seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import css, f2, gates
from .css import CssCode, builtin_code, parse_code_catalog
from .f2 import EnumerationCapExceeded, as_bits, bitstring, zeros


class InputError(ValueError):
    pass


def _enum_cap(args) -> int:
    if getattr(args, "cap", None):
        return int(args.cap)
    env = os.environ.get("CSSDIAG_ENUM_CAP")
    return int(env) if env else f2.DEFAULT_ENUM_CAP


def load_code(spec: str, r=None, y=None) -> CssCode:
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            code = parse_code_catalog(fh.read())
    else:
        try:
            code = builtin_code(spec)
        except KeyError as exc:
            raise InputError(str(exc)) from None
    if r is not None or y is not None:
        code = CssCode(code.C2, code.C1perp,
                       r=as_bits(r, code.n) if r is not None else code.r,
                       y=as_bits(y, code.n) if y is not None else code.y)
    return code


def load_gate(spec: str, n: int):
    head, _, rest = spec.partition(":")
    if head == "rz":
        return gates.RotZ(n, gates.parse_theta(rest))
    if head == "qfd":
        level = None
        rfile = None
        for part in rest.split(":"):
            key, _, val = part.partition("=")
            if key == "l":
                level = int(val)
            elif key == "r":
                rfile = val
            else:
                raise InputError(f"unknown qfd option {part!r}")
        if level is None or rfile is None:
            raise InputError("qfd gates need l=LEVEL and R=<file>")
        R = np.loadtxt(rfile, dtype=np.int64, ndmin=2)
        return gates.QFD(R, level)
    if head == "table":
        rows = np.loadtxt(rest, ndmin=2)
        return gates.PhaseTable(rows[:, 0] + 1j * rows[:, 1])
    raise InputError(f"unknown gate spec {spec!r}")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_table(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .gencoef import gencoeffs

    table = gencoeffs(code, gate, cap=cap)
    if args.format == "json":
        print(table.to_json())
    elif args.collapse and table.nontrivial_rows_equal():
        lines = ["mu,gamma,re,im"]
        rows = [table.A[0]] + ([table.A[1]] if table.A.shape[0] > 1 else [])
        labels = ["0"] + (["!=0"] if table.A.shape[0] > 1 else [])
        for lab, row in zip(labels, rows):
            for j, g in enumerate(table.gamma_leaders):
                lines.append(f"{lab},{bitstring(g)},{_fmt(row[j].real)},"
                             f"{_fmt(row[j].imag)}")
        print("\n".join(lines))
    else:
        sys.stdout.write(table.to_csv())
    return 0


def cmd_check(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .conditions import (UnsupportedAngle, qfd_divisibility,
                             rz_divisibility, trig_condition)
    from .gencoef import gencoeffs

    result = {"code": args.code, "gate": args.gate, "route": args.route}
    if args.route == "sumsq":
        table = gencoeffs(code, gate, cap=cap)
        result["zero_row_weight"] = table.zero_row_weight()
        result["preserved"] = table.preserves()
        if result["preserved"]:
            op = table.induced_logical().canonical()
            result["logical_coefficients"] = [
                [_fmt(c.real), _fmt(c.imag)] for c in op.coeffs]
    elif args.route == "div":
        if isinstance(gate, gates.RotZ):
            p = math.pi / gate.theta
            if abs(p - round(p)) > 1e-9:
                raise InputError("divisibility route needs theta = pi/p")
            rep = rz_divisibility(code, int(round(p)), cap=cap)
        elif isinstance(gate, gates.QFD):
            rep = qfd_divisibility(code, gate.R, gate.level, cap=cap)
        else:
            raise InputError("divisibility route needs an rz or qfd gate")
        result["preserved"] = rep.holds
        if rep.witness is not None:
            kind, w, other = rep.witness
            result["witness"] = {
                "kind": kind,
                "w": bitstring(w),
                "z" if kind == "pair" else "weight":
                    bitstring(other) if kind == "pair" else int(other),
            }
    elif args.route == "trig":
        if not isinstance(gate, gates.RotZ):
            raise InputError("trig route needs an rz gate")
        try:
            result["preserved"] = trig_condition(code, gate.theta, cap=cap)
        except UnsupportedAngle as exc:
            raise InputError(str(exc)) from None
    print(json.dumps(result, indent=2, sort_keys=True))
    if args.expect_preserved and not result["preserved"]:
        return 1
    return 0


def cmd_logical_op(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .gencoef import PreservationError, gencoeffs

    table = gencoeffs(code, gate, cap=cap)
    try:
        op = table.induced_logical().canonical()
    except PreservationError as exc:
        print(json.dumps({"preserved": False, "error": str(exc)}))
        return 1
    payload = {
        "preserved": True,
        "k": op.k,
        "coefficients": {format(a, f"0{op.k}b"): [_fmt(c.real), _fmt(c.imag)]
                         for a, c in enumerate(op.coeffs) if abs(c) > 1e-12},
        "diagonal": [[_fmt(d.real), _fmt(d.imag)] for d in op.diagonal()],
    }
    if code.k == 1:
        theta, residual, ambiguous = table.logical_rotation_angle(zeros(code.n))
        payload["theta_L"] = _fmt(theta)
        payload["residual_pauli"] = residual
        payload["angle_sign_ambiguous"] = ambiguous
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _theta_grid(spec: str):
    lo_s, hi_s, num_s = spec.split(":")
    return np.linspace(gates.parse_theta(lo_s), gates.parse_theta(hi_s),
                       int(num_s))


def cmd_probs(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    from .channel import syndrome_probability
    from .gencoef import gencoeffs_rz

    states = args.states.split(",") if args.states else [
        format(b, f"0{code.k}b") for b in range(1 << code.k)]
    print("theta,mu,state,p")
    for theta in _theta_grid(args.theta_grid):
        table = gencoeffs_rz(code, float(theta), cap=cap)
        for mu in table.mu_leaders:
            for state in states:
                p = syndrome_probability(table, state, mu)
                print(f"{_fmt(float(theta))},{bitstring(mu)},{state},{_fmt(p)}")
    return 0


def cmd_channel(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .channel import kraus_operators, make_policy
    from .gencoef import gencoeffs

    table = gencoeffs(code, gate, cap=cap)
    policy = json.loads(args.policy) if args.policy.startswith("{") else args.policy
    chan = kraus_operators(table, make_policy(table, policy))
    payload = {
        "mu": [bitstring(m) for m in chan.mu_leaders],
        "kraus_diagonals": [[[_fmt(d.real), _fmt(d.imag)] for d in b.diagonal()]
                            for b in chan.kraus],
        "completeness_deviation": chan.completeness_deviation(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_rm_level(args) -> int:
    from .conditions import rm_max_level

    print(json.dumps({"r1": args.r1, "r2": args.r2, "m": args.m,
                      "l_max": rm_max_level(args.r1, args.r2, args.m)}))
    return 0


def cmd_rm_build(args) -> int:
    from .conditions import build_rm_css

    code = build_rm_css(args.r1, args.r2, args.m, punctured=args.punctured)
    payload = {
        "n": code.n, "k": code.k,
        "x_generators": [bitstring(g) for g in code.C2.G],
        "z_generators": [bitstring(g) for g in code.C1perp.G],
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_msd(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .msd import monte_carlo, steane_like_analysis

    subset = [as_bits(s, code.n) for s in args.subset.split(",")] \
        if args.subset else None
    report = steane_like_analysis(code, gate, args.policy, subset=subset, cap=cap)
    grid = [float(x) for x in args.p_grid.split(",")] if args.p_grid else \
        [0.01, 0.05, 0.1]
    payload = report.summary()
    payload["curves"] = [
        {"p": p, "p_success": report.p_success(p), "q": report.q_out(p)}
        for p in grid
    ]
    if args.mc_samples:
        payload["monte_carlo"] = [
            dict(p=p, **monte_carlo(code, gate, args.policy, p,
                                    args.mc_samples, args.seed,
                                    subset=subset, cap=cap))
            for p in grid
        ]
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_stab_convert(args) -> int:
    cap = _enum_cap(args)
    from .stab import (css_z_distance, stabilizer_distance,
                       stabilizer_from_rows, to_css)

    rows, signs = [], []
    with open(args.stabilizers, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sign = 1
            if line.startswith("-"):
                sign = -1
                line = line[1:].strip()
            line = line.replace("|", "")
            rows.append(as_bits(line))
            signs.append(sign)
    sc = stabilizer_from_rows(rows, signs)
    d = args.distance if args.distance else stabilizer_distance(sc, cap=cap)
    converted = to_css(sc, d, cap=cap)
    payload = {
        "n": sc.n, "k": sc.k, "distance": d,
        "x_generators": [bitstring(g) for g in converted.C2.G],
        "z_generators": [bitstring(g) for g in converted.C1perp.G],
        "r": bitstring(converted.r), "y": bitstring(converted.y),
        "z_distance": css_z_distance(converted, cap=cap),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_oracle_check(args) -> int:
    cap = _enum_cap(args)
    code = load_code(args.code, args.r, args.y)
    gate = load_gate(args.gate, code.n)
    from .oracle import crosscheck

    rep = crosscheck(code, gate, cap=cap)
    print(json.dumps(rep, indent=2, sort_keys=True))
    return 0 if rep["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cssdiag",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, gate=True):
        p.add_argument("--code", required=True,
                       help="builtin name (steane, 422, 832, rm15, qrm(r,m)) "
                            "or @catalog-file")
        if gate:
            p.add_argument("--gate", required=True,
                           help="rz:THETA | qfd:l=L:r=FILE | table:FILE")
        p.add_argument("--r", default=None, help="override X character vector")
        p.add_argument("--y", default=None, help="override Z character vector")
        p.add_argument("--cap", type=int, default=None,
                       help="enumeration cap (default 2^22; env CSSDIAG_ENUM_CAP)")

    p = sub.add_parser("table", help="emit the generator-coefficient table")
    common(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--collapse", action="store_true",
                   help="fold equal nontrivial syndrome rows into one")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="decide codespace preservation")
    common(p)
    p.add_argument("--route", choices=["sumsq", "div", "trig"], default="sumsq")
    p.add_argument("--expect-preserved", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("logical-op", help="induced logical operator")
    common(p)
    p.set_defaults(func=cmd_logical_op)

    p = sub.add_parser("probs", help="syndrome probabilities over a theta grid")
    common(p, gate=False)
    p.add_argument("--theta-grid", default="0:2pi:100",
                   help="grid as LO:HI:COUNT (angles accept pi fractions)")
    p.add_argument("--states", default=None,
                   help="comma-separated logical states (default: basis states)")
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("channel", help="Kraus operators for a policy")
    common(p)
    p.add_argument("--policy", default="none",
                   help="'none', 'z-correct', or a JSON {mu: gamma} map")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("rm-level", help="max rotation level for an RM pair")
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--r2", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_rm_level)

    p = sub.add_parser("rm-build", help="build a Reed-Muller CSS code")
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--r2", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--punctured", action="store_true")
    p.set_defaults(func=cmd_rm_build)

    p = sub.add_parser("msd", help="distillation curves and Monte-Carlo check")
    common(p)
    p.add_argument("--policy", default="postselect",
                   choices=["postselect", "correct-all", "correct-subset"])
    p.add_argument("--subset", default=None,
                   help="comma-separated syndrome bitstrings for correct-subset")
    p.add_argument("--p-grid", default=None)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_msd)

    p = sub.add_parser("stab-convert", help="stabilizer-to-CSS conversion")
    p.add_argument("--stabilizers", required=True,
                   help="file of symplectic rows x|z with optional leading -")
    p.add_argument("--distance", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_stab_convert)

    p = sub.add_parser("oracle-check", help="statevector cross-validation")
    common(p)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, EnumerationCapExceeded, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
