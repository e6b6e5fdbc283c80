"""Magic-state distillation analysis under i.i.d. dephasing.

For a one-logical-qubit code whose per-syndrome operators are rotations up
to a logical Z, the protocol curves (success probability, output error
rate) are exact polynomials in t = 1 - 2p.  They are assembled from coset
survival probabilities: the chance that a dephasing error pattern lands in
a prescribed coset, evaluated through the dual code so the coefficients
stay exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from . import f2
from .css import CssCode
from .f2 import BinaryCode, DEFAULT_ENUM_CAP, as_bits, bits_to_index, zeros
from .gencoef import GenCoeffTable, gencoeffs


class TPoly:
    """Polynomial in t = 1 - 2p with exact Fraction coefficients."""

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @classmethod
    def zero(cls) -> "TPoly":
        return cls([0])

    @classmethod
    def const(cls, c) -> "TPoly":
        return cls([c])

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return TPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "TPoly":
        c = Fraction(c)
        return TPoly([c * x for x in self.coeffs])

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def eval_t(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def eval_p(self, p: float) -> float:
        return self.eval_t(1.0 - 2.0 * p)

    def in_p(self) -> list[Fraction]:
        """Exact coefficients in p after substituting t = 1 - 2p."""
        out = [Fraction(0)] * (len(self.coeffs))
        for w, c in enumerate(self.coeffs):
            # (1 - 2p)^w expanded
            for i in range(w + 1):
                out[i] += c * math.comb(w, i) * Fraction(-2) ** i
            if w == 0:
                out[0] += 0
        return out

    def __repr__(self) -> str:
        return "TPoly(" + " + ".join(
            f"{c}*t^{w}" for w, c in enumerate(self.coeffs) if c != 0) + ")"


def _series_ratio(num_p: list[Fraction], den_p: list[Fraction],
                  order: int = 2) -> list[Fraction]:
    """Taylor coefficients of num/den around p = 0, exact."""
    if den_p[0] == 0:
        raise ZeroDivisionError("denominator vanishes at p = 0")
    out = []
    num = list(num_p) + [Fraction(0)] * (order + 1)
    den = list(den_p) + [Fraction(0)] * (order + 1)
    for j in range(order + 1):
        c = num[j]
        for i in range(j):
            c -= out[i] * den[j - i]
        out.append(c / den[0])
    return out


def survival_tpoly(D: BinaryCode, shift=None,
                   cap: int = DEFAULT_ENUM_CAP) -> TPoly:
    """P(dephasing error lands in D + shift) as an exact polynomial in t.

    Evaluated through the dual: (1/|D^perp|) sum_{u in D^perp}
    (-1)^(u.shift) t^(w_H(u)).
    """
    dual = D.dual()
    shift = zeros(D.n) if shift is None else as_bits(shift, D.n)
    signed = f2.signed_weight_enumerator(dual, shift, cap=cap)
    denom = len(dual)
    return TPoly([Fraction(int(c), denom) for c in signed])


def dephasing_coset_sum(D: BinaryCode, p: float, shift=None,
                        cap: int = DEFAULT_ENUM_CAP) -> float:
    """P(error in D + shift) at a concrete rate p; dual route when smaller."""
    if D.k <= D.n - D.k:
        shift = zeros(D.n) if shift is None else as_bits(shift, D.n)
        ws = D.weights(shift=shift, cap=cap)
        return float(np.sum((1.0 - p) ** (D.n - ws) * p ** ws))
    return survival_tpoly(D, shift, cap=cap).eval_p(p)


class StructureError(RuntimeError):
    """The code/gate pair lacks the per-syndrome rotation structure."""


@dataclass
class DistillationReport:
    """Exact protocol curves; q_out and p_success are evaluable in p.

    p_success_poly and p_good_poly are exact polynomials in t = 1 - 2p;
    the output error rate is the rational function 1 - p_good/p_success.
    For the correct-all case the headline q additionally exists as the
    simplified polynomial counting every syndrome shift as a failure,
    while q_exact credits branch cancellations.
    """

    case: str
    p_success_poly: TPoly
    p_good_poly: TPoly
    q_simplified_poly: TPoly | None = None
    threshold: float | None = None
    converges: bool = False
    taylor: list = field(default_factory=list)
    theta_L: float = 0.0
    notes: str = ""

    def p_success(self, p: float) -> float:
        return self.p_success_poly.eval_p(p)

    def q_out(self, p: float) -> float:
        if self.q_simplified_poly is not None:
            return self.q_simplified_poly.eval_p(p)
        return self.q_exact(p)

    def q_exact(self, p: float) -> float:
        return 1.0 - self.p_good_poly.eval_p(p) / self.p_success_poly.eval_p(p)

    def summary(self) -> dict:
        return {
            "case": self.case,
            "threshold": self.threshold,
            "converges": self.converges,
            "q_linear": float(self.taylor[1]) if len(self.taylor) > 1 else None,
            "theta_L": self.theta_L,
            "notes": self.notes,
        }


def _syndrome_structure(table: GenCoeffTable, tol: float = 1e-9):
    """Per-syndrome residual-Z exponents; rejects non-rotation rows.

    Every corrected row must be proportional to the trivial-syndrome row,
    i.e. B_mu ~ Zbar^(a_mu) R_Z(theta_L) with a common theta_L.
    """
    if table.code.k != 1:
        raise StructureError("distillation analysis needs exactly one logical qubit")
    a = []
    theta0 = None
    for i in range(len(table.mu_leaders)):
        if np.abs(table.A[i]).max() <= tol:
            a.append(0)  # unreachable syndrome; carries no weight
            continue
        theta, residual, _ = table.logical_rotation_angle(table.mu_leaders[i],
                                                          tol=tol)
        a.append(1 if residual else 0)
        row = table.A[i][[1, 0]] if residual else table.A[i]
        base = table.A[0]
        # proportionality of the corrected row to the trivial row
        s = np.vdot(base, row) / np.vdot(base, base)
        if np.abs(row - s * base).max() > tol:
            raise StructureError(
                f"syndrome {f2.bitstring(table.mu_leaders[i])} is not a "
                f"rotation branch")
        if theta0 is None:
            theta0 = theta
    return a, theta0


def _rational(x: float, limit: int = 1 << 24) -> Fraction:
    fr = Fraction(x).limit_denominator(limit)
    if abs(float(fr) - x) > 1e-10:
        raise StructureError(
            f"syndrome probability {x!r} is not recognisably rational; "
            f"exact polynomial curves are unavailable")
    return fr


def steane_like_analysis(code: CssCode, gate, case: str = "postselect",
                         subset=None, cap: int = DEFAULT_ENUM_CAP) -> DistillationReport:
    """Distillation curves for a one-logical-qubit code under dephasing.

    case: 'postselect' accepts only the trivial syndrome; 'correct-all'
    corrects every syndrome; 'correct-subset' additionally accepts the
    syndromes listed in ``subset`` (bit vectors), correcting each.
    """
    table = gencoeffs(code, gate, cap=cap)
    a_mu, theta_L = _syndrome_structure(table)
    mus = table.mu_leaders
    p_e = [_rational(float(np.sum(np.abs(table.A[i]) ** 2)))
           for i in range(len(mus))]
    gamma_one = table.gamma_leaders[1]

    def gamma_vec(bit: int) -> np.ndarray:
        return gamma_one if bit else zeros(code.n)

    if case == "postselect":
        accepted = [0]
    elif case == "correct-all":
        accepted = list(range(len(mus)))
    elif case == "correct-subset":
        if not subset:
            raise ValueError("correct-subset needs a list of syndromes")
        accepted = [0] + sorted({table.mu_index(s) for s in subset} - {0})
    else:
        raise ValueError(f"unknown case {case!r}")

    # Exact accounting: for accepted total syndrome mu_a and gate branch
    # mu_g, the output is correct when the error lies in
    # C1perp + (mu_a ^ mu_g) + gamma(a_mu_g ^ corr(mu_a)).
    corr = {i: (a_mu[i] if i != 0 and case != "postselect" else 0)
            for i in accepted}
    P_succ = TPoly.zero()
    p_good = TPoly.zero()
    for ia in accepted:
        for ig in range(len(mus)):
            shift = mus[ia] ^ mus[ig]
            P_succ = P_succ + survival_tpoly(code.C2perp, shift, cap=cap).scale(p_e[ig])
            need = a_mu[ig] ^ corr[ia]
            p_good = p_good + survival_tpoly(
                code.C1perp, shift ^ gamma_vec(need), cap=cap).scale(p_e[ig])
    q_simplified = None
    if case == "correct-all":
        # Simplified accounting: any syndrome shift counts as a failure, so
        # the good weight is the chance the syndrome stays intact.
        q_simplified = TPoly.const(1) - survival_tpoly(code.C2perp, None, cap=cap)
        num_p, den_p = q_simplified.in_p(), TPoly.const(1).in_p()
    else:
        num_p, den_p = (P_succ - p_good).in_p(), P_succ.in_p()

    taylor = _series_ratio(num_p, den_p, order=2)
    if taylor[0] != 0:
        raise StructureError("output error rate does not vanish at p = 0")

    report = DistillationReport(
        case=case,
        p_success_poly=P_succ,
        p_good_poly=p_good,
        q_simplified_poly=q_simplified,
        taylor=taylor,
        theta_L=theta_L,
        notes="" if case != "correct-all" else
        "q_out counts any syndrome-shifting error as a failure; "
        "q_exact credits branch cancellations",
    )
    report.converges = taylor[1] < 1
    report.threshold = _threshold(report.q_out)
    return report


def _threshold(q_func, lo: float = 1e-6, hi: float = 0.5 - 1e-6) -> float | None:
    f = lambda p: q_func(p) - p
    a, b = f(lo), f(hi)
    if a == 0.0:
        return lo
    if a * b > 0:
        # scan for an interior sign change before giving up
        grid = np.linspace(lo, hi, 201)
        vals = [f(p) for p in grid]
        for i in range(len(grid) - 1):
            if vals[i] == 0.0:
                return float(grid[i])
            if vals[i] * vals[i + 1] < 0:
                return float(brentq(f, grid[i], grid[i + 1], xtol=1e-12))
        return None
    return float(brentq(f, lo, hi, xtol=1e-12))


def threshold(report: DistillationReport) -> float | None:
    return report.threshold


def monte_carlo(code: CssCode, gate, case: str, p: float, samples: int,
                seed: int, subset=None, cap: int = DEFAULT_ENUM_CAP) -> dict:
    """Sample dephasing errors through the statevector pipeline.

    Returns success/error-rate estimates with binomial standard errors.
    The input is the encoded |+...+> state; classification compares each
    accepted branch against the error-free branch output.
    """
    rng = np.random.default_rng(seed)
    table = gencoeffs(code, gate, cap=cap)
    a_mu, _ = _syndrome_structure(table)
    mus = table.mu_leaders
    n = code.n
    if case == "postselect":
        accepted = [0]
    elif case == "correct-all":
        accepted = list(range(len(mus)))
    elif case == "correct-subset":
        accepted = [0] + sorted({table.mu_index(s) for s in subset} - {0})
    else:
        raise ValueError(f"unknown case {case!r}")
    corr = {i: (a_mu[i] if i != 0 and case != "postselect" else 0)
            for i in accepted}
    gamma_one = table.gamma_leaders[1]

    psi0 = code.encode_logical(_plus_state(code.k))
    phases = gate.phases(cap)
    out0 = phases * psi0

    # Error-free trivial-syndrome branch: the ideal output all accepted
    # branches must match after their correction.
    branch0 = code.x_syndrome_projector_action(zeros(n), out0)
    ref0 = branch0 / np.linalg.norm(branch0)
    # Per accepted syndrome: overlap probe Pi_mu Z(zhat) ref0, so that
    # |<probe|psi_e>|^2 / p_mu is the post-correction fidelity with ref0.
    probes = {}
    for ia in accepted:
        zhat = mus[ia] ^ (gamma_one if corr[ia] else zeros(n))
        probes[ia] = code.x_syndrome_projector_action(
            mus[ia], _apply_z_dense(zhat, ref0))

    xop_masks = [f2.bits_to_index(a) for a in code.C2.words()]
    idx = np.arange(1 << n)
    perms = [idx ^ m for m in xop_masks]
    mu_signs = np.array([[(-1.0) ** (f2.dot(a, mu) ^ f2.dot(a, code.r))
                          for a in code.C2.words()] for mu in mus])

    n_succ = 0
    n_err = 0
    chunk = 4096
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        errs = (rng.random((m, n)) < p).astype(np.uint8)
        masks = errs.astype(np.int64) @ (1 << np.arange(n - 1, -1, -1, dtype=np.int64))
        par = _parity_matrix(idx[None, :] & masks[:, None])
        states = out0[None, :] * (1.0 - 2.0 * par)
        # syndrome distribution via X-translation correlations
        t = np.empty((m, len(xop_masks)), dtype=complex)
        for j, perm in enumerate(perms):
            t[:, j] = np.einsum("sv,sv->s", states.conj(), states[:, perm])
        probs = (mu_signs @ t.T).T.real / len(xop_masks)
        probs = np.clip(probs, 0.0, None)
        u = rng.random(m)
        cum = np.cumsum(probs, axis=1)
        cum /= cum[:, -1:]
        drawn = (u[:, None] > cum).sum(axis=1)
        for ia in accepted:
            sel = drawn == ia
            cnt = int(sel.sum())
            if cnt == 0:
                continue
            n_succ += cnt
            overlap = np.abs(states[sel] @ probes[ia].conj()) ** 2
            fid = overlap / probs[sel, ia]
            n_err += int((fid < 0.5).sum())
        done += m
    ps_hat = n_succ / samples
    q_hat = n_err / n_succ if n_succ else float("nan")
    return {
        "p_success": ps_hat,
        "p_success_sigma": math.sqrt(max(ps_hat * (1 - ps_hat), 1e-12) / samples),
        "q": q_hat,
        "q_sigma": math.sqrt(max(q_hat * (1 - q_hat), 1e-12) / max(n_succ, 1)),
        "samples": samples,
        "accepted": n_succ,
    }


def _plus_state(k: int) -> np.ndarray:
    return np.full(1 << k, 1.0 / math.sqrt(1 << k), dtype=complex)


def _apply_z_dense(zvec: np.ndarray, psi: np.ndarray) -> np.ndarray:
    n = zvec.size
    idx = np.arange(1 << n)
    par = _parity_matrix(idx & f2.bits_to_index(zvec))
    return (1.0 - 2.0 * par) * psi


def _parity_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64).copy()
    out = np.zeros(x.shape, dtype=np.int64)
    while x.any():
        out ^= (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return out
