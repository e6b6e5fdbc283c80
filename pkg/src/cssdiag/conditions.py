"""Exact preservation criteria for diagonal gates on CSS codes.

Everything here decides codespace preservation without floating point
wherever an integer route exists: weight divisibility for transversal
rotations through pi/p, quadratic-form divisibility for QFD gates (whole
and split into sign-dependent / sign-free halves), the Reed-Muller level
bound with its code constructions, and the per-stabilizer trigonometric
identity.  Large codes are handled by switching to the dual side of each
weight enumerator instead of silently truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import f2
from .css import CssCode
from .f2 import (BinaryCode, DEFAULT_ENUM_CAP, EnumerationCapExceeded,
                 as_bits, macwilliams_transform, reed_muller, rm_dimension,
                 restrict_to_support, shorten_to_support,
                 signed_weight_enumerator, weight, zeros)


class UnsupportedAngle(ValueError):
    """The trigonometric identity is undefined (secant pole)."""


@dataclass
class DivisibilityReport:
    holds: bool
    # ("pair", w, z): vectors violating the divisibility directly;
    # ("weight_class", w, j): a coset weight class reached from w.
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def _coset_weight_classes(C1: BinaryCode, C1perp: BinaryCode, w, y,
                          cap: int = DEFAULT_ENUM_CAP):
    """Weights occurring in {(w*z)|supp(w) : z in C1 + y}.

    Enumerates the restriction of C1 to supp(w) or, when its shortened dual
    is smaller, that dual followed by an exact MacWilliams transform.
    Returns (weights_present, m_w, route).
    """
    w = as_bits(w)
    m_w = weight(w)
    D_w = restrict_to_support(C1, w)
    shift = (as_bits(y, w.size) & w)[np.nonzero(w)[0]]
    dim_dual = m_w - D_w.k
    if D_w.k <= dim_dual and (1 << D_w.k) <= cap:
        ws = D_w.weights(shift=shift, cap=cap)
        return sorted(set(int(x) for x in ws)), m_w, "primal"
    Z_w = shorten_to_support(C1perp, w)
    if (1 << Z_w.k) > cap:
        raise EnumerationCapExceeded("both sides of the restriction exceed the cap")
    signed = signed_weight_enumerator(Z_w, shift, cap=cap)
    counts = macwilliams_transform(signed, m_w, len(Z_w))
    return [j for j, c in enumerate(counts) if c != 0], m_w, "dual"


def _witness_vector(C1: BinaryCode, w, y, target_weight: int):
    """Recover z in C1 + y with w_H(w*z) == target_weight, if enumerable."""
    w = as_bits(w, C1.n)
    sup = np.nonzero(w)[0]
    D_w = restrict_to_support(C1, w)
    if (1 << C1.k) > (1 << 16):
        return None
    for u in C1.words():
        z = u ^ as_bits(y, C1.n)
        if int(((w & z)[sup]).sum()) == target_weight:
            return z
    return None


def rz_divisibility(code: CssCode, p: int,
                    cap: int = DEFAULT_ENUM_CAP) -> DivisibilityReport:
    """R_Z(pi/p) preserves the codespace iff 2p | w_H(w) - 2 w_H(w*z)
    for every w in C2 and z in C1 + y.  Exact integer arithmetic."""
    if p <= 0:
        raise ValueError("p must be a positive integer")
    if (1 << code.C2.k) > cap:
        raise EnumerationCapExceeded(f"2^{code.C2.k} X-stabilizers exceed cap")
    for w in code.C2.words():
        if not w.any():
            continue
        weights, m_w, _ = _coset_weight_classes(code.C1, code.C1perp, w,
                                                code.y, cap=cap)
        for j in weights:
            if (m_w - 2 * j) % (2 * p) != 0:
                z = _witness_vector(code.C1, w, code.y, j)
                if z is not None:
                    return DivisibilityReport(False, ("pair", w.copy(), z))
                return DivisibilityReport(False, ("weight_class", w.copy(), j))
    return DivisibilityReport(True)


def positive_sign_pi2l(code: CssCode, l: int,
                       cap: int = DEFAULT_ENUM_CAP) -> tuple[bool, bool]:
    """For all-positive signs: (2^l | w_H(w) for w in C2,
    2^(l-1) | w_H(w*z) for w in C2, z in C1).

    The conjunction equals rz_divisibility(code, 2^(l-1)).
    """
    if code.y.any():
        raise ValueError("positive-sign criterion requires y = 0")
    if l < 1:
        raise ValueError("l must be >= 1")
    # Condition (a): weights of C2 divisible by 2^l; enumerate the smaller
    # of C2 and its dual (MacWilliams recovers the weight classes exactly).
    cond_a = True
    if (1 << code.C2.k) <= cap:
        ws = code.C2.weights(cap=cap)
        cond_a = all(int(w) % (1 << l) == 0 for w in ws)
    else:
        signed = f2.weight_enumerator(code.C2perp, cap=cap)
        counts = macwilliams_transform(signed, code.n, len(code.C2perp))
        cond_a = all(w % (1 << l) == 0
                     for w, c in enumerate(counts) if c != 0)
    cond_b = True
    if (1 << code.C2.k) > cap:
        raise EnumerationCapExceeded(f"2^{code.C2.k} X-stabilizers exceed cap")
    for w in code.C2.words():
        if not w.any():
            continue
        weights, _, _ = _coset_weight_classes(code.C1, code.C1perp, w,
                                              zeros(code.n), cap=cap)
        if any(j % (1 << (l - 1)) != 0 for j in weights):
            cond_b = False
            break
    return cond_a, cond_b


def qfd_divisibility(code: CssCode, R, l: int,
                     cap: int = DEFAULT_ENUM_CAP) -> DivisibilityReport:
    """QFD gate preservation: 2^l | v1 R v1^T - v2 R v2^T for all
    v1 in C1 + y and v2 = v1 ^ w with w in C2."""
    R = np.asarray(R, dtype=np.int64) % (1 << l)
    if not np.array_equal(R, R.T):
        raise ValueError("R must be symmetric")
    if (1 << code.C1.k) * (1 << code.C2.k) > cap:
        raise EnumerationCapExceeded("pair enumeration exceeds cap")
    mod = 1 << l
    v1s = (code.C1.words(cap) ^ code.y).astype(np.int64)
    q1 = np.einsum("vi,ij,vj->v", v1s, R, v1s) % mod
    for w in code.C2.words():
        if not w.any():
            continue
        v2s = v1s ^ w.astype(np.int64)
        q2 = np.einsum("vi,ij,vj->v", v2s, R, v2s) % mod
        bad = np.nonzero((q1 - q2) % mod)[0]
        if bad.size:
            i = int(bad[0])
            return DivisibilityReport(
                False, ("pair", v1s[i].astype(np.uint8), w.copy()))
    return DivisibilityReport(True)


def qfd_divisibility_split(code: CssCode, R, l: int,
                           cap: int = DEFAULT_ENUM_CAP) -> tuple[bool, bool]:
    """The two halves: (sign-dependent over C2 + y, sign-free cross term).

    cond_a: 2^l | v1 R v1^T - v2 R v2^T for v1, v2 in C2 + y;
    cond_b: 2^(l-1) | (u1 - u2) R w^T for u1, u2 in C2 and w in C1/C2 reps.
    The conjunction is equivalent to qfd_divisibility.
    """
    R = np.asarray(R, dtype=np.int64) % (1 << l)
    mod = 1 << l
    if (1 << (2 * code.C2.k)) > cap:
        raise EnumerationCapExceeded("pair enumeration exceeds cap")
    us = code.C2.words(cap).astype(np.int64)
    shifted = us + (code.y.astype(np.int64) - 2 * (us & code.y.astype(np.int64)))
    # shifted rows are exactly (u ^ y) lifted to Z
    q = np.einsum("vi,ij,vj->v", shifted, R, shifted) % mod
    cond_a = bool(((q[None, :] - q[:, None]) % mod == 0).all())

    halfmod = 1 << (l - 1)
    reps = [(as_bits(a, code.k) @ code.G_C1_over_C2) & 1
            for a in (f2.index_to_bits(t, code.k) for t in range(1 << code.k))]
    cond_b = True
    for wrep in reps:
        if not wrep.any():
            continue
        rw = R @ wrep.astype(np.int64)
        vals = us @ rw
        diff = (vals[None, :] - vals[:, None]) % halfmod if halfmod > 1 \
            else np.zeros((1, 1), dtype=np.int64)
        if (diff != 0).any():
            cond_b = False
            break
    return cond_a, cond_b


def rm_max_level(r1: int, r2: int, m: int) -> int:
    """Largest l such that the Reed-Muller CSS construction survives a
    transversal rotation through pi / 2^(l-1)."""
    if not (0 <= r2 <= r1 <= m) or m < 1:
        raise ValueError(f"invalid parameters r1={r1}, r2={r2}, m={m}")
    if r2 == 0:
        return (m - 1) // r1 + 1
    return min((m - r2 - 1) // r1 + 1, (m - r1) // r2 + 1)


def build_rm_css(r1: int, r2: int, m: int, punctured: bool = False) -> CssCode:
    """CSS(X, RM(r2,m); Z, dual(RM(r1,m))) with trivial signs.

    The punctured variant removes the first coordinate of C1 and both the
    all-ones generator row and the first coordinate of C2; it admits
    r1 == r2 and has length 2^m - 1.
    """
    if punctured:
        if not (0 <= r2 <= r1 <= m):
            raise ValueError("need 0 <= r2 <= r1 <= m")
        C1 = f2.puncture_first(reed_muller(r1, m))
        C2 = f2.puncture_first(f2.drop_allones_row(reed_muller(r2, m)))
        code = CssCode(C2, C1.dual())
        expected_k = sum(math.comb(m, j) for j in range(r2 + 1, r1 + 1)) + 1
    else:
        if not (0 <= r2 < r1 <= m):
            raise ValueError("need 0 <= r2 < r1 <= m")
        C1 = reed_muller(r1, m)
        C2 = reed_muller(r2, m)
        code = CssCode(C2, C1.dual())
        expected_k = sum(math.comb(m, j) for j in range(r2 + 1, r1 + 1))
    if code.k != expected_k:
        raise AssertionError(
            f"RM construction produced k={code.k}, expected {expected_k}")
    return code


def trig_condition(code: CssCode, theta: float, tol: float = 1e-9,
                   cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Per-stabilizer trigonometric criterion for R_Z(theta).

    For every nonzero w in C2 the shortened Z-stabilizer code on supp(w)
    must satisfy  sum_v eps_v (i tan t)^(w_H(v)) = (sec t)^(w_H(w)); the
    check is evaluated in the pole-free form multiplied through by
    cos(t)^(w_H(w)).
    """
    if abs(math.cos(theta)) < 1e-12:
        raise UnsupportedAngle(
            "secant pole at theta = pi/2 + k pi; use the sum-square route")
    if (1 << code.C2.k) > cap:
        raise EnumerationCapExceeded(f"2^{code.C2.k} X-stabilizers exceed cap")
    ct, st = math.cos(theta), math.sin(theta)
    for w in code.C2.words():
        if not w.any():
            continue
        m_w = weight(w)
        Z_w = shorten_to_support(code.C1perp, w)
        if (1 << Z_w.k) > cap:
            raise EnumerationCapExceeded("shortened code exceeds cap")
        sup = np.nonzero(w)[0]
        character = (code.y & w)[sup]
        words = Z_w.words(cap)
        wt = np.count_nonzero(words, axis=1)
        eps = 1.0 - 2.0 * ((words @ character.astype(np.int64)) & 1)
        total = np.sum(eps * (1j * st) ** wt * ct ** (m_w - wt))
        if abs(total - 1.0) > tol:
            return False
    return True


def preserved_rz_pi_over(code: CssCode, p: int,
                         cap: int = DEFAULT_ENUM_CAP,
                         numeric_guard: float = 1e-6) -> bool:
    """Preservation verdict for R_Z(pi/p), choosing an affordable route.

    Exact weight divisibility when C2 is cheap to sweep; otherwise the
    zero-syndrome-row weight computed in one pass over C2perp, guarded so a
    numerically ambiguous verdict raises instead of guessing.
    """
    if (1 << code.C2.k) <= (1 << 12):
        return bool(rz_divisibility(code, p, cap=cap))
    from .gates import RotZ
    from .gencoef import zero_row_weight_bucketed

    s = zero_row_weight_bucketed(code, RotZ(code.n, math.pi / p), cap=cap)
    if abs(s - 1.0) >= 1e-9 and abs(s - 1.0) < numeric_guard:
        raise ArithmeticError(
            f"zero-row weight {s!r} too close to 1 to decide numerically")
    return abs(s - 1.0) < 1e-9
