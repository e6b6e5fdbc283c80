"""Generator-coefficient tables for a diagonal gate acting on a CSS code.

The table A[mu][gamma] attaches a complex coefficient to every pair of an
X-syndrome coset mu (of C2perp in F2^n) and a Z-logical coset gamma (of
C1perp in C2perp).  Three construction routes are provided: the defining
coset sum over the gate's Pauli-Z expansion, and closed forms summing over
C1 + y for transversal rotations and quadratic-form gates.  Every route
produces the same table up to numerical error and every constructed table
is checked against the unitarity sum rule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import f2
from .css import CssCode, PauliOp
from .f2 import (DEFAULT_ENUM_CAP, EnumerationCapExceeded, as_bits,
                 bits_to_index, bitstring, weight, zeros)
from .gates import QFD, DiagonalGate, PhaseTable, RotZ, popcount

SUM_RULE_TOL = 1e-9

# Every table construction appends (label, deviation); the acceptance suite
# asserts that nothing anywhere ever violated the sum rule.
SUM_RULE_LOG: list[tuple[str, float]] = []


class PreservationError(RuntimeError):
    """Raised when a logical operator is requested from a non-preserving pair."""


@dataclass
class LogicalDiagonalOp:
    """Operator sum_alpha c[alpha] * Zbar^alpha on k logical qubits."""

    k: int
    coeffs: np.ndarray  # length 2^k, index alpha as integer (first qubit = MSB)

    def diagonal(self) -> np.ndarray:
        """Diagonal entries d(b) = sum_alpha c[alpha] (-1)^(alpha.b)."""
        from .gates import fwht

        return fwht(self.coeffs)

    def unitary_deviation(self) -> float:
        d = np.abs(self.diagonal())
        return float(np.abs(d - 1.0).max())

    def canonical(self) -> "LogicalDiagonalOp":
        """Normalise the global phase: largest-modulus coefficient real > 0."""
        i = int(np.argmax(np.abs(self.coeffs)))
        c = self.coeffs[i]
        if abs(c) == 0:
            return self
        return LogicalDiagonalOp(self.k, self.coeffs * (abs(c) / c))

    def equals_up_to_global_phase(self, other: "LogicalDiagonalOp",
                                  tol: float = 1e-9) -> bool:
        a = self.canonical().coeffs
        b = other.canonical().coeffs
        return bool(np.abs(a - b).max() <= tol)

    def equals_up_to_phase_and_relabeling(self, other: "LogicalDiagonalOp",
                                          tol: float = 1e-9) -> bool:
        """Equality allowing a global phase and a permutation of the logical
        qubits (the coset-generator pairing leaves the qubit order free)."""
        from itertools import permutations

        if self.k != other.k:
            return False
        da = self.canonical_diagonal()
        db = other.canonical_diagonal()
        k = self.k
        for perm in permutations(range(k)):
            idx = np.empty(1 << k, dtype=np.int64)
            for b in range(1 << k):
                bits = [(b >> (k - 1 - i)) & 1 for i in range(k)]
                pb = sum(bits[perm[i]] << (k - 1 - i) for i in range(k))
                idx[b] = pb
            if np.abs(da[idx] - db).max() <= tol:
                return True
        return False

    def canonical_diagonal(self) -> np.ndarray:
        d = self.diagonal()
        i = int(np.argmax(np.abs(d)))
        ph = d[i] / abs(d[i]) if abs(d[i]) else 1.0
        return d / ph


def diagonal_op_from_matrix_diag(diag) -> LogicalDiagonalOp:
    """Build from explicit diagonal entries (inverse character transform)."""
    from .gates import fwht

    diag = np.asarray(diag, dtype=complex)
    k = int(diag.size).bit_length() - 1
    return LogicalDiagonalOp(k, fwht(diag) / (1 << k))


class GenCoeffTable:
    """Complex matrix A indexed by syndrome and logical coset leaders."""

    def __init__(self, code: CssCode, gate_label: str,
                 mu_leaders, gamma_leaders, A: np.ndarray,
                 check: bool = True):
        self.code = code
        self.gate_label = gate_label
        self.mu_leaders = list(mu_leaders)
        self.gamma_leaders = list(gamma_leaders)
        self.A = np.asarray(A, dtype=complex)
        assert self.A.shape == (len(self.mu_leaders), len(self.gamma_leaders))
        self._gamma_index = {f2.key(g): j for j, g in enumerate(self.gamma_leaders)}
        self._mu_index = {f2.key(m): i for i, m in enumerate(self.mu_leaders)}
        if check:
            dev = self.sum_rule_deviation()
            SUM_RULE_LOG.append((f"{code!r} | {gate_label}", dev))
            if dev > 1e-6:
                raise AssertionError(
                    f"generator coefficients violate the sum rule ({dev:.3e})")

    # -- indexing -------------------------------------------------------------

    def mu_index(self, mu) -> int:
        mu = as_bits(mu, self.code.n)
        k = f2.key(mu)
        if k in self._mu_index:
            return self._mu_index[k]
        return self._mu_index[f2.key(self._syndrome_family().leader_of(mu))]

    def gamma_index(self, gamma) -> int:
        gamma = as_bits(gamma, self.code.n)
        k = f2.key(gamma)
        if k in self._gamma_index:
            return self._gamma_index[k]
        return self._gamma_index[f2.key(self.code.logical_cosets.leader_of(gamma))]

    def _syndrome_family(self):
        if not hasattr(self, "_syn_fam"):
            self._syn_fam = self.code.syndrome_cosets()
        return self._syn_fam

    def entry(self, mu, gamma) -> complex:
        return self.A[self.mu_index(mu), self.gamma_index(gamma)]

    def _gamma_xor_map(self) -> np.ndarray:
        """perm[e, j] = index of the coset of gamma_j ^ gamma_e."""
        if not hasattr(self, "_gxor"):
            g = len(self.gamma_leaders)
            perm = np.empty((g, g), dtype=np.int64)
            for e in range(g):
                for j in range(g):
                    perm[e, j] = self.gamma_index(
                        self.gamma_leaders[e] ^ self.gamma_leaders[j])
            self._gxor = perm
        return self._gxor

    # -- spec-level quantities --------------------------------------------------

    def sum_rule_deviation(self) -> float:
        """Max |sum_mu sum_gamma conj(A[mu,g]) A[mu,g^eta] - delta_{eta,0}|."""
        perm = self._gamma_xor_map()
        dev = 0.0
        for e in range(len(self.gamma_leaders)):
            s = np.vdot(self.A, self.A[:, perm[e]])
            target = 1.0 if e == 0 else 0.0
            dev = max(dev, abs(s - target))
        return float(dev)

    def preserves(self, tol: float = SUM_RULE_TOL) -> bool:
        """Codespace preservation: the zero-syndrome row carries all weight."""
        s = float(np.sum(np.abs(self.A[0]) ** 2))
        return abs(s - 1.0) <= tol

    def zero_row_weight(self) -> float:
        return float(np.sum(np.abs(self.A[0]) ** 2))

    def induced_logical(self, tol: float = SUM_RULE_TOL) -> LogicalDiagonalOp:
        if not self.preserves(tol):
            raise PreservationError(
                f"gate does not preserve the codespace "
                f"(zero-row weight {self.zero_row_weight():.12f})")
        k = self.code.k
        coeffs = np.zeros(1 << k, dtype=complex)
        for j, gamma in enumerate(self.gamma_leaders):
            beta = self.code.gamma_label(gamma)
            coeffs[bits_to_index(beta)] = self.A[0, j]
        return LogicalDiagonalOp(k, coeffs)

    def logical_rotation_angle(self, mu, tol: float = SUM_RULE_TOL):
        """For k = 1: angle theta_L with B_mu ~ Zbar^a R_Z(theta_L).

        Returns (theta_L, residual_pauli, ambiguous_sign); residual_pauli
        marks the Zbar * R_Z case, ambiguous_sign marks theta_L = +-pi where
        the branch is undefined.
        """
        if self.code.k != 1:
            raise ValueError("logical rotation angle needs exactly one logical qubit")
        i = self.mu_index(mu)
        a0, a1 = self.A[i, 0], self.A[i, 1]
        scale = max(abs(a0), abs(a1))
        if scale == 0:
            raise PreservationError(f"row {bitstring(self.mu_leaders[i])} is zero")
        re0, im0 = abs(a0.real) / scale, abs(a0.imag) / scale
        re1, im1 = abs(a1.real) / scale, abs(a1.imag) / scale
        a0_real, a0_imag = im0 <= tol, re0 <= tol
        a1_real, a1_imag = im1 <= tol, re1 <= tol
        if a0_real and a1_imag:
            if abs(a0) / scale <= tol:
                return math.pi, False, True
            theta = 2.0 * math.atan((1j * a1).real / a0.real)
            return theta, False, False
        if a0_imag and a1_real:
            if abs(a1) / scale <= tol:
                return math.pi, True, True
            theta = 2.0 * math.atan((-1j * a0).real / a1.real)
            return theta, True, False
        raise ValueError(
            f"row is not of rotation type: A0={a0!r}, A1={a1!r}")

    # -- presentation -----------------------------------------------------------

    def nontrivial_rows_equal(self, tol: float = 1e-9) -> bool:
        if self.A.shape[0] <= 2:
            return True
        rest = self.A[1:]
        return bool(np.abs(rest - rest[0]).max() <= tol)

    def collapsed(self, tol: float = 1e-9):
        """Two-row view [trivial, common-nontrivial] when rows allow it."""
        if not self.nontrivial_rows_equal(tol):
            raise ValueError("nontrivial syndrome rows differ; cannot collapse")
        return self.A[:1], (self.A[1] if self.A.shape[0] > 1 else None)

    def to_csv(self) -> str:
        lines = ["mu,gamma,re,im"]
        for i, mu in enumerate(self.mu_leaders):
            for j, g in enumerate(self.gamma_leaders):
                a = self.A[i, j]
                lines.append(f"{bitstring(mu)},{bitstring(g)},"
                             f"{a.real:.12g},{a.imag:.12g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "n": self.code.n,
            "k": self.code.k,
            "gate": self.gate_label,
            "mu_leaders": [bitstring(m) for m in self.mu_leaders],
            "gamma_leaders": [bitstring(g) for g in self.gamma_leaders],
            "entries": [[[round(a.real, 12), round(a.imag, 12)] for a in row]
                        for row in self.A],
            "sum_rule_deviation": self.sum_rule_deviation(),
            "zero_row_weight": self.zero_row_weight(),
            "preserves": self.preserves(),
        }
        return json.dumps(payload, indent=2, sort_keys=True)


# -- construction routes --------------------------------------------------------


def _leader_sets(code: CssCode, cap: int):
    mu_fam = code.syndrome_cosets(cap=cap)
    gamma_fam = code.logical_cosets
    return mu_fam.leaders, gamma_fam.leaders


def gencoeffs_direct(code: CssCode, gate: DiagonalGate,
                     cap: int = DEFAULT_ENUM_CAP) -> GenCoeffTable:
    """Defining route: A[mu,gamma] = sum over C1perp+mu+gamma of signed f."""
    if gate.n != code.n:
        raise ValueError("gate/code length mismatch")
    if (1 << code.n) > cap:
        raise EnumerationCapExceeded(f"direct route needs 2^{code.n} coefficients")
    f = gate.pauli_z_table(cap)
    mus, gammas = _leader_sets(code, cap)
    words = code.C1perp.words(cap)
    base_idx = np.array([bits_to_index(b) for b in words], dtype=np.int64)
    signs = 1.0 - 2.0 * ((words @ code.y.astype(np.int64)) & 1)
    A = np.empty((len(mus), len(gammas)), dtype=complex)
    for i, mu in enumerate(mus):
        for j, g in enumerate(gammas):
            shift = mu ^ g
            outer = -1.0 if f2.dot(shift, code.y) else 1.0
            A[i, j] = outer * np.sum(signs * f[base_idx ^ bits_to_index(shift)])
    return GenCoeffTable(code, _gate_label(gate), mus, gammas, A)


def _phases_over_c1_shifted(code: CssCode, gate: DiagonalGate, cap: int):
    """Gate phases phi(u ^ y) for u in C1, plus the C1 word array."""
    words = code.C1.words(cap)
    shifted = words ^ code.y
    if isinstance(gate, RotZ):
        w = np.count_nonzero(shifted, axis=1)
        ph = np.exp(-0.5j * gate.theta * (code.n - 2.0 * w))
    elif isinstance(gate, QFD):
        v = shifted.astype(np.int64)
        q = np.einsum("vi,ij,vj->v", v, gate.R, v) % (1 << gate.level)
        ph = np.exp(1j * math.pi * q / (1 << (gate.level - 1)))
    else:
        raise TypeError("closed-form route requires a RotZ or QFD gate")
    return words, ph


def _gencoeffs_closed(code: CssCode, gate: DiagonalGate,
                      cap: int) -> GenCoeffTable:
    if gate.n != code.n:
        raise ValueError("gate/code length mismatch")
    if (1 << code.C1.k) > cap:
        raise EnumerationCapExceeded(f"closed route needs 2^{code.C1.k} words")
    words, ph = _phases_over_c1_shifted(code, gate, cap)
    mus, gammas = _leader_sets(code, cap)
    A = np.empty((len(mus), len(gammas)), dtype=complex)
    inv = 1.0 / len(code.C1)
    for i, mu in enumerate(mus):
        for j, g in enumerate(gammas):
            par = (words @ (mu ^ g).astype(np.int64)) & 1
            A[i, j] = inv * np.sum((1.0 - 2.0 * par) * ph)
    return GenCoeffTable(code, _gate_label(gate), mus, gammas, A)


def gencoeffs_rz(code: CssCode, theta: float,
                 cap: int = DEFAULT_ENUM_CAP) -> GenCoeffTable:
    """Closed form over C1 + y for the transversal Z-rotation."""
    return _gencoeffs_closed(code, RotZ(code.n, theta), cap)


def gencoeffs_qfd(code: CssCode, R, level: int,
                  cap: int = DEFAULT_ENUM_CAP) -> GenCoeffTable:
    """Closed form over C1 + y for a quadratic-form diagonal gate."""
    return _gencoeffs_closed(code, QFD(R, level), cap)


def gencoeffs(code: CssCode, gate: DiagonalGate,
              cap: int = DEFAULT_ENUM_CAP) -> GenCoeffTable:
    """Route selection: closed forms for RotZ/QFD, defining sum otherwise."""
    if isinstance(gate, (RotZ, QFD)):
        return _gencoeffs_closed(code, gate, cap)
    return gencoeffs_direct(code, gate, cap)


def _gate_label(gate: DiagonalGate) -> str:
    if isinstance(gate, RotZ):
        return f"rz:{gate.theta:.12g}"
    if isinstance(gate, QFD):
        return f"qfd:l={gate.level}"
    return f"table:n={gate.n}"


def verify_sum_rule(table: GenCoeffTable) -> dict:
    """Report the maximal sum-rule deviation (Kraus completeness)."""
    dev = table.sum_rule_deviation()
    return {
        "deviation": dev,
        "ok": dev < SUM_RULE_TOL,
        "cells": int(table.A.size),
    }


# -- preservation for large codes (zero-row route) --------------------------------


def zero_row_weight_bucketed(code: CssCode, gate: DiagonalGate,
                             cap: int = DEFAULT_ENUM_CAP) -> float:
    """sum_gamma |A[0,gamma]|^2 computed by one pass over C2perp.

    Needs 2^(n-k2) enumerable; never touches syndrome coset families, so it
    scales to codes whose full table would be unreachable.
    """
    if (1 << code.C2perp.k) > cap:
        raise EnumerationCapExceeded(
            f"zero-row route needs 2^{code.C2perp.k} words")
    words = code.C2perp.words(cap)
    # gamma-coset id of each word: syndrome w.r.t. C1perp.
    H = code.C1perp.syndrome_map()
    if H.shape[0]:
        syn = (words @ H.T) & 1
        ids = np.zeros(words.shape[0], dtype=np.int64)
        for c in range(syn.shape[1]):
            ids = (ids << 1) | syn[:, c]
    else:
        ids = np.zeros(words.shape[0], dtype=np.int64)
    signs = 1.0 - 2.0 * ((words @ code.y.astype(np.int64)) & 1)
    if isinstance(gate, RotZ):
        w = np.count_nonzero(words, axis=1)
        fvals = gate.pauli_z_weight_values()[w]
    else:
        f = gate.pauli_z_table(cap)
        idx = np.array([bits_to_index(b) for b in words], dtype=np.int64)
        fvals = f[idx]
    contrib = signs * fvals
    order = np.argsort(ids, kind="stable")
    ids_sorted = ids[order]
    contrib_sorted = contrib[order]
    cuts = np.nonzero(np.diff(ids_sorted))[0] + 1
    sums = np.add.reduceat(contrib_sorted, np.concatenate([[0], cuts]))
    return float(np.sum(np.abs(sums) ** 2))
