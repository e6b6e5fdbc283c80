"""Diagonal gates on n qubits: transversal Z-rotations, quadratic-form
diagonal gates, and generic phase tables.

Every gate exposes two views: the diagonal entry at a basis state v, and
the coefficient f(v) of its expansion over Pauli-Z strings E(0, v), with
U = sum_v f(v) E(0, v).
"""

from __future__ import annotations

import math

import numpy as np

from .f2 import (DEFAULT_ENUM_CAP, EnumerationCapExceeded, as_bits,
                 bits_to_index, weight)


def fwht(a: np.ndarray) -> np.ndarray:
    """In-place unnormalised Walsh-Hadamard transform of a length-2^n array."""
    a = np.array(a, dtype=complex)
    h = 1
    while h < a.size:
        a = a.reshape(-1, 2, h)
        x = a[:, 0, :].copy()
        a[:, 0, :] = x + a[:, 1, :]
        a[:, 1, :] = x - a[:, 1, :]
        a = a.reshape(-1)
        h *= 2
    return a


class DiagonalGate:
    """Base class; subclasses fill in phases() or phase_at()."""

    n: int

    def phase_at(self, v) -> complex:
        raise NotImplementedError

    def phases(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All 2^n diagonal entries, indexed by basis-state index."""
        if (1 << self.n) > cap:
            raise EnumerationCapExceeded(f"2^{self.n} phases exceed cap {cap}")
        out = np.empty(1 << self.n, dtype=complex)
        for idx in range(1 << self.n):
            bits = [(idx >> (self.n - 1 - i)) & 1 for i in range(self.n)]
            out[idx] = self.phase_at(as_bits(bits))
        return out

    def pauli_z_coefficient(self, v) -> complex:
        """f(v) with U = sum f(v) E(0, v); default via the Walsh transform."""
        v = as_bits(v, self.n)
        table = self.pauli_z_table()
        return table[bits_to_index(v)]

    def pauli_z_table(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All f(v) as an array indexed like the basis states.

        f(u) = 2^-n * sum_v phase(v) (-1)^(u.v); the index order of the
        Walsh transform matches the basis-state index order.
        """
        return fwht(self.phases(cap)) / (1 << self.n)

    def unitarity_deviation(self, cap: int = DEFAULT_ENUM_CAP) -> float:
        """Max deviation of sum_v f(v) conj(f(v^w)) from delta_{w,0}."""
        f = self.pauli_z_table(cap)
        n = self.n
        # Autocorrelation over the XOR group via two Walsh transforms.
        ac = fwht(np.abs(fwht(f)) ** 2) / (1 << n)
        ac[0] -= 1.0
        return float(np.abs(ac).max())


class RotZ(DiagonalGate):
    """Transversal Z-rotation: exp(-i theta Z / 2) on each of n qubits."""

    def __init__(self, n: int, theta: float):
        self.n = int(n)
        self.theta = float(theta)

    def __repr__(self) -> str:
        return f"RotZ(n={self.n}, theta={self.theta!r})"

    def phase_at(self, v) -> complex:
        w = weight(as_bits(v, self.n))
        return np.exp(-0.5j * self.theta * (self.n - 2 * w))

    def phases(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        if (1 << self.n) > cap:
            raise EnumerationCapExceeded(f"2^{self.n} phases exceed cap {cap}")
        idx = np.arange(1 << self.n, dtype=np.uint64)
        w = popcount(idx)
        return np.exp(-0.5j * self.theta * (self.n - 2.0 * w))

    def pauli_z_coefficient(self, v) -> complex:
        # Closed form instead of the Walsh transform.
        w = weight(as_bits(v, self.n))
        c = math.cos(self.theta / 2.0)
        s = math.sin(self.theta / 2.0)
        return (c ** (self.n - w)) * ((-1j * s) ** w)

    def pauli_z_table(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        if (1 << self.n) > cap:
            raise EnumerationCapExceeded(f"2^{self.n} coefficients exceed cap {cap}")
        idx = np.arange(1 << self.n, dtype=np.uint64)
        w = popcount(idx)
        return self.pauli_z_weight_values()[w]

    def pauli_z_weight_values(self) -> np.ndarray:
        """f as a function of Hamming weight only: values for w = 0..n."""
        w = np.arange(self.n + 1)
        c = math.cos(self.theta / 2.0)
        s = math.sin(self.theta / 2.0)
        return (c ** (self.n - w)) * ((-1j * s) ** w)


class QFD(DiagonalGate):
    """Quadratic-form diagonal gate: phase xi_l^(v R v^T mod 2^l).

    R is a symmetric integer matrix taken mod 2^l; xi_l = exp(i pi / 2^(l-1)).
    """

    def __init__(self, R, level: int):
        R = np.asarray(R, dtype=np.int64)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError("R must be a square matrix")
        if level < 1:
            raise ValueError("level must be >= 1")
        self.level = int(level)
        R = R % (1 << self.level)
        if not np.array_equal(R, R.T):
            raise ValueError("R must be symmetric")
        self.R = R
        self.R.flags.writeable = False
        self.n = int(R.shape[0])

    def __repr__(self) -> str:
        return f"QFD(n={self.n}, level={self.level})"

    def quadratic_form(self, v) -> int:
        """v R v^T as an exact integer mod 2^level (bits lifted to Z)."""
        v = as_bits(v, self.n).astype(np.int64)
        return int(v @ self.R @ v) % (1 << self.level)

    def phase_at(self, v) -> complex:
        e = self.quadratic_form(v)
        return np.exp(1j * math.pi * e / (1 << (self.level - 1)))

    def phases(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        if (1 << self.n) > cap:
            raise EnumerationCapExceeded(f"2^{self.n} phases exceed cap {cap}")
        vs = np.zeros((1 << self.n, self.n), dtype=np.int64)
        for i in range(self.n):
            vs[:, i] = (np.arange(1 << self.n) >> (self.n - 1 - i)) & 1
        q = np.einsum("vi,ij,vj->v", vs, self.R, vs) % (1 << self.level)
        return np.exp(1j * math.pi * q / (1 << (self.level - 1)))


class PhaseTable(DiagonalGate):
    """Arbitrary diagonal gate given by its 2^n unit-modulus entries."""

    def __init__(self, table, tol: float = 1e-12):
        table = np.asarray(table, dtype=complex)
        if table.ndim != 1 or table.size & (table.size - 1):
            raise ValueError("table length must be a power of two")
        if np.abs(np.abs(table) - 1.0).max() > tol:
            raise ValueError("diagonal entries must have modulus 1")
        self.table = table
        self.table.flags.writeable = False
        self.n = int(table.size).bit_length() - 1

    def __repr__(self) -> str:
        return f"PhaseTable(n={self.n})"

    def phase_at(self, v) -> complex:
        return self.table[bits_to_index(as_bits(v, self.n))]

    def phases(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        return self.table


def popcount(idx: np.ndarray) -> np.ndarray:
    """Vectorised popcount for an array of uint64 indices."""
    idx = np.asarray(idx, dtype=np.uint64)
    w = np.zeros(idx.shape, dtype=np.int64)
    x = idx.copy()
    while x.any():
        w += (x & 1).astype(np.int64)
        x >>= np.uint64(1)
    return w


def rz(n: int, theta: float) -> RotZ:
    return RotZ(n, theta)


def qfd(R, level: int) -> QFD:
    return QFD(R, level)


def phase_table(table) -> PhaseTable:
    return PhaseTable(table)


def identity(n: int) -> RotZ:
    return RotZ(n, 0.0)


def cz_pairs(n: int, pairs, level: int = 2) -> QFD:
    """QFD with R coupling the given qubit pairs (CZ for level 2, CP for 3)."""
    R = np.zeros((n, n), dtype=np.int64)
    for (i, j) in pairs:
        R[i, j] = R[j, i] = 1
    return QFD(R, level)


def parse_theta(text: str) -> float:
    """Parse an angle: plain radians, 'pi', 'pi/4', '2pi/3', '-pi/8', '3pi'."""
    t = text.strip().lower().replace(" ", "")
    if "pi" in t:
        head, _, tail = t.partition("pi")
        num = 1.0
        if head not in ("", "+", "-"):
            num = float(head)
        elif head == "-":
            num = -1.0
        den = 1.0
        if tail:
            if not tail.startswith("/"):
                raise ValueError(f"cannot parse angle {text!r}")
            den = float(tail[1:])
        return num * math.pi / den
    return float(t)
