"""CSS codes with arbitrary stabilizer signs.

A CSS code is specified by the X-stabilizer code C2, the Z-stabilizer code
C1perp (with C2 inside C1 = dual(C1perp)), and two character vectors r, y
fixing the generator signs via (-1)^(a.r) for X-type and (-1)^(b.y) for
Z-type elements.  The module provides the signed encoding map, logical
Pauli operators, and X-syndrome projectors acting on dense statevectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import f2
from .f2 import (BinaryCode, CosetFamily, DEFAULT_ENUM_CAP, as_bits,
                 bits_to_index, bitstring, dot, weight, zeros)


class CssValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PauliOp:
    """i^phase_pow * E(x, z) with E(a,b) = i^(a.b) X^a Z^b (Hermitian)."""

    x: np.ndarray
    z: np.ndarray
    phase_pow: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x", f2.as_bits(self.x))
        object.__setattr__(self, "z", f2.as_bits(self.z, len(self.x)))
        object.__setattr__(self, "phase_pow", int(self.phase_pow) % 4)

    @property
    def n(self) -> int:
        return self.x.size

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise ValueError("length mismatch")
        a, b, c, d = (v.astype(np.int64) for v in
                      (self.x, self.z, other.x, other.z))
        xr = self.x ^ other.x
        zr = self.z ^ other.z
        # E(a,b)E(c,d) = i^(a.b + c.d + 2 b.c - (a^c).(b^d)) E(a^c, b^d)
        kappa = int(a @ b + c @ d + 2 * (b @ c)
                    - xr.astype(np.int64) @ zr.astype(np.int64))
        return PauliOp(xr, zr, self.phase_pow + other.phase_pow + kappa)

    def commutes_with(self, other: "PauliOp") -> bool:
        return (dot(self.x, other.z) + dot(self.z, other.x)) % 2 == 0

    @property
    def sign(self) -> complex:
        return 1j ** self.phase_pow

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Act on a dense statevector of length 2^n."""
        n = self.n
        idx = np.arange(1 << n)
        perm = idx ^ bits_to_index(self.x)
        zmask = bits_to_index(self.z)
        par = _parity_of(idx & zmask)
        ab = int(self.x.astype(np.int64) @ self.z.astype(np.int64)) % 4
        # E(a,b)|v> = i^(a.b) (-1)^(b.v) |v ^ a>; apply phases then permute.
        phased = psi * ((1 - 2 * par) * (1j ** ab) * self.sign)
        out = np.empty_like(psi)
        out[perm] = phased
        return out

    def to_matrix(self) -> np.ndarray:
        n = self.n
        m = np.zeros((1 << n, 1 << n), dtype=complex)
        for v in range(1 << n):
            e = np.zeros(1 << n, dtype=complex)
            e[v] = 1.0
            m[:, v] = self.apply(e)
        return m

    def __repr__(self) -> str:
        return (f"PauliOp(i^{self.phase_pow} E({bitstring(self.x)},"
                f"{bitstring(self.z)}))")


def _parity_of(idx: np.ndarray) -> np.ndarray:
    x = np.asarray(idx, dtype=np.uint64).copy()
    p = np.zeros(x.shape, dtype=np.int64)
    while x.any():
        p ^= (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return p


class CssCode:
    """Validated CSS code with character vectors and coset generator data."""

    def __init__(self, C2: BinaryCode, C1perp: BinaryCode, r=None, y=None,
                 G_C1_over_C2=None, cap: int = DEFAULT_ENUM_CAP):
        if C2.n != C1perp.n:
            raise CssValidationError("length mismatch between X and Z codes")
        self.n = C2.n
        for a in C2.G:
            for b in C1perp.G:
                if dot(a, b):
                    raise CssValidationError(
                        f"generators do not commute: X={bitstring(a)} "
                        f"Z={bitstring(b)} have odd overlap")
        self.C2 = C2
        self.C1perp = C1perp
        self.C1 = C1perp.dual()
        self.C2perp = C2.dual()
        if not self.C2.is_subcode_of(self.C1):
            raise CssValidationError("C2 is not contained in C1")
        self.k1 = self.C1.k
        self.k2 = self.C2.k
        self.k = self.k1 - self.k2

        r = zeros(self.n) if r is None else as_bits(r, self.n)
        y = zeros(self.n) if y is None else as_bits(y, self.n)
        # Character vectors are defined modulo C2perp (r) and C1 (y).
        self.r = self._reduce_mod(r, self.C2perp)
        self.y = self._reduce_mod(y, self.C1)

        # Coset machinery is derived lazily; the giant Reed-Muller codes only
        # ever use the weight-enumerator routes that never touch it.
        self._cap = cap
        self._G_override = G_C1_over_C2
        self._logical_cosets: CosetFamily | None = None
        self._G1: np.ndarray | None = None
        self._G2: np.ndarray | None = None

    @property
    def logical_cosets(self) -> CosetFamily:
        if self._logical_cosets is None:
            self._logical_cosets = CosetFamily(self.C1perp, self.C2perp,
                                               cap=self._cap)
        return self._logical_cosets

    @property
    def G_C1_over_C2(self) -> np.ndarray:
        if self._G1 is None:
            self._G1 = self._choose_x_logicals(self._G_override, cap=self._cap)
        return self._G1

    @property
    def G_C2perp_over_C1perp(self) -> np.ndarray:
        if self._G2 is None:
            _ = self.G_C1_over_C2
            self._G2 = self._paired_z_logicals()
        return self._G2

    # -- construction helpers ------------------------------------------------

    def _reduce_mod(self, v: np.ndarray, code: BinaryCode) -> np.ndarray:
        """Canonical coset leader of v + code (min weight, then lex)."""
        if code.k == 0:
            return v
        if (1 << code.k) <= DEFAULT_ENUM_CAP:
            cands = code.words() ^ v
            w = np.count_nonzero(cands, axis=1)
            order = np.lexsort(
                tuple(cands[:, c] for c in range(self.n - 1, -1, -1)) + (w,))
            out = cands[order[0]]
            out.flags.writeable = False
            return out
        return v

    def _choose_x_logicals(self, G, cap) -> np.ndarray:
        if G is not None:
            G = np.atleast_2d(np.asarray(G, dtype=np.uint8) & 1)
            if G.shape != (self.k, self.n):
                raise CssValidationError("G_C1_over_C2 must be k x n")
            probe = BinaryCode(self.n, np.concatenate([self.C2.G, G]))
            if probe.k != self.k1 or not all(self.C1.contains(g) for g in G):
                raise CssValidationError(
                    "G_C1_over_C2 rows must be independent coset reps in C1")
            G = G.copy()
            G.flags.writeable = False
            return G
        fam = CosetFamily(self.C2, self.C1, cap=cap)
        rows, have = [], self.C2
        for ld in fam.leaders:
            if not have.contains(ld):
                rows.append(ld)
                have = BinaryCode(self.n, np.concatenate([have.G, [ld]]))
                if len(rows) == self.k:
                    break
        G = np.array(rows, dtype=np.uint8).reshape(self.k, self.n)
        G.flags.writeable = False
        return G

    def _paired_z_logicals(self) -> np.ndarray:
        """Rows gamma_i in C2perp with G_C1_over_C2 @ gamma_i = e_i."""
        rows = []
        for i in range(self.k):
            target = np.zeros(self.k, dtype=np.uint8)
            target[i] = 1
            # gamma = x @ C2perp.G with (G_C1_over_C2 gamma^T) = e_i
            A = (self.C2perp.G @ self.G_C1_over_C2.T) & 1  # (k2perp-dim, k)
            x = f2.solve(A, target)
            if x is None:
                raise CssValidationError("cannot pair Z-logicals (Eq. of duality)")
            gamma = (x @ self.C2perp.G) & 1
            # Canonicalise within gamma + C1perp: pairing is unchanged.
            gamma = self.logical_cosets.leader_of(gamma)
            rows.append(gamma)
        G = np.array(rows, dtype=np.uint8).reshape(self.k, self.n)
        G.flags.writeable = False
        return G

    # -- bookkeeping ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"CssCode[[{self.n},{self.k}]] (k1={self.k1}, k2={self.k2})"

    def params(self) -> tuple[int, int]:
        return (self.n, self.k)

    def x_sign(self, a) -> int:
        """epsilon_(a,0) = (-1)^(a.r) for a in C2."""
        return -1 if dot(as_bits(a, self.n), self.r) else 1

    def z_sign(self, b) -> int:
        """epsilon_(0,b) = (-1)^(b.y), defined for any vector b."""
        return -1 if dot(as_bits(b, self.n), self.y) else 1

    def syndrome_cosets(self, cap: int = DEFAULT_ENUM_CAP) -> CosetFamily:
        return CosetFamily(self.C2perp, BinaryCode.full(self.n), cap=cap)

    def gamma_label(self, gamma) -> np.ndarray:
        """Logical coordinates beta with Zbar^beta ~ the coset of gamma."""
        g = as_bits(gamma, self.n)
        return (self.G_C1_over_C2 @ g) & 1

    def gamma_of_label(self, beta) -> np.ndarray:
        beta = as_bits(beta, self.k)
        return self.logical_cosets.leader_of((beta @ self.G_C2perp_over_C1perp) & 1)

    # -- states and operators --------------------------------------------------

    def encode(self, alpha, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """Encoded basis state |alpha-bar> as a dense statevector."""
        if (1 << self.n) > cap:
            raise f2.EnumerationCapExceeded(f"2^{self.n} amplitudes exceed cap")
        alpha = as_bits(alpha, self.k)
        base = ((alpha @ self.G_C1_over_C2) & 1) ^ self.y
        psi = np.zeros(1 << self.n, dtype=complex)
        norm = 1.0 / np.sqrt(len(self.C2))
        for x in self.C2.words():
            amp = norm * (-1 if dot(x, self.r) else 1)
            psi[bits_to_index(base ^ x)] += amp
        return psi

    def encode_logical(self, logical_amplitudes, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """Encode a 2^k logical amplitude vector into the codespace."""
        amps = np.asarray(logical_amplitudes, dtype=complex)
        if amps.size != (1 << self.k):
            raise ValueError("logical state must have 2^k amplitudes")
        psi = np.zeros(1 << self.n, dtype=complex)
        for b in range(1 << self.k):
            if amps[b] != 0:
                psi += amps[b] * self.encode(f2.index_to_bits(b, self.k), cap=cap)
        return psi

    def logical_paulis(self) -> list[tuple[PauliOp, PauliOp]]:
        """(Xbar_i, Zbar_i) pairs; Zbar_i carries the sign (-1)^(gamma_i.y)."""
        out = []
        for i in range(self.k):
            w = self.G_C1_over_C2[i]
            g = self.G_C2perp_over_C1perp[i]
            xbar = PauliOp(w, zeros(self.n))
            zbar = PauliOp(zeros(self.n), g,
                           phase_pow=2 if dot(g, self.y) else 0)
            out.append((xbar, zbar))
        return out

    def x_syndrome_projector_action(self, mu, psi: np.ndarray) -> np.ndarray:
        """Apply the X-syndrome projector for syndrome mu (any coset rep)."""
        mu = as_bits(mu, self.n)
        out = np.zeros_like(psi)
        idx = np.arange(1 << self.n)
        for a in self.C2.words():
            s = (-1 if (dot(a, mu) ^ dot(a, self.r)) else 1)
            out[idx ^ bits_to_index(a)] += s * psi
        return out / len(self.C2)

    def codespace_projector_action(self, psi: np.ndarray) -> np.ndarray:
        """Apply the full code projector Pi_S = Pi_SX(0) Pi_SZ."""
        zpart = np.zeros_like(psi)
        idx = np.arange(1 << self.n)
        for b in self.C1perp.words():
            par = _parity_of(idx & bits_to_index(b))
            zpart += self.z_sign(b) * (1 - 2 * par) * psi
        zpart /= len(self.C1perp)
        return self.x_syndrome_projector_action(zeros(self.n), zpart)

    def in_codespace(self, psi: np.ndarray, tol: float = 1e-9) -> bool:
        proj = self.codespace_projector_action(psi)
        return bool(np.linalg.norm(proj - psi) <= tol * max(1.0, np.linalg.norm(psi)))

    def logical_amplitudes(self, psi: np.ndarray) -> np.ndarray:
        """Coordinates of a codespace state in the encoded basis."""
        out = np.empty(1 << self.k, dtype=complex)
        for b in range(1 << self.k):
            out[b] = np.vdot(self.encode(f2.index_to_bits(b, self.k)), psi)
        return out


def new_css(C2_gens, C1perp_gens, r=None, y=None, n: int | None = None,
            G_C1_over_C2=None) -> CssCode:
    """Build and validate a CSS code from generator rows."""
    if n is None:
        probe = C2_gens if len(C2_gens) else C1perp_gens
        n = len(probe[0])
    C2 = BinaryCode(n, C2_gens if len(C2_gens) else None)
    C1perp = BinaryCode(n, C1perp_gens if len(C1perp_gens) else None)
    return CssCode(C2, C1perp, r=r, y=y, G_C1_over_C2=G_C1_over_C2)


def css_from_signed_generators(x_rows, z_rows, x_signs, z_signs,
                               n: int | None = None) -> CssCode:
    """Recover (r, y) from signed generator lists and build the code."""
    if n is None:
        probe = list(x_rows) + list(z_rows)
        n = len(probe[0])
    C2 = BinaryCode(n, x_rows if len(x_rows) else None)
    C1perp = BinaryCode(n, z_rows if len(z_rows) else None)
    r = _solve_character(x_rows, x_signs, n)
    y = _solve_character(z_rows, z_signs, n)
    return CssCode(C2, C1perp, r=r, y=y)


def _solve_character(rows, signs, n: int) -> np.ndarray:
    rows = [as_bits(g, n) for g in rows]
    if not rows:
        return zeros(n)
    target = []
    for s in signs:
        if s not in (1, -1):
            raise CssValidationError("signs must be +1 or -1")
        target.append(0 if s == 1 else 1)
    A = np.array(rows, dtype=np.uint8).T  # solve c A = target with c length n
    x = f2.solve(A, np.array(target, dtype=np.uint8))
    if x is None:
        raise CssValidationError("inconsistent generator signs")
    return as_bits(x, n)


# -- built-in codes -----------------------------------------------------------

HAMMING_H = [
    [1, 1, 1, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0],
    [1, 0, 1, 0, 1, 0, 1],
]


def steane() -> CssCode:
    H = np.array(HAMMING_H, dtype=np.uint8)
    return CssCode(BinaryCode(7, H), BinaryCode(7, H))


def four_two_two(y=None) -> CssCode:
    one = [np.ones(4, dtype=np.uint8)]
    return CssCode(BinaryCode(4, one), BinaryCode(4, one), y=y)


def color_832() -> CssCode:
    from .f2 import reed_muller

    C2 = BinaryCode(8, [np.ones(8, dtype=np.uint8)])
    return CssCode(C2, reed_muller(1, 3))


def rm15() -> CssCode:
    """The [[15,1,3]] punctured quantum Reed-Muller code."""
    from .conditions import build_rm_css

    return build_rm_css(1, 1, 4, punctured=True)


def qrm(r: int, m: int) -> CssCode:
    from .conditions import build_rm_css

    return build_rm_css(r, r - 1, m, punctured=False)


def builtin_code(name: str) -> CssCode:
    """Resolve a named built-in code: steane, 422, 832, rm15, qrm(r,m)."""
    t = name.strip().lower()
    if t == "steane":
        return steane()
    if t == "422":
        return four_two_two()
    if t == "832":
        return color_832()
    if t == "rm15":
        return rm15()
    if t.startswith("qrm(") and t.endswith(")"):
        r, m = (int(s) for s in t[4:-1].split(","))
        return qrm(r, m)
    raise KeyError(f"unknown built-in code {name!r}")


def parse_code_catalog(text: str) -> CssCode:
    """Parse the catalog format with [X], [Z] sections and optional [r], [y]."""
    section = None
    x_rows: list = []
    z_rows: list = []
    r = y = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("[x]", "[z]", "[r]", "[y]"):
            section = low[1]
            continue
        bits = as_bits(line)
        if section == "x":
            x_rows.append(bits)
        elif section == "z":
            z_rows.append(bits)
        elif section == "r":
            r = bits
        elif section == "y":
            y = bits
        else:
            raise CssValidationError(f"row outside a section: {line!r}")
    return new_css(x_rows, z_rows, r=r, y=y,
                   n=len((x_rows + z_rows)[0]))
