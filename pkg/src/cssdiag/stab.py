"""Generator coefficients for general stabilizer codes.

An arbitrary commuting, signed generator set is split canonically into
pure-X rows K, pure-Z rows J, and mixed rows D (whose span contains no
nonzero purely-X or purely-Z vector).  The coefficient table then lives on
cosets of T^perp = <K, D_x>^perp by J, and a non-degenerate code converts
to a CSS code with the identical table by dropping the Z-parts of D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import f2
from .css import CssCode, PauliOp
from .f2 import (BinaryCode, CosetFamily, DEFAULT_ENUM_CAP,
                 EnumerationCapExceeded, as_bits, weight, zeros)


class StabValidationError(ValueError):
    pass


def pauli_weight(s, t) -> int:
    """Number of non-identity tensor factors of E(s, t)."""
    s = as_bits(s)
    t = as_bits(t, s.size)
    return int(np.count_nonzero(s | t))


@dataclass
class StabilizerCode:
    """Canonical (K, J, D) split of a signed stabilizer group."""

    n: int
    K: BinaryCode                      # pure-X rows
    J: BinaryCode                      # pure-Z rows
    D: list                            # mixed rows as PauliOp (sign included)
    r: np.ndarray                      # X character: eps_(a,0) = (-1)^(a.r)
    y: np.ndarray                      # Z character: eps_(0,b) = (-1)^(b.y)

    @property
    def n_x(self) -> int:
        return self.K.k

    @property
    def n_z(self) -> int:
        return self.J.k

    @property
    def n_xz(self) -> int:
        return len(self.D)

    @property
    def k(self) -> int:
        return self.n - self.n_x - self.n_z - self.n_xz

    @property
    def T(self) -> BinaryCode:
        """<K, D_x>: the X-support code indexing the syndrome quotient."""
        rows = list(self.K.G) + [d.x for d in self.D]
        return BinaryCode(self.n, rows) if rows else BinaryCode.zero(self.n)

    def is_css(self) -> bool:
        return not self.D

    def generators(self) -> list[PauliOp]:
        out = []
        for a in self.K.G:
            out.append(PauliOp(a, zeros(self.n),
                               phase_pow=2 if f2.dot(a, self.r) else 0))
        for b in self.J.G:
            out.append(PauliOp(zeros(self.n), b,
                               phase_pow=2 if f2.dot(b, self.y) else 0))
        out.extend(self.D)
        return out


def stabilizer_from_rows(rows, signs=None, n: int | None = None) -> StabilizerCode:
    """Build the canonical split from symplectic rows (x|z) with signs.

    Rows must be independent and pairwise commuting.  Elimination prefers
    pure-X combinations, then pure-Z, then a complement of mixed rows; the
    signs of derived generators follow from exact Pauli products.
    """
    rows = [(_pair(r, n)) for r in rows]
    if not rows:
        raise StabValidationError("empty generator set")
    n = rows[0][0].size
    signs = [1] * len(rows) if signs is None else list(signs)
    paulis = []
    for (x, z), s in zip(rows, signs):
        if s not in (1, -1):
            raise StabValidationError("signs must be +1 or -1")
        op = PauliOp(x, z, phase_pow=0 if s == 1 else 2)
        paulis.append(op)
    symp = np.array([np.concatenate([x, z]) for x, z in rows], dtype=np.uint8)
    if f2.rref(symp)[1] != len(rows):
        raise StabValidationError("generators are dependent")
    for i in range(len(paulis)):
        for j in range(i):
            if not paulis[i].commutes_with(paulis[j]):
                raise StabValidationError(
                    f"generators {j} and {i} anticommute")

    # Greedy basis of the pure-X subspace of the row span, tracking products.
    pure_x = _pure_combinations(paulis, part="x")
    pure_z = _pure_combinations(paulis, part="z")
    chosen = pure_x + pure_z
    mixed = []
    span_rows = [np.concatenate([p.x, p.z]) for p in chosen]
    for op in paulis:
        cand = np.concatenate([op.x, op.z])
        probe = BinaryCode(2 * n, span_rows + [cand]) if span_rows else \
            BinaryCode(2 * n, [cand])
        if probe.k > len(span_rows):
            mixed.append(op)
            span_rows.append(cand)
    for op in mixed:
        if not op.x.any() or not op.z.any():
            raise StabValidationError("mixed complement contains a pure row")

    K = BinaryCode(n, [p.x for p in pure_x]) if pure_x else BinaryCode.zero(n)
    J = BinaryCode(n, [p.z for p in pure_z]) if pure_z else BinaryCode.zero(n)
    r = _character_from([(p.x, _sign_of(p)) for p in pure_x], n)
    y = _character_from([(p.z, _sign_of(p)) for p in pure_z], n)
    # Characters are defined modulo the dual supports; canonicalise them the
    # same way the CSS side does so converted codes share sign conventions.
    y = _reduce_mod_code(y, J.dual())
    r = _reduce_mod_code(r, K.dual())
    # mixed signs stay attached to the operators themselves
    code = StabilizerCode(n, K, J, mixed, r, y)
    _validate_mixed_span(code)
    return code


def _reduce_mod_code(v: np.ndarray, code: BinaryCode,
                     cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    if code.k == 0 or (1 << code.k) > cap:
        return v
    cands = code.words(cap) ^ v
    w = np.count_nonzero(cands, axis=1)
    order = np.lexsort(tuple(cands[:, c] for c in range(code.n - 1, -1, -1))
                       + (w,))
    out = cands[order[0]].copy()
    out.flags.writeable = False
    return out


def _pair(row, n):
    row = as_bits(row)
    if n is not None and row.size != 2 * n:
        raise StabValidationError("row length must be 2n")
    half = row.size // 2
    return row[:half], row[half:]


def _sign_of(p: PauliOp) -> int:
    if p.phase_pow == 0:
        return 1
    if p.phase_pow == 2:
        return -1
    raise StabValidationError("non-Hermitian product encountered")


def _pure_combinations(paulis, part: str) -> list[PauliOp]:
    """Products of generators whose z-part (for "x") or x-part vanishes."""
    n = paulis[0].n
    vanish = np.array([(p.z if part == "x" else p.x) for p in paulis],
                      dtype=np.uint8)
    # combinations c with c @ vanish = 0
    kernel = BinaryCode.from_rows(vanish.T).dual()
    out = []
    basis_rows = []
    for c in kernel.G:
        prod = None
        for i in np.nonzero(c)[0]:
            prod = paulis[i] if prod is None else prod * paulis[i]
        if prod is None:
            continue
        vec = prod.x if part == "x" else prod.z
        if not vec.any():
            continue  # fully trivial product
        probe = BinaryCode(n, basis_rows + [vec]) if basis_rows else \
            BinaryCode(n, [vec])
        if probe.k > len(basis_rows):
            out.append(prod)
            basis_rows.append(vec)
    return out


def _character_from(pairs, n) -> np.ndarray:
    rows = [v for v, _ in pairs]
    signs = [s for _, s in pairs]
    if not rows:
        return zeros(n)
    A = np.array(rows, dtype=np.uint8).T
    target = np.array([0 if s == 1 else 1 for s in signs], dtype=np.uint8)
    x = f2.solve(A, target)
    if x is None:
        raise StabValidationError("inconsistent generator signs")
    return as_bits(x, n)


def _validate_mixed_span(code: StabilizerCode, limit: int = 20):
    if code.n_xz > limit:
        return
    for mask in range(1, 1 << code.n_xz):
        x = zeros(code.n)
        z = zeros(code.n)
        for i in range(code.n_xz):
            if (mask >> i) & 1:
                x ^= code.D[i].x
                z ^= code.D[i].z
        if not x.any() or not z.any():
            raise StabValidationError(
                "span of mixed rows contains a hidden pure row")


# -- generator coefficients ---------------------------------------------------


class StabGenCoeffTable:
    """A^S[mu][gamma] over mu in F2^n/T^perp, gamma in T^perp/J."""

    def __init__(self, code: StabilizerCode, gate_label: str,
                 mu_leaders, gamma_leaders, A: np.ndarray):
        self.code = code
        self.gate_label = gate_label
        self.mu_leaders = list(mu_leaders)
        self.gamma_leaders = list(gamma_leaders)
        self.A = np.asarray(A, dtype=complex)
        from .gencoef import SUM_RULE_LOG

        SUM_RULE_LOG.append((f"stab n={code.n} | {gate_label}",
                             self.sum_rule_deviation()))

    def sum_rule_deviation(self) -> float:
        fam = CosetFamily(self.code.J, self.code.T.dual())
        index = {f2.key(g): j for j, g in enumerate(self.gamma_leaders)}
        dev = 0.0
        for e, ge in enumerate(self.gamma_leaders):
            perm = [index[f2.key(fam.leader_of(ge ^ gj))]
                    for gj in self.gamma_leaders]
            s = np.vdot(self.A, self.A[:, perm])
            dev = max(dev, abs(s - (1.0 if e == 0 else 0.0)))
        return float(dev)

    def preserves(self, tol: float = 1e-9) -> bool:
        return abs(float(np.sum(np.abs(self.A[0]) ** 2)) - 1.0) <= tol


def stab_gencoeffs(code: StabilizerCode, gate,
                   cap: int = DEFAULT_ENUM_CAP) -> StabGenCoeffTable:
    """A^S[mu,gamma] = sum over J+mu+gamma of (-1)^(z.y) f(z)."""
    n = code.n
    if gate.n != n:
        raise ValueError("gate/code length mismatch")
    Tperp = code.T.dual()
    mu_fam = CosetFamily(Tperp, BinaryCode.full(n), cap=cap)
    gamma_fam = CosetFamily(code.J, Tperp, cap=cap)
    f = gate.pauli_z_table(cap)
    words = code.J.words(cap)
    base_idx = np.array([f2.bits_to_index(b) for b in words], dtype=np.int64)
    signs = 1.0 - 2.0 * ((words @ code.y.astype(np.int64)) & 1)
    A = np.empty((len(mu_fam.leaders), len(gamma_fam.leaders)), dtype=complex)
    for i, mu in enumerate(mu_fam.leaders):
        for j, g in enumerate(gamma_fam.leaders):
            shift = mu ^ g
            outer = -1.0 if f2.dot(shift, code.y) else 1.0
            A[i, j] = outer * np.sum(
                signs * f[base_idx ^ f2.bits_to_index(shift)])
    return StabGenCoeffTable(code, repr(gate), mu_fam.leaders,
                             gamma_fam.leaders, A)


def stab_preserves(table: StabGenCoeffTable, tol: float = 1e-9) -> bool:
    return table.preserves(tol)


# -- CSS conversion (Theorem on non-degenerate codes) -------------------------


def min_pure_z_weight(code: StabilizerCode, cap: int = DEFAULT_ENUM_CAP):
    """Lightest nonzero pure-Z stabilizer weight (inf when J is empty)."""
    if code.J.k == 0:
        return float("inf")
    return int(code.J.weights(cap=cap)[1:].min())


def stabilizer_distance(code: StabilizerCode,
                        cap: int = DEFAULT_ENUM_CAP) -> int:
    """Minimum Pauli weight over the normalizer minus the group (exhaustive)."""
    n = code.n
    gens = code.generators()
    stack = np.array([np.concatenate([g.x, g.z]) for g in gens], dtype=np.uint8)
    group = BinaryCode(2 * n, stack)
    # normalizer support: symplectic-orthogonal vectors
    flipped = np.concatenate([stack[:, n:], stack[:, :n]], axis=1)
    normal = BinaryCode.from_rows(flipped).dual()
    if (1 << normal.k) > cap:
        raise EnumerationCapExceeded("normalizer enumeration exceeds cap")
    best = None
    for v in normal.words(cap):
        if not v.any() or group.contains(v):
            continue
        h = pauli_weight(v[:n], v[n:])
        best = h if best is None else min(best, h)
    if best is None:
        raise StabValidationError("trivial normalizer quotient")
    return best


def to_css(code: StabilizerCode, d: int, cap: int = DEFAULT_ENUM_CAP) -> CssCode:
    """Replace mixed rows by their X-parts; valid when min weight of J >= d.

    The resulting CSS code indexes its table by the same cosets, so the
    generator coefficients of any diagonal gate are unchanged; its
    Z-distance is at least d.
    """
    if code.J.k and min_pure_z_weight(code, cap=cap) < d:
        light = min(
            (w for w in code.J.words(cap) if w.any()), key=weight)
        raise StabValidationError(
            f"pure-Z generator weight below d: {f2.bitstring(light)}")
    x_rows = list(code.K.G) + [op.x for op in code.D]
    x_signs = ([-1 if f2.dot(a, code.r) else 1 for a in code.K.G]
               + [1] * len(code.D))
    z_rows = list(code.J.G)
    z_signs = [-1 if f2.dot(b, code.y) else 1 for b in z_rows]
    from .css import css_from_signed_generators

    return css_from_signed_generators(x_rows, z_rows, x_signs, z_signs,
                                      n=code.n)


def css_z_distance(css: CssCode, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Min weight over C2perp \\ C1perp (nontrivial Z-logical weight)."""
    best = None
    for v in css.C2perp.words(cap):
        if css.C1perp.contains(v):
            continue
        w = weight(v)
        best = w if best is None else min(best, w)
    return best if best is not None else 0


# -- projector machinery for validation ---------------------------------------


def l_projector_matrix(code: StabilizerCode, mu,
                       cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """L_(mu): the mu-phased product of the X and mixed projectors."""
    n = code.n
    if (1 << n) > 1 << 12:
        raise EnumerationCapExceeded("projector matrices limited to n <= 12")
    mu = as_bits(mu, n)
    dim = 1 << n
    Px = np.zeros((dim, dim), dtype=complex)
    for a in code.K.words(cap):
        sgn = (-1.0) ** (f2.dot(a, mu) ^ f2.dot(a, code.r))
        Px += sgn * PauliOp(a, zeros(n)).to_matrix()
    Px /= len(code.K)
    Pxz = np.zeros((dim, dim), dtype=complex)
    for mask in range(1 << code.n_xz):
        prod = PauliOp(zeros(n), zeros(n))
        for i in range(code.n_xz):
            if (mask >> i) & 1:
                prod = prod * code.D[i]
        sgn = (-1.0) ** f2.dot(prod.x, mu)
        Pxz += sgn * prod.sign * PauliOp(prod.x, prod.z).to_matrix()
    Pxz /= 1 << code.n_xz
    return Px @ Pxz


def codespace_projector_matrix(code: StabilizerCode) -> np.ndarray:
    n = code.n
    dim = 1 << n
    P = np.eye(dim, dtype=complex)
    for g in code.generators():
        P = P @ ((np.eye(dim) + g.sign * PauliOp(g.x, g.z).to_matrix()) / 2.0)
    return P
