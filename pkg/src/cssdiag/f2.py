"""Exact GF(2) linear algebra: binary codes, cosets, weight enumerators.

All vectors are 1-D numpy uint8 arrays with entries in {0, 1}.  A code is
held in canonical reduced row-echelon form, so equal subspaces compare
equal generator-matrix-wise.  Weight enumerators are exact integer counts;
the MacWilliams transform is carried out in arbitrary-precision ints.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

# Default ceiling on the number of vectors any single enumeration may touch.
DEFAULT_ENUM_CAP = 1 << 22


class EnumerationCapExceeded(RuntimeError):
    """An exact enumeration would exceed the configured cap."""


def as_bits(v, n: int | None = None) -> np.ndarray:
    """Coerce a 0/1 sequence (list, tuple, string, array) to a uint8 vector."""
    if isinstance(v, str):
        v = [int(c) for c in v.strip()]
    a = np.asarray(v, dtype=np.uint8) & 1
    if a.ndim != 1:
        raise ValueError("bit vector must be one-dimensional")
    if n is not None and a.size != n:
        raise ValueError(f"expected length {n}, got {a.size}")
    return a


def zeros(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.uint8)


def ones(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.uint8)


def unit(n: int, i: int) -> np.ndarray:
    e = zeros(n)
    e[i] = 1
    return e


def weight(v: np.ndarray) -> int:
    """Hamming weight."""
    return int(np.count_nonzero(v))


def dot(a: np.ndarray, b: np.ndarray) -> int:
    """Inner product mod 2."""
    return int(np.bitwise_and(a, b).sum() & 1)


def bits_to_index(v: np.ndarray) -> int:
    """Basis-state index of |v>; the first coordinate is the most significant bit."""
    idx = 0
    for b in v.tolist():
        idx = (idx << 1) | b
    return idx


def index_to_bits(idx: int, n: int) -> np.ndarray:
    return as_bits([(idx >> (n - 1 - i)) & 1 for i in range(n)])


def bitstring(v: np.ndarray) -> str:
    return "".join(str(int(b)) for b in v)


def key(v: np.ndarray) -> bytes:
    """Hashable key for a bit vector."""
    return np.ascontiguousarray(v, dtype=np.uint8).tobytes()


def rref(rows) -> tuple[np.ndarray, int]:
    """Reduced row echelon form over GF(2).

    Returns (R, rank) where R contains only the nonzero rows.  The RREF is
    the unique canonical basis of the row span.
    """
    a = np.atleast_2d(np.asarray(rows, dtype=np.uint8) & 1).copy()
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), 0
    m, n = a.shape
    r = 0
    for c in range(n):
        if r >= m:
            break
        pivots = np.nonzero(a[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + int(pivots[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        hits = np.nonzero(a[:, c])[0]
        hits = hits[hits != r]
        if hits.size:
            a[hits] ^= a[r]
        r += 1
    return a[:r], r


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of x A = b over GF(2), or None if infeasible.

    A has shape (m, n); x has length m.  The returned solution is the
    canonical one produced by elimination (free variables set to zero).
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.uint8) & 1)
    m, n = A.shape
    b = as_bits(b, n)
    # Row-reduce [A | I] to track the combination producing each row.
    aug = np.concatenate([A.copy(), np.eye(m, dtype=np.uint8)], axis=1)
    r = 0
    pivot_cols = []
    for c in range(n):
        if r >= m:
            break
        hits = np.nonzero(aug[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        other = np.nonzero(aug[:, c])[0]
        other = other[other != r]
        if other.size:
            aug[other] ^= aug[r]
        pivot_cols.append(c)
        r += 1
    x = np.zeros(m, dtype=np.uint8)
    res = b.copy()
    for i, c in enumerate(pivot_cols):
        if res[c]:
            res ^= aug[i, :n]
            x ^= aug[i, n:]
    if res.any():
        return None
    return x


class BinaryCode:
    """A linear subspace of F2^n held as a canonical RREF generator matrix."""

    def __init__(self, n: int, generators=None):
        self.n = int(n)
        if generators is None or (hasattr(generators, "__len__") and len(generators) == 0):
            self.G = np.zeros((0, self.n), dtype=np.uint8)
        else:
            rows = np.atleast_2d(np.asarray(generators, dtype=np.uint8) & 1)
            if rows.shape[1] != self.n:
                raise ValueError(f"generator length {rows.shape[1]} != n={self.n}")
            self.G, _ = rref(rows)
        self.k = int(self.G.shape[0])
        self.G.flags.writeable = False

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "BinaryCode":
        rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
        return cls(rows.shape[1], rows)

    @classmethod
    def zero(cls, n: int) -> "BinaryCode":
        return cls(n, None)

    @classmethod
    def full(cls, n: int) -> "BinaryCode":
        return cls(n, np.eye(n, dtype=np.uint8))

    @classmethod
    def from_text(cls, text: str) -> "BinaryCode":
        """Parse the catalog format: first line ``n k``, then k rows of 0/1."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        n, k = (int(t) for t in lines[0].split())
        rows = [as_bits(ln, n) for ln in lines[1 : 1 + k]]
        if len(rows) != k:
            raise ValueError(f"expected {k} generator rows, found {len(rows)}")
        return cls(n, rows)

    def to_text(self) -> str:
        head = f"{self.n} {self.k}"
        return "\n".join([head] + [bitstring(g) for g in self.G])

    # -- basic structure ----------------------------------------------------

    def __len__(self) -> int:
        return 1 << self.k

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryCode)
            and self.n == other.n
            and self.G.shape == other.G.shape
            and bool(np.array_equal(self.G, other.G))
        )

    def __hash__(self) -> int:
        return hash((self.n, self.G.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryCode[n={self.n}, k={self.k}]"

    def contains(self, v) -> bool:
        v = as_bits(v, self.n)
        if self.k == 0:
            return not v.any()
        return solve(self.G, v) is not None

    def is_subcode_of(self, other: "BinaryCode") -> bool:
        return all(other.contains(g) for g in self.G)

    def dual(self) -> "BinaryCode":
        """Orthogonal complement under the standard inner product mod 2."""
        if self.k == 0:
            return BinaryCode.full(self.n)
        # Kernel of G: identity block on free columns, pivot rows solved.
        G = self.G
        pivot_cols = [int(np.nonzero(row)[0][0]) for row in G]
        free_cols = [c for c in range(self.n) if c not in pivot_cols]
        rows = []
        for c in free_cols:
            v = zeros(self.n)
            v[c] = 1
            for i, pc in enumerate(pivot_cols):
                if G[i, c]:
                    v[pc] ^= 1
            rows.append(v)
        return BinaryCode(self.n, rows) if rows else BinaryCode.zero(self.n)

    def syndrome_map(self) -> np.ndarray:
        """Matrix H with: v in code  <=>  H v^T = 0.  Shape (n-k, n)."""
        return self.dual().G

    # -- enumeration --------------------------------------------------------

    def words(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All 2^k codewords as a (2^k, n) array, in XOR-ladder order."""
        if (1 << self.k) > cap:
            raise EnumerationCapExceeded(
                f"2^{self.k} codewords exceed cap {cap}")
        out = np.zeros((1 << self.k, self.n), dtype=np.uint8)
        size = 1
        for g in self.G:
            out[size : 2 * size] = out[:size] ^ g
            size *= 2
        return out

    def weights(self, shift=None, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """Hamming weights of all words of the (optionally shifted) code."""
        w = self.words(cap)
        if shift is not None:
            w = w ^ as_bits(shift, self.n)
        return np.count_nonzero(w, axis=1)

    def min_distance(self, cap: int = DEFAULT_ENUM_CAP) -> int:
        """Minimum nonzero weight, by exhaustive enumeration."""
        if self.k == 0:
            raise ValueError("zero code has no nonzero word")
        w = self.weights(cap=cap)
        return int(w[1:].min())


def weight_enumerator(code: BinaryCode, shift=None,
                      cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """counts[w] = number of words of Hamming weight w (exact ints)."""
    w = code.weights(shift=shift, cap=cap)
    counts = np.zeros(code.n + 1, dtype=object)
    for wt, c in zip(*np.unique(w, return_counts=True)):
        counts[int(wt)] = int(c)
    return counts


def signed_weight_enumerator(code: BinaryCode, character,
                             cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """counts[w] = sum over words v of weight w of (-1)^{v . character}."""
    ch = as_bits(character, code.n)
    words = code.words(cap)
    w = np.count_nonzero(words, axis=1)
    signs = 1 - 2 * (np.count_nonzero(words & ch, axis=1) & 1).astype(np.int64)
    counts = np.zeros(code.n + 1, dtype=object)
    for wt in range(code.n + 1):
        sel = w == wt
        if sel.any():
            counts[wt] = int(signs[sel].sum())
    return counts


def macwilliams_transform(counts, n: int, size: int) -> np.ndarray:
    """Weight enumerator of the dual from that of the code (exact).

    counts may carry signs (coset version with a character).  Returns
    B[j] = (1/size) * sum_w counts[w] * K_j(w; n) with Krawtchouk
    K_j(w) = sum_i (-1)^i C(w,i) C(n-w, j-i).
    """
    counts = list(counts)
    out = []
    for j in range(n + 1):
        total = 0
        for w, a in enumerate(counts):
            if a == 0:
                continue
            kr = sum(
                (-1) ** i * math.comb(w, i) * math.comb(n - w, j - i)
                for i in range(max(0, j - (n - w)), min(j, w) + 1)
            )
            total += a * kr
        q, r = divmod(total, size)
        if r != 0:
            raise ArithmeticError("MacWilliams transform not integral")
        out.append(q)
    return np.array(out, dtype=object)


def theta_enumerator(code: BinaryCode, theta: float, shift=None,
                     cap: int = DEFAULT_ENUM_CAP) -> complex:
    """Sum over the (shifted) code of (cos t/2)^(n-w) * (-i sin t/2)^w."""
    counts = weight_enumerator(code, shift=shift, cap=cap)
    x = math.cos(theta / 2.0)
    y = -1j * math.sin(theta / 2.0)
    return sum(
        int(c) * x ** (code.n - w) * y ** w
        for w, c in enumerate(counts) if c != 0
    )


def theta_enumerator_dual(code: BinaryCode, theta: float,
                          cap: int = DEFAULT_ENUM_CAP) -> complex:
    """Same value computed from the dual: (1/|C^perp|) sum over C^perp of
    exp(-i theta (n - 2w)/2)."""
    d = code.dual()
    ws = d.weights(cap=cap)
    return np.exp(-0.5j * theta * (code.n - 2.0 * ws)).sum() / len(d)


class CosetFamily:
    """Cosets of ``sub`` inside ``sup`` with deterministic leaders.

    The leader of a coset is its lexicographically smallest vector of
    minimal Hamming weight; leaders[0] is always the zero vector.
    """

    def __init__(self, sub: BinaryCode, sup: BinaryCode,
                 cap: int = DEFAULT_ENUM_CAP):
        if sub.n != sup.n:
            raise ValueError("length mismatch")
        if not sub.is_subcode_of(sup):
            raise ValueError("sub is not contained in super")
        self.sub = sub
        self.sup = sup
        self.n = sub.n
        self.count = 1 << (sup.k - sub.k)
        if (1 << sup.k) > cap:
            raise EnumerationCapExceeded(
                f"coset derivation needs 2^{sup.k} vectors, cap {cap}")
        self.leaders = self._derive_leaders()
        self._index = {key(v): i for i, v in enumerate(self.leaders)}
        H = self.sub.syndrome_map()
        self._H = H
        self._syn_index = {
            ((H @ ld) & 1).tobytes() if H.shape[0] else b"": i
            for i, ld in enumerate(self.leaders)
        }

    def _derive_leaders(self) -> list[np.ndarray]:
        words = self.sup.words()
        H = self.sub.syndrome_map()
        if H.shape[0]:
            syn = (words @ H.T) & 1
        else:
            syn = np.zeros((words.shape[0], 0), dtype=np.uint8)
        w = np.count_nonzero(words, axis=1)
        # Sort words by (weight, lexicographic); first hit per syndrome wins.
        order = np.lexsort(tuple(words[:, c] for c in range(self.n - 1, -1, -1)) + (w,))
        best: dict[bytes, np.ndarray] = {}
        for idx in order:
            s = syn[idx].tobytes()
            if s not in best:
                best[s] = words[idx]
                if len(best) == self.count:
                    break
        leaders = sorted(best.values(), key=lambda v: (weight(v), tuple(v.tolist())))
        assert not leaders[0].any()
        for v in leaders:
            v.flags.writeable = False
        return leaders

    def __len__(self) -> int:
        return self.count

    def leader_of(self, v) -> np.ndarray:
        """Canonical leader of the coset sub + v (v must lie in sup)."""
        return self.leaders[self.index_of(v)]

    def index_of(self, v) -> int:
        v = as_bits(v, self.n)
        k = ((self._H @ v) & 1).tobytes() if self._H.shape[0] else b""
        try:
            return self._syn_index[k]
        except KeyError:
            raise ValueError("vector is not in the super code") from None


def cosets(sub: BinaryCode, sup: BinaryCode,
           cap: int = DEFAULT_ENUM_CAP) -> CosetFamily:
    return CosetFamily(sub, sup, cap=cap)


# -- Reed-Muller family ------------------------------------------------------


def _monomial_columns(m: int) -> np.ndarray:
    """Column j holds the point (x_1..x_m) with x_1 as the high bit."""
    pts = np.zeros((m, 1 << m), dtype=np.uint8)
    for j in range(1 << m):
        for i in range(m):
            pts[i, j] = (j >> (m - 1 - i)) & 1
    return pts


def reed_muller(r: int, m: int) -> BinaryCode:
    """RM(r, m): evaluation vectors of boolean functions of degree <= r."""
    if not (0 <= r <= m):
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    pts = _monomial_columns(m)
    rows = [ones(1 << m)]
    from itertools import combinations

    for deg in range(1, r + 1):
        for subset in combinations(range(m), deg):
            rows.append(reduce(np.bitwise_and, (pts[i] for i in subset)))
    return BinaryCode(1 << m, rows)


def rm_dimension(r: int, m: int) -> int:
    return sum(math.comb(m, j) for j in range(r + 1))


def puncture_first(code: BinaryCode) -> BinaryCode:
    """Delete the first coordinate."""
    if code.n < 2:
        raise ValueError("cannot puncture a length-1 code")
    return BinaryCode(code.n - 1, code.G[:, 1:])


def drop_allones_row(code: BinaryCode, cap: int = DEFAULT_ENUM_CAP) -> BinaryCode:
    """Subcode left after deleting the all-ones generator row.

    Requires 1 in the code.  Canonically this is the hyperplane subcode
    {c : c[0] = 0}: for an evaluation code whose generators are the all-ones
    row plus monomial rows (first coordinate = evaluation at the zero
    point), removing the all-ones row spans exactly the codewords whose
    constant term vanishes.
    """
    one = ones(code.n)
    if not code.contains(one):
        raise ValueError("code does not contain the all-ones vector")
    rows = []
    anchor = None
    for g in code.G:
        if g[0]:
            if anchor is None:
                anchor = g
            else:
                rows.append(g ^ anchor)
        else:
            rows.append(g)
    sub = BinaryCode(code.n, rows) if rows else BinaryCode.zero(code.n)
    assert sub.k == code.k - 1 and not sub.contains(one)
    return sub


def max_power_of_two_dividing_weights(code: BinaryCode,
                                      cap: int = DEFAULT_ENUM_CAP):
    """Largest e with 2^e dividing every nonzero codeword weight.

    Returns math.inf for the zero code.  Codes too large to enumerate are
    handled through the dual weight enumerator.
    """
    if code.k == 0:
        return math.inf
    if (1 << code.k) <= cap:
        weights_present = (int(w) for w in code.weights(cap=cap)[1:])
    else:
        counts = macwilliams_transform(
            weight_enumerator(code.dual(), cap=cap), code.n, len(code.dual()))
        weights_present = (w for w, c in enumerate(counts) if c != 0 and w > 0)
    g = 0
    for w in weights_present:
        g = math.gcd(g, w)
    if g == 0:
        return math.inf
    return (g & -g).bit_length() - 1


# -- restriction / shortening (support-local views) ---------------------------


def restrict_to_support(code: BinaryCode, support: np.ndarray) -> BinaryCode:
    """Code restricted (projected) to the coordinates where support == 1."""
    cols = np.nonzero(as_bits(support, code.n))[0]
    if cols.size == 0:
        return BinaryCode.zero(0)
    return BinaryCode(cols.size, code.G[:, cols]) if code.k else BinaryCode.zero(cols.size)


def shorten_to_support(code: BinaryCode, support: np.ndarray) -> BinaryCode:
    """Words of the code supported inside ``support``, truncated to it."""
    support = as_bits(support, code.n)
    outside = np.nonzero(support == 0)[0]
    if code.k == 0:
        return BinaryCode.zero(int(support.sum()))
    if outside.size == 0:
        return BinaryCode(code.n, code.G)
    # Solve for the subspace of combinations vanishing outside the support.
    A = code.G[:, outside]  # combinations x with x A = 0
    kernel = BinaryCode.from_rows(A.T).dual()  # kernel of A^T acting on x
    rows = [(x @ code.G) & 1 for x in kernel.G]
    inside = np.nonzero(support)[0]
    rows = [r[inside] for r in rows]
    return BinaryCode(inside.size, rows) if rows else BinaryCode.zero(inside.size)
