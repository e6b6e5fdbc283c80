"""Brute-force statevector pipeline used to validate every analytic result.

The pipeline prepares an encoded state, multiplies the diagonal gate into
the dense statevector, measures the X-stabilizers by explicit projector
application, and applies a signed Pauli-Z correction.  Nothing here reads
generator-coefficient tables; the cross-check routine compares the two
sides after both exist.  Keep it that way: this module is the trust anchor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import f2
from .css import CssCode
from .f2 import DEFAULT_ENUM_CAP, EnumerationCapExceeded, as_bits, zeros

ORACLE_CAP = 1 << 20


@dataclass
class PipelineResult:
    code: CssCode
    mu_leaders: list
    probabilities: np.ndarray          # per syndrome, for the given input
    post_states: list                  # normalised post-correction states (or None)
    logical_matrices: list             # per syndrome: 2^k x 2^k effective operator


def _apply_diagonal(gate, psi: np.ndarray, cap: int) -> np.ndarray:
    return gate.phases(cap) * psi


def simulate_pipeline(code: CssCode, gate, logical_state, policy_gammas=None,
                      cap: int = ORACLE_CAP) -> PipelineResult:
    """Exact enumeration of all syndrome outcomes for one input state.

    policy_gammas: optional map syndrome-index -> gamma vector (defaults to
    the zero logical for every syndrome).  The per-syndrome logical matrix
    is extracted by pushing every encoded basis state through the same
    branch, so it is independent of the input state.
    """
    if (1 << code.n) > cap:
        raise EnumerationCapExceeded(f"2^{code.n} amplitudes exceed the oracle cap")
    from .channel import _logical_state

    amps = _logical_state(code, logical_state)
    psi = code.encode_logical(amps, cap=cap)
    if not code.in_codespace(psi):
        raise ValueError("input state is outside the codespace")

    mu_fam = code.syndrome_cosets(cap=cap)
    mus = mu_fam.leaders
    basis_images = []
    for b in range(1 << code.k):
        enc = code.encode(f2.index_to_bits(b, code.k), cap=cap)
        basis_images.append(_apply_diagonal(gate, enc, cap))
    out_state = _apply_diagonal(gate, psi, cap)

    probabilities = np.zeros(len(mus))
    post_states: list = []
    logical_matrices: list = []
    encoded_basis = [code.encode(f2.index_to_bits(b, code.k), cap=cap)
                     for b in range(1 << code.k)]
    for i, mu in enumerate(mus):
        gamma = zeros(code.n)
        if policy_gammas is not None:
            gamma = as_bits(policy_gammas.get(i, gamma), code.n)
        zhat = mu ^ gamma
        sign = -1.0 if f2.dot(zhat, code.y) else 1.0

        branch = code.x_syndrome_projector_action(mu, out_state)
        p = float(np.linalg.norm(branch) ** 2)
        probabilities[i] = p
        corrected = sign * _apply_z(zhat, branch)
        post_states.append(corrected / np.sqrt(p) if p > 1e-14 else None)

        M = np.zeros((1 << code.k, 1 << code.k), dtype=complex)
        for b in range(1 << code.k):
            br = code.x_syndrome_projector_action(mu, basis_images[b])
            br = sign * _apply_z(zhat, br)
            for bp in range(1 << code.k):
                M[bp, b] = np.vdot(encoded_basis[bp], br)
        logical_matrices.append(M)
    return PipelineResult(code, mus, probabilities, post_states, logical_matrices)


def _apply_z(zvec: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply E(0, z) (a tensor of Pauli Z's) to a dense statevector."""
    n = zvec.size
    idx = np.arange(1 << n)
    par = _parity(idx & f2.bits_to_index(zvec))
    return (1.0 - 2.0 * par) * psi


def _parity(idx) -> np.ndarray:
    x = np.asarray(idx, dtype=np.uint64).copy()
    p = np.zeros(x.shape, dtype=np.int64)
    while x.any():
        p ^= (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return p


def preserves_by_projector(code: CssCode, gate, tol: float = 1e-9,
                           cap: int = ORACLE_CAP) -> bool:
    """Direct check that the gate commutes with the code projector.

    The projector matrix element <v|Pi|w> vanishes unless v ^ w is an
    X-stabilizer and w lies in C1 + y, so commuting with a diagonal gate
    is exactly: the gate phase is constant along every X-stabilizer
    translate of C1 + y.  That condition is checked verbatim.
    """
    if (1 << code.C1.k) * (1 << code.C2.k) > cap:
        raise EnumerationCapExceeded("projector check exceeds the oracle cap")
    phases = gate.phases(cap)
    base = code.C1.words(cap) ^ code.y
    base_idx = np.array([f2.bits_to_index(w) for w in base], dtype=np.int64)
    ref = phases[base_idx]
    for a in code.C2.words():
        if not a.any():
            continue
        shifted = phases[base_idx ^ f2.bits_to_index(a)]
        if np.abs(shifted - ref).max() > tol:
            return False
    return True


def preserves_by_dense_projector(code: CssCode, gate, tol: float = 1e-9) -> bool:
    """Literal sandwich check U Pi U^dag == Pi on dense matrices (tiny n)."""
    if code.n > 10:
        raise EnumerationCapExceeded("dense projector check limited to n <= 10")
    dim = 1 << code.n
    Pi = np.zeros((dim, dim), dtype=complex)
    for v in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[v] = 1.0
        Pi[:, v] = code.codespace_projector_action(e)
    U = np.diag(gate.phases())
    return bool(np.abs(U @ Pi @ U.conj().T - Pi).max() <= tol)


def crosscheck(code: CssCode, gate, states=None, tol: float = 1e-9,
               cap: int = ORACLE_CAP, corrupt: bool = False) -> dict:
    """Compare the oracle pipeline against the analytic channel.

    Checks, for each supplied logical input state: the syndrome
    distribution against the table-based probabilities, the per-syndrome
    logical matrices against the Kraus operators (exactly, including
    signs), and the preservation verdict against the projector route.
    ``corrupt=True`` deliberately perturbs the analytic table first and
    reports the resulting deviation (negative control).
    """
    from .channel import kraus_operators, syndrome_distribution
    from .gencoef import gencoeffs

    table = gencoeffs(code, gate, cap=cap)
    if corrupt:
        table.A = table.A.copy()
        table.A[0, 0] += 0.01
    channel = kraus_operators(table, policy=None)
    kraus_mats = channel.kraus_matrices()

    if states is None:
        states = ["0" * code.k, "+" * code.k]
    prob_dev = 0.0
    kraus_dev = 0.0
    for state in states:
        res = simulate_pipeline(code, gate, state, cap=cap)
        analytic = syndrome_distribution(table, state)
        prob_dev = max(prob_dev, float(np.abs(res.probabilities - analytic).max()))
        prob_dev = max(prob_dev, abs(float(res.probabilities.sum()) - 1.0))
        for i in range(len(res.mu_leaders)):
            M = res.logical_matrices[i]
            off = M - np.diag(np.diag(M))
            kraus_dev = max(kraus_dev, float(np.abs(off).max()))
            kraus_dev = max(kraus_dev, float(np.abs(M - kraus_mats[i]).max()))

    preserved_table = table.preserves()
    preserved_oracle = preserves_by_projector(code, gate, cap=cap)
    return {
        "probability_deviation": prob_dev,
        "kraus_deviation": kraus_dev,
        "preservation_agrees": preserved_table == preserved_oracle,
        "max_deviation": max(prob_dev, kraus_dev,
                             0.0 if preserved_table == preserved_oracle else 1.0),
        "ok": prob_dev < tol and kraus_dev < tol
              and preserved_table == preserved_oracle,
    }
