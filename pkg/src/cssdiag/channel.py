"""The average logical channel: per-syndrome Kraus operators, syndrome
probabilities with their state-dependent cross terms, and application to
logical density matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import f2
from .css import CssCode
from .f2 import as_bits, bits_to_index, bitstring, weight, zeros
from .gencoef import GenCoeffTable, LogicalDiagonalOp

PSD_TOL = -1e-10


@dataclass
class CorrectionPolicy:
    """Map from syndrome leader to the Z-logical coset applied afterwards.

    gamma_for[mu-key] holds a gamma leader; missing syndromes default to the
    zero logical.  The trivial syndrome always maps to zero.
    """

    table: GenCoeffTable
    gamma_for: dict = field(default_factory=dict)

    def gamma(self, mu) -> np.ndarray:
        k = f2.key(self.table.mu_leaders[self.table.mu_index(mu)])
        if k in self.gamma_for:
            return self.gamma_for[k]
        return zeros(self.table.code.n)


def policy_none(table: GenCoeffTable) -> CorrectionPolicy:
    return CorrectionPolicy(table)


def policy_z_correct(table: GenCoeffTable) -> CorrectionPolicy:
    """Align every syndrome's dominant coefficient with the identity.

    For each nontrivial syndrome choose gamma maximising |A[mu, gamma]|, so
    the corrected operator is dominated by the logical identity (ties break
    toward the canonical leader order; the trivial syndrome stays at zero).
    """
    gm: dict = {}
    for i, mu in enumerate(table.mu_leaders):
        if i == 0:
            continue
        j = int(np.argmax(np.abs(table.A[i])))
        if j:
            gm[f2.key(mu)] = table.gamma_leaders[j]
    return CorrectionPolicy(table, gm)


def make_policy(table: GenCoeffTable, spec) -> CorrectionPolicy:
    """Resolve 'none', 'z-correct', or an explicit {mu-bits: gamma-bits} map."""
    if isinstance(spec, CorrectionPolicy):
        return spec
    if spec in (None, "none"):
        return policy_none(table)
    if spec == "z-correct":
        return policy_z_correct(table)
    if isinstance(spec, dict):
        gm = {}
        for mu_txt, g_txt in spec.items():
            mu = table.mu_leaders[table.mu_index(as_bits(mu_txt))]
            gamma = table.gamma_leaders[table.gamma_index(as_bits(g_txt))]
            if not mu.any() and gamma.any():
                raise ValueError("the trivial syndrome must map to gamma = 0")
            gm[f2.key(mu)] = gamma
        return CorrectionPolicy(table, gm)
    raise ValueError(f"unknown policy {spec!r}")


@dataclass
class LogicalChannel:
    """Kraus operators B_mu as diagonal operators on the logical space."""

    code: CssCode
    mu_leaders: list
    kraus: list  # list of LogicalDiagonalOp, aligned with mu_leaders

    def kraus_matrices(self) -> list[np.ndarray]:
        return [np.diag(b.diagonal()) for b in self.kraus]

    def completeness_deviation(self) -> float:
        total = sum(m.conj().T @ m for m in self.kraus_matrices())
        return float(np.abs(total - np.eye(total.shape[0])).max())


def kraus_operators(table: GenCoeffTable, policy=None) -> LogicalChannel:
    """B_mu = sum_gamma A[mu,gamma] Zbar^(label(gamma) ^ label(gamma_mu))."""
    pol = make_policy(table, policy)
    code = table.code
    k = code.k
    ops = []
    for i, mu in enumerate(table.mu_leaders):
        gm_label = code.gamma_label(pol.gamma(mu))
        coeffs = np.zeros(1 << k, dtype=complex)
        for j, gamma in enumerate(table.gamma_leaders):
            beta = code.gamma_label(gamma) ^ gm_label
            coeffs[bits_to_index(beta)] += table.A[i, j]
        ops.append(LogicalDiagonalOp(k, coeffs))
    return LogicalChannel(code, list(table.mu_leaders), ops)


def _logical_state(code: CssCode, state) -> np.ndarray:
    """Accept a 2^k amplitude vector, a product spec over {0,1,+,-,A}, or a
    full 2^n codespace statevector; return normalised logical amplitudes."""
    k = code.k
    if isinstance(state, str):
        if len(state) != k:
            raise ValueError(f"product spec must have length k={k}")
        one_qubit = {
            "0": np.array([1.0, 0.0], dtype=complex),
            "1": np.array([0.0, 1.0], dtype=complex),
            "+": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2),
            "-": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2),
            "A": np.array([1.0, np.exp(1j * np.pi / 4)], dtype=complex) / np.sqrt(2),
        }
        amps = np.array([1.0], dtype=complex)
        for ch in state:
            amps = np.kron(amps, one_qubit[ch])
        return amps
    state = np.asarray(state, dtype=complex)
    if state.size == (1 << k):
        amps = state
    elif state.size == (1 << code.n):
        amps = code.logical_amplitudes(state)
        if abs(np.linalg.norm(amps) - 1.0) > 1e-9:
            raise ValueError("state lies outside the codespace")
    else:
        raise ValueError("state must have 2^k or 2^n amplitudes")
    nrm = np.linalg.norm(amps)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("state is not normalised")
    return amps / nrm


def syndrome_probability(table: GenCoeffTable, state, mu) -> float:
    """Probability of observing syndrome mu on the given codespace state.

    Equals sum_gamma |A|^2 plus the state-dependent cross terms; computed
    as the squared norm of the uncorrected Kraus branch.
    """
    code = table.code
    amps = _logical_state(code, state)
    i = table.mu_index(mu)
    coeffs = np.zeros(1 << code.k, dtype=complex)
    for j, gamma in enumerate(table.gamma_leaders):
        coeffs[bits_to_index(code.gamma_label(gamma))] += table.A[i, j]
    branch = LogicalDiagonalOp(code.k, coeffs).diagonal() * amps
    return float(np.linalg.norm(branch) ** 2)


def syndrome_distribution(table: GenCoeffTable, state) -> np.ndarray:
    return np.array([
        syndrome_probability(table, state, mu) for mu in table.mu_leaders
    ])


def cross_term(table: GenCoeffTable, state, mu) -> float:
    """The state-dependent part of the syndrome probability."""
    i = table.mu_index(mu)
    base = float(np.sum(np.abs(table.A[i]) ** 2))
    return syndrome_probability(table, state, mu) - base


def assert_density(rho: np.ndarray, tol: float = 1e-9):
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    ev = np.linalg.eigvalsh(rho)
    if ev.min() < PSD_TOL:
        raise ValueError(f"density matrix not PSD (min eigenvalue {ev.min():.2e})")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise ValueError("density matrix trace differs from 1")


def apply_channel(channel: LogicalChannel, rho: np.ndarray) -> np.ndarray:
    """rho -> sum_mu B_mu rho B_mu^dagger on the logical space."""
    rho = np.asarray(rho, dtype=complex)
    dim = 1 << channel.code.k
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} density matrix")
    assert_density(rho)
    out = np.zeros_like(rho)
    for b in channel.kraus:
        d = b.diagonal()
        out += (d[:, None] * rho) * d.conj()[None, :]
    return out


def density_from_logical(code: CssCode, state) -> np.ndarray:
    amps = _logical_state(code, state)
    return np.outer(amps, amps.conj())


def dfs_scan(code: CssCode, thetas=None, tol: float = 1e-9,
             cap: int = f2.DEFAULT_ENUM_CAP) -> list[np.ndarray]:
    """Logical basis states whose trivial-syndrome probability is 1 across
    the whole rotation-angle grid (an embedded decoherence-free subspace)."""
    from .gencoef import gencoeffs_rz

    if thetas is None:
        thetas = np.linspace(0.05, 2 * np.pi - 0.05, 29)
    survivors = list(range(1 << code.k))
    for theta in thetas:
        table = gencoeffs_rz(code, float(theta), cap=cap)
        keep = []
        for b in survivors:
            amps = np.zeros(1 << code.k, dtype=complex)
            amps[b] = 1.0
            if abs(syndrome_probability(table, amps, zeros(code.n)) - 1.0) <= tol:
                keep.append(b)
        survivors = keep
        if not survivors:
            break
    return [f2.index_to_bits(b, code.k) for b in survivors]
