import math

import numpy as np
import pytest

from cssdiag import css, f2, gates
from cssdiag.channel import (apply_channel, cross_term, density_from_logical,
                             dfs_scan, kraus_operators, make_policy,
                             policy_z_correct, syndrome_distribution,
                             syndrome_probability)
from cssdiag.gencoef import gencoeffs, gencoeffs_direct, gencoeffs_rz
from conftest import random_css_code, random_phase_table


class TestKraus:
    def test_steane_uncorrected(self, steane):
        t = gencoeffs_rz(steane, math.pi / 4)
        chan = kraus_operators(t, None)
        tphase = np.exp(1j * math.pi / 8)
        b0 = chan.kraus[0].diagonal()
        assert np.abs(b0 - 0.75 * np.array([tphase, tphase.conjugate()])).max() < 1e-12
        # nontrivial branches are (1/4) Zbar Tbar-dagger up to global phase
        b1 = chan.kraus[1].diagonal()
        zt = np.array([1.0, -np.exp(-1j * math.pi / 4)])
        ratio = b1 / zt
        assert abs(abs(ratio[0]) - 0.25) < 1e-12
        assert abs(ratio[0] - ratio[1]) < 1e-12

    def test_steane_corrected_all_branches_T(self, steane):
        t = gencoeffs_rz(steane, math.pi / 4)
        chan = kraus_operators(t, "z-correct")
        b0 = chan.kraus[0].diagonal()
        for b in chan.kraus[1:]:
            d = b.diagonal()
            ratio = d / b0
            assert abs(ratio[0] - ratio[1]) < 1e-12
            assert abs(abs(ratio[0]) - 1 / 3) < 1e-12

    def test_identity_gate(self, c422):
        t = gencoeffs_direct(c422, gates.identity(4))
        chan = kraus_operators(t, None)
        assert np.abs(chan.kraus[0].diagonal() - 1.0).max() < 1e-12
        assert np.abs(chan.kraus[1].diagonal()).max() < 1e-12

    def test_completeness_random(self):
        rng = np.random.default_rng(73)
        for _ in range(10):
            code = random_css_code(rng, nmax=6)
            gate = random_phase_table(rng, code.n)
            chan = kraus_operators(gencoeffs_direct(code, gate), None)
            assert chan.completeness_deviation() < 1e-9

    def test_explicit_policy_map(self, steane):
        t = gencoeffs_rz(steane, math.pi / 4)
        pol = make_policy(t, {"0000001": "0000111"})
        chan = kraus_operators(t, pol)
        b1 = chan.kraus[1].diagonal()
        b0 = chan.kraus[0].diagonal()
        assert abs(b1[0] / b0[0] - b1[1] / b0[1]) < 1e-12


class TestSyndromeProbabilities:
    def test_steane_curves(self, steane):
        rng = np.random.default_rng(79)
        for theta in np.linspace(0.03, 2 * math.pi, 25):
            t = gencoeffs_rz(steane, float(theta))
            p0 = (7 * math.cos(4 * theta) + 25) / 32
            pm = (1 - math.cos(4 * theta)) / 32
            for state in ("0", "+", "A"):
                assert syndrome_probability(t, state, f2.zeros(7)) == \
                    pytest.approx(p0, abs=1e-9)
                assert syndrome_probability(t, state, f2.unit(7, 3)) == \
                    pytest.approx(pm, abs=1e-9)
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            assert syndrome_probability(t, v, f2.zeros(7)) == \
                pytest.approx(p0, abs=1e-9)

    def test_422_positive_sign(self, c422):
        for theta in np.linspace(0.1, 3.0, 9):
            t = gencoeffs_rz(c422, float(theta))
            assert syndrome_probability(t, "00", f2.zeros(4)) == \
                pytest.approx((math.cos(4 * theta) + 1) / 2, abs=1e-9)
            for state in ("01", "10", "11"):
                assert syndrome_probability(t, state, f2.zeros(4)) == \
                    pytest.approx(1.0, abs=1e-9)

    def test_422_negative_sign(self, c422_neg):
        for theta in np.linspace(0.1, 3.0, 9):
            t = gencoeffs_rz(c422_neg, float(theta))
            for state in ("00", "01", "10", "11"):
                assert syndrome_probability(t, state, f2.zeros(4)) == \
                    pytest.approx(math.cos(theta) ** 2, abs=1e-9)

    def test_distribution_sums_to_one(self):
        rng = np.random.default_rng(83)
        for _ in range(10):
            code = random_css_code(rng, nmax=6)
            gate = random_phase_table(rng, code.n)
            t = gencoeffs_direct(code, gate)
            amps = rng.normal(size=1 << code.k) + 1j * rng.normal(size=1 << code.k)
            amps /= np.linalg.norm(amps)
            assert syndrome_distribution(t, amps).sum() == pytest.approx(1.0, abs=1e-9)

    def test_cross_terms_sum_to_zero(self):
        rng = np.random.default_rng(89)
        for _ in range(10):
            code = random_css_code(rng, nmax=6)
            gate = random_phase_table(rng, code.n)
            t = gencoeffs_direct(code, gate)
            amps = rng.normal(size=1 << code.k) + 1j * rng.normal(size=1 << code.k)
            amps /= np.linalg.norm(amps)
            total = sum(cross_term(t, amps, mu) for mu in t.mu_leaders)
            assert abs(total) < 1e-9

    def test_plus_states_kill_cross_terms(self):
        rng = np.random.default_rng(97)
        for _ in range(8):
            code = random_css_code(rng, nmax=6)
            gate = random_phase_table(rng, code.n)
            t = gencoeffs_direct(code, gate)
            for mu in t.mu_leaders:
                assert abs(cross_term(t, "+" * code.k, mu)) < 1e-9
                assert abs(cross_term(t, "-" * code.k, mu)) < 1e-9

    def test_physical_state_input(self, steane):
        t = gencoeffs_rz(steane, 0.8)
        psi = steane.encode([0])
        assert syndrome_probability(t, psi, f2.zeros(7)) == pytest.approx(
            (7 * math.cos(3.2) + 25) / 32, abs=1e-9)

    def test_rejects_non_codespace(self, steane):
        t = gencoeffs_rz(steane, 0.8)
        bad = np.zeros(128, dtype=complex)
        bad[3] = 1.0
        with pytest.raises(ValueError):
            syndrome_probability(t, bad, f2.zeros(7))


class TestApplyChannel:
    def test_identity(self, c422):
        t = gencoeffs_direct(c422, gates.identity(4))
        chan = kraus_operators(t, None)
        rho = density_from_logical(c422, "0+")
        out = apply_channel(chan, rho)
        assert np.abs(out - rho).max() < 1e-12

    def test_steane_uncorrected_mixture(self, steane):
        t = gencoeffs_rz(steane, math.pi / 4)
        chan = kraus_operators(t, None)
        rho = density_from_logical(steane, "+")
        out = apply_channel(chan, rho)
        td = np.diag([1.0, np.exp(-1j * math.pi / 4)])
        z = np.diag([1.0, -1.0])
        plus = np.full((2, 2), 0.5, dtype=complex)
        expect = (9 / 16) * td @ plus @ td.conj().T \
            + (7 / 16) * (z @ td) @ plus @ (z @ td).conj().T
        assert np.abs(out - expect).max() < 1e-9
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-9)

    def test_steane_corrected_is_unitary_action(self, steane):
        t = gencoeffs_rz(steane, math.pi / 4)
        chan = kraus_operators(t, "z-correct")
        rho = density_from_logical(steane, "+")
        out = apply_channel(chan, rho)
        td = np.diag([1.0, np.exp(-1j * math.pi / 4)])
        expect = td @ rho @ td.conj().T
        assert np.abs(out - expect).max() < 1e-9

    def test_trace_preserved_random(self):
        rng = np.random.default_rng(101)
        for _ in range(8):
            code = random_css_code(rng, nmax=6)
            gate = random_phase_table(rng, code.n)
            chan = kraus_operators(gencoeffs_direct(code, gate), None)
            dim = 1 << code.k
            m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            rho = m @ m.conj().T
            rho /= np.trace(rho).real
            out = apply_channel(chan, rho)
            assert np.trace(out).real == pytest.approx(1.0, abs=1e-9)
            assert np.linalg.eigvalsh(out).min() > -1e-10

    def test_dimension_mismatch(self, steane):
        chan = kraus_operators(gencoeffs_rz(steane, 0.3), None)
        with pytest.raises(ValueError):
            apply_channel(chan, np.eye(4) / 4)


class TestDfsScan:
    def test_422_positive(self, c422):
        found = {f2.bitstring(b) for b in dfs_scan(c422)}
        assert found == {"01", "10", "11"}

    def test_422_negative(self, c422_neg):
        assert dfs_scan(c422_neg) == []

    def test_steane_empty(self, steane):
        assert dfs_scan(steane) == []
