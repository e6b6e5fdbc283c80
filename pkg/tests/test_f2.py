import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cssdiag import f2
from cssdiag.f2 import (BinaryCode, CosetFamily, as_bits, cosets,
                        drop_allones_row, macwilliams_transform,
                        max_power_of_two_dividing_weights, puncture_first,
                        reed_muller, rm_dimension, rref, theta_enumerator,
                        theta_enumerator_dual, weight, weight_enumerator)


def bits_strategy(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n)


class TestBitVec:
    @given(bits_strategy(9), bits_strategy(9))
    def test_xor_weight_identity(self, a, b):
        a, b = as_bits(a), as_bits(b)
        assert weight(a ^ b) == weight(a) + weight(b) - 2 * weight(a & b)

    def test_index_round_trip(self):
        for idx in range(32):
            assert f2.bits_to_index(f2.index_to_bits(idx, 5)) == idx


class TestRref:
    def test_dependent_rows(self):
        R, rank = rref([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert rank == 2
        assert R.tolist() == [[1, 0, 1], [0, 1, 1]]

    def test_empty_span(self):
        code = BinaryCode(3, None)
        assert code.k == 0 and len(code) == 1

    def test_hamming_parity_check_rank(self):
        H = [[1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0], [1, 0, 1, 0, 1, 0, 1]]
        assert BinaryCode(7, H).k == 3

    def test_canonical_form_unique(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            rows = rng.integers(0, 2, size=(4, 7))
            code = BinaryCode(7, rows)
            # re-span from random codeword combinations
            combos = (rng.integers(0, 2, size=(6, code.k)) @ code.G) % 2 \
                if code.k else np.zeros((0, 7), dtype=np.uint8)
            again = BinaryCode(7, np.concatenate([combos, code.G]))
            assert code == again


class TestDual:
    def test_rm13_self_dual(self):
        assert reed_muller(1, 3).dual() == reed_muller(1, 3)

    def test_full_space(self):
        assert BinaryCode.full(5).dual() == BinaryCode.zero(5)

    def test_repetition_dual_is_even_code(self):
        rep = BinaryCode(4, [np.ones(4, dtype=np.uint8)])
        d = rep.dual()
        assert d.k == 3
        # enumerate all 16 vectors, keep those orthogonal to 1
        expect = {f2.key(v) for v in BinaryCode.full(4).words()
                  if weight(v) % 2 == 0}
        assert {f2.key(v) for v in d.words()} == expect

    @given(st.integers(2, 7), st.integers(1, 4), st.integers(0, 2 ** 20 - 1))
    @settings(max_examples=40, deadline=None)
    def test_double_dual(self, n, rows, seed):
        rng = np.random.default_rng(seed)
        code = BinaryCode(n, rng.integers(0, 2, size=(min(rows, n), n)))
        assert code.dual().dual() == code
        assert code.k + code.dual().k == n


class TestCosets:
    def test_trivial_quotient(self):
        c = reed_muller(1, 3)
        fam = cosets(c, c)
        assert len(fam) == 1 and not fam.leaders[0].any()

    def test_steane_logical_cosets(self):
        H = BinaryCode(7, [[1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0],
                           [1, 0, 1, 0, 1, 0, 1]])
        fam = cosets(H, H.dual())
        assert len(fam) == 2
        # nontrivial leader: minimal-weight member of C1perp + 1
        assert weight(fam.leaders[1]) == 3

    def test_8_cosets(self):
        sub = BinaryCode(4, [np.ones(4, dtype=np.uint8)])
        fam = cosets(sub, BinaryCode.full(4))
        assert len(fam.leaders) == 8
        seen = {f2.key(ld) for ld in fam.leaders}
        assert len(seen) == 8

    def test_leader_determinism(self):
        sub = BinaryCode(4, [np.ones(4, dtype=np.uint8)])
        f1 = cosets(sub, BinaryCode.full(4))
        f2_ = cosets(sub, BinaryCode.full(4))
        assert all(np.array_equal(a, b)
                   for a, b in zip(f1.leaders, f2_.leaders))

    def test_not_contained(self):
        with pytest.raises(ValueError):
            cosets(BinaryCode(3, [[1, 1, 0]]), BinaryCode(3, [[1, 0, 1]]))

    def test_leader_of(self):
        sub = BinaryCode(4, [np.ones(4, dtype=np.uint8)])
        fam = cosets(sub, BinaryCode.full(4))
        v = as_bits([1, 1, 1, 0])
        assert np.array_equal(fam.leader_of(v), as_bits([0, 0, 0, 1]))


class TestWeightEnumerators:
    def test_steane_c1(self):
        H = BinaryCode(7, [[1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0],
                           [1, 0, 1, 0, 1, 0, 1]])
        counts = weight_enumerator(H.dual())  # C1 = the Hamming [7,4]
        assert counts.tolist() == [1, 0, 0, 7, 7, 0, 0, 1]

    def test_832_c1perp(self):
        counts = weight_enumerator(reed_muller(1, 3))
        assert counts.tolist() == [1, 0, 0, 0, 14, 0, 0, 0, 1]

    def test_zero_code(self):
        counts = weight_enumerator(BinaryCode.zero(5))
        assert counts[0] == 1 and sum(counts) == 1

    @given(st.integers(2, 8), st.integers(0, 2 ** 20 - 1))
    @settings(max_examples=40, deadline=None)
    def test_macwilliams_identity(self, n, seed):
        rng = np.random.default_rng(seed)
        code = BinaryCode(n, rng.integers(0, 2, size=(n // 2 + 1, n)))
        counts = weight_enumerator(code)
        dual_counts = macwilliams_transform(counts, n, len(code))
        assert dual_counts.tolist() == weight_enumerator(code.dual()).tolist()


class TestThetaEnumerator:
    def test_single_zero_word(self):
        code = BinaryCode.zero(6)
        theta = 0.83
        assert theta_enumerator(code, theta) == pytest.approx(
            math.cos(theta / 2) ** 6)

    def test_theta_zero_gives_one(self):
        code = reed_muller(1, 3)
        assert theta_enumerator(code, 0.0) == pytest.approx(1.0)

    def test_direct_vs_dual_route(self):
        H = BinaryCode(7, [[1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0],
                           [1, 0, 1, 0, 1, 0, 1]])
        rng = np.random.default_rng(7)
        for theta in rng.uniform(0, 2 * np.pi, size=20):
            a = theta_enumerator(H, float(theta))
            b = theta_enumerator_dual(H, float(theta))
            assert abs(a - b) < 1e-12


class TestReedMuller:
    def test_constants(self):
        rm = reed_muller(0, 3)
        assert rm.k == 1 and len(rm) == 2
        assert {f2.key(v) for v in rm.words()} == {
            f2.key(f2.zeros(8)), f2.key(f2.ones(8))}

    def test_rm13_parameters(self):
        rm = reed_muller(1, 3)
        assert (rm.n, rm.k, rm.min_distance()) == (8, 4, 4)

    def test_nesting_and_dims(self):
        assert rm_dimension(2, 4) == 11 and rm_dimension(1, 4) == 5
        assert reed_muller(1, 4).is_subcode_of(reed_muller(2, 4))

    def test_dims_and_distance_sweep(self):
        for m in range(1, 5):
            for r in range(0, m + 1):
                rm = reed_muller(r, m)
                assert rm.k == rm_dimension(r, m)
                assert rm.min_distance() == 1 << (m - r)

    def test_recursive_construction(self):
        # (u, u+v) recursion reproduces the canonical bases
        for m in range(1, 5):
            for r in range(1, m + 1):
                u = reed_muller(r, m)
                v = reed_muller(r - 1, m)
                rows = [np.concatenate([g, g]) for g in u.G]
                rows += [np.concatenate([np.zeros(1 << m, dtype=np.uint8), g])
                         for g in v.G]
                assert BinaryCode(1 << (m + 1), rows) == reed_muller(r, m + 1)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            reed_muller(4, 3)


class TestPuncturing:
    def test_puncture_length(self):
        assert puncture_first(reed_muller(1, 4)).n == 15

    def test_puncture_repetition(self):
        code = BinaryCode(4, [np.ones(4, dtype=np.uint8)])
        p = puncture_first(code)
        assert {f2.key(v) for v in p.words()} == {
            f2.key(f2.zeros(3)), f2.key(f2.ones(3))}

    def test_drop_allones(self):
        sub = drop_allones_row(reed_muller(1, 3))
        assert sub.k == 3
        assert set(int(w) for w in sub.weights()) == {0, 4}

    def test_drop_requires_allones(self):
        with pytest.raises(ValueError):
            drop_allones_row(BinaryCode(4, [[1, 1, 0, 0]]))


class TestWeightDivisor:
    def test_rm14(self):
        assert max_power_of_two_dividing_weights(reed_muller(1, 4)) == 3

    def test_rm24_exactly_one(self):
        # x1x2 + x3x4 has weight 6, so only 2^1 divides all weights.
        code = reed_muller(2, 4)
        assert max_power_of_two_dividing_weights(code) == 1
        ws = set(int(w) for w in code.weights())
        assert 6 in ws

    def test_mceliece_exponent_sweep(self):
        for m in range(2, 6):
            for r in range(1, m):
                assert max_power_of_two_dividing_weights(
                    reed_muller(r, m)) == (m - 1) // r

    def test_repetition_six(self):
        assert max_power_of_two_dividing_weights(
            BinaryCode(6, [np.ones(6, dtype=np.uint8)])) == 1

    def test_zero_code_sentinel(self):
        assert max_power_of_two_dividing_weights(BinaryCode.zero(4)) == math.inf


class TestTextFormat:
    def test_round_trip(self):
        code = reed_muller(1, 3)
        again = BinaryCode.from_text(code.to_text())
        assert again == code
