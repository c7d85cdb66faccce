import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

import wavecirc as w
from wavecirc.sim import circuit_matrix


def block_diag(a, b):
    m = a.shape[0]
    out = np.zeros((2 * m, 2 * m), dtype=complex)
    out[:m, :m] = a
    out[m:, m:] = b
    return out


def csd_reassemble(res):
    m = len(res.alpha)
    c, s = np.diag(np.cos(res.alpha)), np.diag(np.sin(res.alpha))
    cs = np.block([[c, -s], [s, c]])
    return block_diag(res.l0, res.l1) @ cs @ block_diag(res.r0, res.r1)


class TestCosineSine:
    def test_identity(self):
        res = w.cosine_sine_decompose(np.eye(4))
        assert np.abs(res.alpha).max() <= 1e-12
        assert np.abs(csd_reassemble(res) - np.eye(4)).max() <= 1e-12

    def test_pure_sine_block(self):
        u = np.block([[np.zeros((2, 2)), -np.eye(2)],
                      [np.eye(2), np.zeros((2, 2))]])
        res = w.cosine_sine_decompose(u)
        assert np.allclose(res.alpha, np.pi / 2)
        assert np.abs(csd_reassemble(res) - u).max() <= 1e-12

    def test_random_reassembly_and_angle_range(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            u = unitary_group.rvs(8, random_state=rng)
            res = w.cosine_sine_decompose(u)
            assert np.abs(csd_reassemble(res) - u).max() <= 1e-12
            assert np.all(np.diff(res.alpha) >= 0)
            assert np.all((res.alpha >= 0) & (res.alpha <= np.pi / 2 + 1e-12))

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            w.cosine_sine_decompose(np.ones((4, 4)))


class TestDemultiplex:
    def reassemble(self, res):
        d = np.diag(np.exp(1j * res.delta))
        return block_diag(res.v, res.v) @ block_diag(d, d.conj()) \
            @ block_diag(res.w, res.w)

    def test_equal_blocks(self):
        a = unitary_group.rvs(4, random_state=1)
        res = w.demultiplex(a, a)
        assert np.abs(res.delta).max() <= 1e-12
        assert np.abs(self.reassemble(res) - block_diag(a, a)).max() <= 1e-12

    def test_opposite_blocks(self):
        a = unitary_group.rvs(4, random_state=2)
        res = w.demultiplex(a, -a)
        assert np.allclose(np.abs(res.delta), np.pi / 2, atol=1e-12)

    def test_random_pairs(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            l0 = unitary_group.rvs(4, random_state=rng)
            l1 = unitary_group.rvs(4, random_state=rng)
            res = w.demultiplex(l0, l1)
            assert np.abs(self.reassemble(res)
                          - block_diag(l0, l1)).max() <= 1e-12
            assert np.all((res.delta > -np.pi / 2 - 1e-12)
                          & (res.delta <= np.pi / 2 + 1e-12))


class TestMultiplexedRotation:
    def multiplexor_matrix(self, axis, angles, k):
        blocks = []
        for a in angles:
            if axis == "y":
                c, s = np.cos(a / 2), np.sin(a / 2)
                blocks.append(np.array([[c, -s], [s, c]], dtype=complex))
            else:
                blocks.append(np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)]))
        # target is the top qubit: select value b picks block b
        dim = 2 ** (k + 1)
        out = np.zeros((dim, dim), dtype=complex)
        for b, blk in enumerate(blocks):
            for r in range(2):
                for c in range(2):
                    out[r * 2 ** k + b, c * 2 ** k + b] = blk[r, c]
        return out

    def test_single_control_identity(self):
        a0, a1 = 0.7, -0.3
        seq = w.multiplexed_rotation_to_gates("y", [a0, a1], 1, [0])
        got = circuit_matrix(seq)
        want = self.multiplexor_matrix("y", [a0, a1], 1)
        assert np.abs(got - want).max() <= 1e-12

    def test_equal_angles_reduce_to_plain_rotation(self):
        seq = w.multiplexed_rotation_to_gates("z", [0.4] * 4, 2, [0, 1])
        got = circuit_matrix(seq)
        want = self.multiplexor_matrix("z", [0.4] * 4, 2)
        assert np.abs(got - want).max() <= 1e-12

    def test_three_controls_random(self):
        rng = np.random.default_rng(4)
        angles = rng.normal(size=8)
        seq = w.multiplexed_rotation_to_gates("y", angles, 3, [0, 1, 2])
        assert seq.cnot_count() == 8
        got = circuit_matrix(seq)
        want = self.multiplexor_matrix("y", angles, 3)
        assert np.abs(got - want).max() <= 1e-12

    @given(k=st.integers(0, 3), axis=st.sampled_from(["y", "z"]),
           seed=st.integers(0, 10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_cnot_count_and_reconstruction(self, k, axis, seed):
        rng = np.random.default_rng(seed)
        angles = rng.normal(size=2 ** k)
        seq = w.multiplexed_rotation_to_gates(axis, angles, k, list(range(k)))
        assert seq.cnot_count() == (2 ** k if k else 0)
        got = circuit_matrix(seq)
        want = self.multiplexor_matrix(axis, angles, k)
        assert np.abs(got - want).max() <= 1e-11

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            w.multiplexed_rotation_to_gates("y", [0.1, 0.2], 0, [0])


def rz(b):
    return np.diag([np.exp(-0.5j * b), np.exp(0.5j * b)])


def ry(c):
    return np.array([[np.cos(c / 2), -np.sin(c / 2)],
                     [np.sin(c / 2), np.cos(c / 2)]])


class TestZyz:
    def reassemble(self, angles):
        a, b, c, d = angles
        return np.exp(1j * a) * rz(b) @ ry(c) @ rz(d)

    def test_identity(self):
        assert np.allclose(w.zyz(np.eye(2)), (0, 0, 0, 0), atol=1e-14)

    def test_pure_ry(self):
        assert np.allclose(w.zyz(ry(0.7)), (0, 0, 0.7, 0), atol=1e-13)

    def test_gauge_and_reconstruction(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            u = unitary_group.rvs(2, random_state=rng)
            a, b, c, d = w.zyz(u)
            assert 0 <= c <= np.pi
            assert -np.pi < b <= np.pi
            assert np.abs(self.reassemble((a, b, c, d)) - u).max() <= 1e-13

    def test_degenerate_delta_zero(self):
        u = rz(1.1)
        a, b, c, d = w.zyz(u)
        assert d == 0 and c == pytest.approx(0, abs=1e-12)
        u2 = np.exp(0.3j) * rz(0.5) @ ry(np.pi)
        a, b, c, d = w.zyz(u2)
        assert d == 0 and c == pytest.approx(np.pi, abs=1e-7)
        assert np.abs(self.reassemble((a, b, c, d)) - u2).max() <= 1e-7


class TestQsdCompile:
    def test_single_qubit_no_cnot(self):
        u = unitary_group.rvs(2, random_state=0)
        seq = w.qsd_compile(u)
        assert seq.cnot_count() == 0
        assert np.abs(circuit_matrix(seq) - u).max() <= 1e-12

    def test_three_qubit_count(self):
        u = unitary_group.rvs(8, random_state=1)
        seq = w.qsd_compile(u)
        assert seq.cnot_count() == 36

    def test_reconstruction_small(self):
        rng = np.random.default_rng(6)
        for n in (1, 2, 3, 4):
            u = unitary_group.rvs(2 ** n, random_state=rng)
            seq = w.qsd_compile(u)
            assert np.abs(circuit_matrix(seq) - u).max() <= 1e-9

    def test_depth_constancy(self):
        rng = np.random.default_rng(7)
        patterns = set()
        for _ in range(5):
            u = unitary_group.rvs(8, random_state=rng)
            seq = w.qsd_compile(u)
            patterns.add(tuple((g.kind, g.target, g.control) for g in seq))
        assert len(patterns) == 1

    def test_phase_hygiene(self):
        u = unitary_group.rvs(4, random_state=8)
        seq = w.qsd_compile(u)
        bare = circuit_matrix(seq.without_phase())
        ratio = u @ np.linalg.inv(bare)
        offdiag = ratio - np.diag(np.diagonal(ratio))
        assert np.abs(offdiag).max() <= 1e-9
        scalars = np.diagonal(ratio)
        assert np.abs(np.abs(scalars) - 1).max() <= 1e-9
        assert np.abs(scalars - scalars[0]).max() <= 1e-9

    def test_counts_cache_matches_recount(self):
        u = unitary_group.rvs(8, random_state=9)
        seq = w.qsd_compile(u)
        counts = seq.counts()
        assert counts["cx"] == seq.cnot_count()
        assert sum(counts.values()) == len(seq)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            w.qsd_compile(np.eye(6))


class TestCnotCount:
    def test_values(self):
        assert [w.cnot_count(n) for n in range(1, 8)] == \
            [0, 6, 36, 168, 720, 2976, 12096]

    def test_lower_bound(self):
        # (4^n - 3n - 1)/4 rounded up; n=2: ceil(2.25) = 3
        assert w.cnot_lower_bound(1) == 0
        assert w.cnot_lower_bound(2) == 3
        assert w.cnot_lower_bound(5) == 252
        for n in range(1, 8):
            assert w.cnot_lower_bound(n) <= w.cnot_count(n)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            w.cnot_count(0)
