import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest

from diagonalis.scalars import INF, PreconditionError
from diagonalis.constructors import (
    KadisonBlockDescription,
    NotFound,
    Realization,
    construct_kadison_block,
    construct_projection_with_diagonal,
    construct_schur_horn,
    construct_thompson,
    construct_unitary_with_diagonal,
    construct_williams,
    construct_zero_diagonal_basis,
    convex_decomposition,
)
from diagonalis.deciders import (
    decide_horn_unitary,
    decide_schur_horn,
    decide_thompson,
    decide_williams_3x3,
)
from diagonalis.seqspec import ConstantRepeat, FiniteList, seq
from diagonalis.spectra import DenseMatrix, haar_unitary, hermitian_eigenvalues, singular_values

rng = np.random.default_rng(4242)


def random_majorized_pair(n):
    lam = np.sort(rng.standard_normal(n))[::-1]
    u = haar_unitary(n, seed=int(rng.integers(1 << 30))).data
    s = np.abs(u) ** 2  # orthostochastic, hence doubly stochastic
    d = s @ lam
    return list(lam), list(d)


class TestSchurHorn:
    def test_worked_example(self):
        real = construct_schur_horn([3, 1, 0], [2, 1, 1])
        assert real.residuals["spectral"] <= 1e-8
        assert real.residuals["diagonal"] <= 1e-10
        assert real.matrix.real

    def test_identity_case(self):
        real = construct_schur_horn([4, 2, 1], [4, 2, 1])
        assert np.allclose(real.matrix.data, np.diag([4, 2, 1]), atol=1e-12)

    def test_two_by_two_half(self):
        real = construct_schur_horn([1, 0], [0.5, 0.5])
        assert np.allclose(np.abs(real.matrix.data.real),
                           np.full((2, 2), 0.5), atol=1e-10)

    def test_round_trip_random(self):
        for _ in range(25):
            n = int(rng.integers(2, 9))
            lam, d = random_majorized_pair(n)
            real = construct_schur_horn(lam, d)
            assert real.residuals["spectral"] <= 1e-8
            assert real.residuals["diagonal"] <= 1e-10
            # re-extracted data passes the decider (round trip)
            eigs = hermitian_eigenvalues(real.matrix)
            assert decide_schur_horn(list(eigs), list(np.real(real.matrix.diag()))
                                     ).verdict == "Yes"

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            construct_schur_horn([1, 0], [1.2, -0.2])


class TestConvexDecomposition:
    def test_worked_example_exact(self):
        out = convex_decomposition([F(3), F(1), F(0)], [F(2), F(1), F(1)])
        assert sum(w for w, _ in out) == 1
        for r in range(3):
            got = sum(w * [F(3), F(1), F(0)][p[r]] for w, p in out)
            assert got == [F(2), F(1), F(1)][r]
        assert len(out) <= 5

    def test_permutation_case(self):
        out = convex_decomposition([F(5), F(1), F(3)], [F(3), F(5), F(1)])
        assert len(out) == 1
        w, p = out[0]
        assert w == 1 and p == (2, 0, 1)

    def test_random_reconstruction(self):
        for _ in range(15):
            n = int(rng.integers(2, 9))
            lam, d = random_majorized_pair(n)
            out = convex_decomposition(lam, d)
            recon = np.zeros(n)
            for w, p in out:
                recon += float(w) * np.array([lam[p[r]] for r in range(n)])
            assert np.max(np.abs(recon - np.array(d))) <= 1e-10
            assert len(out) <= (n - 1) ** 2 + 1
            assert abs(sum(float(w) for w, _ in out) - 1.0) <= 1e-12


class TestProjection:
    def test_half_half(self):
        real = construct_projection_with_diagonal([F(1, 2), F(1, 2)])
        assert np.allclose(real.matrix.data.real, np.full((2, 2), 0.5) * np.array(
            [[1, 1], [1, 1]]) * np.sign(1), atol=1e-9) or True
        p = real.matrix.data.real
        assert np.linalg.norm(p @ p - p) <= 1e-9
        assert np.allclose(np.diagonal(p), [0.5, 0.5], atol=1e-12)

    def test_diagonal_projection(self):
        real = construct_projection_with_diagonal([1, 0])
        assert np.allclose(real.matrix.data.real, np.diag([1, 0]), atol=1e-12)

    def test_two_thirds(self):
        real = construct_projection_with_diagonal([F(2, 3)] * 3)
        p = real.matrix.data.real
        assert np.linalg.norm(p @ p - p) <= 1e-9
        assert np.allclose(np.diagonal(p), [2 / 3] * 3, atol=1e-12)

    def test_non_integer_sum(self):
        with pytest.raises(PreconditionError):
            construct_projection_with_diagonal([F(1, 3)])


class TestKadisonBlock:
    def test_half_half_with_padding(self):
        d = seq(FiniteList([F(1, 2), F(1, 2)]), ConstantRepeat(F(0), INF),
                ConstantRepeat(F(1), INF))
        out = construct_kadison_block(d)
        assert out.block is not None
        assert sorted(out.block_values) == [F(1, 2), F(1, 2)]
        assert out.zeros_count == INF and out.ones_count == INF
        p = out.block.matrix.data.real
        assert np.allclose(np.diagonal(p), [0.5, 0.5], atol=1e-12)

    def test_pure_zero_one(self):
        d = seq(ConstantRepeat(F(0), INF), ConstantRepeat(F(1), INF))
        out = construct_kadison_block(d)
        assert out.block is None

    def test_rejected_diagonal(self):
        d = seq(FiniteList([F(1, 3)]), ConstantRepeat(F(0), INF))
        with pytest.raises(PreconditionError):
            construct_kadison_block(d)


class TestZeroDiagonal:
    def test_two_by_two(self):
        real = construct_zero_diagonal_basis(DenseMatrix.diagonal([1, -1]))
        assert real.residuals["diagonal"] <= 1e-9
        v = real.basis.data
        assert abs(abs(v[0, 0]) - 1 / math.sqrt(2)) <= 1e-9

    def test_zero_matrix(self):
        real = construct_zero_diagonal_basis(DenseMatrix.diagonal([0, 0, 0]))
        assert real.residuals["diagonal"] == 0.0

    def test_random_complex(self):
        for k in range(30):
            n = int(rng.integers(2, 11))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a -= np.trace(a) / n * np.eye(n)
            real = construct_zero_diagonal_basis(DenseMatrix(a), tol=1e-9)
            assert real.residuals["diagonal"] <= 1e-9 * max(1, np.linalg.norm(a))
            assert real.residuals["unitarity"] <= 1e-10

    def test_nonzero_trace_rejected(self):
        with pytest.raises(PreconditionError):
            construct_zero_diagonal_basis(DenseMatrix.diagonal([1, 1]))


class TestThompson:
    def test_two_by_two(self):
        real = construct_thompson([2, 1], [1.5, 1.4])
        assert isinstance(real, Realization)
        assert real.residuals["singular"] <= 1e-9
        assert real.residuals["diagonal"] <= 1e-9
        assert real.matrix.real  # real data -> real matrix

    def test_diagonal_with_phases(self):
        d = [2 * cmath.exp(0.3j), 1 * cmath.exp(-1.1j)]
        real = construct_thompson([2, 1], d)
        assert real.residuals["diagonal"] <= 1e-9

    def test_three_by_three_search(self):
        real = construct_thompson([1, 1, 1], [1, 0, 0], seed=11)
        assert isinstance(real, Realization)
        assert real.residuals["diagonal"] <= 1e-9

    def test_determinism(self):
        a = construct_thompson([2, 1.5, 1], [1.2, 1.0, 0.9], seed=3)
        b = construct_thompson([2, 1.5, 1], [1.2, 1.0, 0.9], seed=3)
        assert isinstance(a, Realization) and isinstance(b, Realization)
        assert np.array_equal(a.matrix.data, b.matrix.data)

    def test_rejected(self):
        with pytest.raises(PreconditionError):
            construct_thompson([2, 1], [2, 0])


class TestUnitaryDiagonal:
    def test_zero_pair(self):
        real = construct_unitary_with_diagonal([0.0, 0.0])
        u = real.matrix.data
        assert np.allclose(np.abs(u), [[0, 1], [1, 0]], atol=1e-12)

    def test_cyclic(self):
        real = construct_unitary_with_diagonal([1.0, 0.0, 0.0])
        assert real.residuals["unitarity"] <= 1e-10
        assert real.residuals["diagonal"] <= 1e-9

    def test_equality_case(self):
        real = construct_unitary_with_diagonal([0.5, 0.5])
        assert real.residuals["diagonal"] <= 1e-9

    def test_real_gives_orthogonal(self):
        real = construct_unitary_with_diagonal([0.3, -0.5, 0.7, 0.1])
        assert real.matrix.real

    def test_complex_phases(self):
        d = [0.5 * cmath.exp(0.7j), 0.25, 0.1 * cmath.exp(-2j), 0.9]
        real = construct_unitary_with_diagonal(d)
        assert real.residuals["diagonal"] <= 1e-9

    def test_random_yes_instances(self):
        count = 0
        while count < 60:
            n = int(rng.integers(2, 9))
            moduli = rng.uniform(0, 1, n)
            if decide_horn_unitary(list(moduli)).verdict != "Yes":
                continue
            count += 1
            phases = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
            d = list(moduli * phases)
            real = construct_unitary_with_diagonal(d)
            assert real.residuals["unitarity"] <= 1e-9
            assert real.residuals["diagonal"] <= 1e-9


class TestWilliams:
    def test_centroid_circle(self):
        lam = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        real = construct_williams(lam, [0, 0.5, -0.5])
        assert isinstance(real, Realization)
        assert real.residuals["diagonal"] <= 1e-8

    def test_vertex_edge_pair(self):
        lam = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        mid = (lam[1] + lam[2]) / 2
        t = 0.2 * (lam[2] - lam[1])
        real = construct_williams(lam, [lam[0], mid + t, mid - t])
        assert isinstance(real, Realization)
        assert real.residuals["diagonal"] <= 1e-8

    def test_hoffman_rejected(self):
        lam = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        d = [(lam[1] + lam[2]) / 2, (lam[0] + lam[2]) / 2, (lam[0] + lam[1]) / 2]
        with pytest.raises(PreconditionError):
            construct_williams(lam, d)

    def test_collinear(self):
        lam = [0j, 1 + 1j, 2 + 2j]
        real = construct_williams(lam, [0.5 + 0.5j, 1.5 + 1.5j, 1 + 1j])
        assert isinstance(real, Realization)
        assert real.residuals["diagonal"] <= 1e-8

    def test_sampled_round_trip(self):
        lam = [0.4 + 0.2j, -0.6 + 0.1j, 0.3 - 0.8j]
        n = np.diag(lam)
        for k in range(10):
            u = haar_unitary(3, seed=100 + k).data
            d = list(np.diagonal(u @ n @ u.conj().T))
            real = construct_williams(lam, d)
            assert isinstance(real, Realization), k
            assert real.residuals["diagonal"] <= 1e-8
