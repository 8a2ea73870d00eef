import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest

from diagonalis.scalars import INF, QC, PreconditionError
from diagonalis.deciders import (
    check_arveson,
    classify_trace_set,
    decide_williams_3x3,
    essential_codimension_finite,
    verify_kadison_codimension_identity,
    verify_normal_codimension_identity,
)
from diagonalis.seqspec import ConstantRepeat, FiniteList, Geometric, seq
from diagonalis.spectra import DenseMatrix, haar_unitary

rng = np.random.default_rng(777)


def cube_roots():
    return [cmath.exp(2j * math.pi * k / 3) for k in range(3)]


class TestWilliams:
    def test_centroid_circle(self):
        lam = cube_roots()
        out = decide_williams_3x3(lam, [0.0, 0.5, -0.5])
        assert out.verdict == "Yes"
        assert abs(out.certificate["ellipse_center"]) <= 1e-9

    def test_centroid_pair_outside(self):
        lam = cube_roots()
        assert decide_williams_3x3(lam, [0.0, 0.7, -0.7]).verdict == "No"

    def test_hoffman_midpoints(self):
        lam = cube_roots()
        d = [(lam[1] + lam[2]) / 2, (lam[0] + lam[2]) / 2, (lam[0] + lam[1]) / 2]
        assert decide_williams_3x3(lam, d).verdict == "No"

    def test_vertex_case(self):
        lam = cube_roots()
        assert decide_williams_3x3(lam, [lam[0], lam[1], lam[2]]).verdict == "Yes"
        # symmetric pair strictly inside the opposite edge
        mid = (lam[1] + lam[2]) / 2
        t = 0.3 * (lam[2] - lam[1])
        assert decide_williams_3x3(lam, [lam[0], mid + t, mid - t]).verdict == "Yes"
        # pair symmetric about the wrong point
        assert decide_williams_3x3(lam, [lam[0], mid + t, mid - 2 * t]).verdict == "No"

    def test_exact_rational_triangle(self):
        lam = [QC(F(0), F(0)), QC(F(1), F(0)), QC(F(0), F(1))]
        centroid = QC(F(1, 3), F(1, 3))
        # trace constraint pins d2 + d3
        rest = QC(F(1), F(1)) - centroid
        d2 = rest / QC(F(2), F(0)) + QC(F(1, 10), F(0))
        d3 = rest - d2
        out = decide_williams_3x3(lam, [centroid, d2, d3])
        assert out.mode == "exact"
        assert out.verdict in ("Yes", "No")
        # oracle: compare against the float path on the same data
        fl = decide_williams_3x3([complex(v) for v in lam],
                                 [complex(centroid), complex(d2), complex(d3)])
        assert fl.verdict == out.verdict

    def test_edge_case_trace_consistency(self):
        lam = [0j, 2 + 0j, 1 + 2j]
        d1 = 0.5 * (lam[0] + lam[1])  # on the bottom edge
        reflected = lam[0] + lam[1] - d1
        d2 = 0.25 * reflected + 0.75 * lam[2]
        d3 = reflected + lam[2] - d2
        assert decide_williams_3x3(lam, [d1, d2, d3]).verdict == "Yes"
        assert decide_williams_3x3(lam, [d1, d2, d3 + 0.05]).verdict == "No"

    def test_collinear_reduces_to_schur_horn(self):
        lam = [0j, 1 + 1j, 2 + 2j]
        out = decide_williams_3x3(lam, [0.5 + 0.5j, 1.5 + 1.5j, 1 + 1j])
        assert out.verdict == "Yes"
        assert out.certificate["clause"] == "collinear reduction"
        assert decide_williams_3x3(lam, [2.5 + 2.5j, 0.25 + 0.25j, 0.25 + 0.25j]).verdict == "No"

    def test_sampled_diagonals_accepted(self):
        lam = np.array([0.3 + 0.1j, 1.2 - 0.4j, -0.5 + 0.9j])
        n = DenseMatrix(np.diag(lam))
        for k in range(200):
            u = haar_unitary(3, seed=k).data
            d = np.diagonal(u @ n.data @ u.conj().T)
            assert decide_williams_3x3(list(lam), list(d)).verdict == "Yes", k

    def test_conic_center_matches_trace_center(self):
        # the inscribed conic's center agrees with (sum(lam) - d1)/2 exactly
        from diagonalis.deciders import (_conic_center, _conic_through_tangent)
        from diagonalis.ratlinalg import barycentric
        lam = [QC(F(0), F(0)), QC(F(1), F(0)), QC(F(0), F(1))]
        d1 = QC(F(1, 4), F(1, 3))
        u, v, w = barycentric(d1, *lam)
        conj = (v * w, u * w, u * v)
        pairs = ((1, 2), (0, 2), (0, 1))
        traces, dirs = [], []
        for k in range(3):
            i, j = pairs[k]
            s = conj[i] + conj[j]
            pt = (lam[i] * conj[i] + lam[j] * conj[j]) / QC(F(s), F(0))
            traces.append((pt.re, pt.im))
            sd = lam[j] - lam[i]
            dirs.append((sd.re, sd.im))
        coef = _conic_through_tangent(traces, dirs, exact=True)
        cx, cy = _conic_center(coef, exact=True)
        center = (lam[0] + lam[1] + lam[2] - d1) * QC(F(1, 2), F(0))
        assert (cx, cy) == (center.re, center.im)

    def test_swap_invariance(self):
        lam = cube_roots()
        d = [0.1 + 0.05j, 0.4 - 0.2j]
        d.append(sum(lam) - d[0] - d[1])
        a = decide_williams_3x3(lam, [d[0], d[1], d[2]]).verdict
        b = decide_williams_3x3(lam, [d[0], d[2], d[1]]).verdict
        assert a == b
        perm = [lam[2], lam[0], lam[1]]
        c = decide_williams_3x3(perm, [d[0], d[1], d[2]]).verdict
        assert a == c


class TestArveson:
    X = [QC(F(0), F(0)), QC(F(1), F(0)), QC(F(0), F(1))]

    def test_balanced_pair(self):
        d = seq(FiniteList([F(1, 2), F(1, 2)]), ConstantRepeat(F(0), INF))
        out = check_arveson(self.X, d)
        assert out.verdict == "Yes"
        cs = out.certificate["c"]
        assert sum(cs) == 0

    def test_single_half(self):
        d = seq(FiniteList([F(1, 2)]), ConstantRepeat(F(0), INF))
        assert check_arveson(self.X, d).verdict == "No"

    def test_values_in_vertices(self):
        d = seq(FiniteList([F(1), F(1)]), ConstantRepeat(F(0), INF), field="real")
        out = check_arveson(self.X, d)
        assert out.verdict == "Yes"

    def test_geometric_tail_deviation(self):
        # entries 2^-k accumulate at vertex 0 with deviation sum 1
        d = seq(Geometric(F(1, 2), F(1, 2)), ConstantRepeat(F(0), INF))
        out = check_arveson(self.X, d)
        assert out.verdict == "Yes"
        assert out.certificate["deviation_sum"] == QC(F(1), F(0))

    def test_interior_limit_rejected(self):
        d = seq(Geometric(F(1, 8), F(1, 2), F(1, 4)))
        with pytest.raises(PreconditionError):
            check_arveson(self.X, d)

    def test_float_search(self):
        x = [0.0, 1.0, 1j]
        d = seq(FiniteList([0.25, 0.75]), ConstantRepeat(0.0, INF), exact=False)
        out = check_arveson(x, d)
        assert out.verdict == "Yes"

    def test_assignment_tie_breaking_is_immaterial(self):
        # 1/2 ties between vertices 0 and 1; any summable assignment differs
        # by a zero-sum lattice element, so the verdict matches either way
        d = seq(FiniteList([F(1, 2), F(1, 2), F(1)]), ConstantRepeat(F(0), INF))
        out = check_arveson(self.X, d)
        assert out.verdict == "Yes"
        target = QC(F(2), F(0))
        got = sum((QC(F(c), F(0)) * v for c, v in zip(out.certificate["c"], self.X)),
                  QC(F(0), F(0)))
        dev = out.certificate["deviation_sum"]
        assert dev == got


class TestTraceSet:
    def test_point(self):
        out = classify_trace_set([(0.0, seq(Geometric(F(1, 2), F(1, 2))))])
        assert out.kind == "Point"
        assert abs(out.value - 1.0) == 0.0

    def test_line(self):
        up = (math.pi / 2, seq(ConstantRepeat(F(1), INF)))
        down = (-math.pi / 2, seq(ConstantRepeat(F(1), INF)))
        out = classify_trace_set([up, down])
        assert out.kind == "Line"

    def test_plane(self):
        rays = [(2 * math.pi * k / 3, seq(ConstantRepeat(F(1), INF))) for k in range(3)]
        assert classify_trace_set(rays).kind == "Plane"

    def test_empty(self):
        out = classify_trace_set([(math.pi / 2, seq(ConstantRepeat(F(1), INF)))])
        assert out.kind == "Empty"

    def test_global_rotation_invariance(self):
        for alpha in (0.3, 1.1, 2.7):
            line = classify_trace_set(
                [(math.pi / 2 + alpha, seq(ConstantRepeat(F(1), INF))),
                 (-math.pi / 2 + alpha, seq(ConstantRepeat(F(1), INF)))])
            assert line.kind == "Line"
            plane = classify_trace_set(
                [(2 * math.pi * k / 3 + alpha, seq(ConstantRepeat(F(1), INF)))
                 for k in range(3)])
            assert plane.kind == "Plane"
            pt = classify_trace_set([(alpha, seq(Geometric(F(1, 2), F(1, 2))))])
            assert pt.kind == "Point"
            assert abs(pt.value - cmath.exp(1j * alpha)) <= 1e-12

    def test_mixed_summable_rays_ignored(self):
        rays = [(0.0, seq(ConstantRepeat(F(1), INF))),
                (math.pi, seq(ConstantRepeat(F(1), INF))),
                (math.pi / 3, seq(Geometric(F(1), F(1, 3))))]
        assert classify_trace_set(rays).kind == "Line"


def random_projection(n, rank, seed):
    u = haar_unitary(n, seed=seed).data
    p = u[:, :rank] @ u[:, :rank].conj().T
    return DenseMatrix(p)


class TestCodimension:
    def test_diagonal_case(self):
        p = DenseMatrix.diagonal([1, 1, 0, 0])
        q = DenseMatrix.diagonal([1, 0, 0, 0])
        assert essential_codimension_finite(p, q) == 1
        assert essential_codimension_finite(p, p) == 0

    def test_rotation_invariance(self):
        p = random_projection(6, 1, seed=5)
        q = DenseMatrix.diagonal([1, 0, 0, 0, 0, 0])
        assert essential_codimension_finite(p, q) == 0

    def test_kadison_identity_hand_case(self):
        p = DenseMatrix.from_rows([[0.5, 0.5], [0.5, 0.5]])
        rep = verify_kadison_codimension_identity(p)
        assert rep.ok
        assert rep.lhs == -1.0 and rep.rhs == -1.0

    def test_kadison_identity_diagonal(self):
        rep = verify_kadison_codimension_identity(DenseMatrix.diagonal([1, 0]))
        assert rep.ok and rep.lhs == 0.0

    def test_kadison_identity_random(self):
        for k in range(200):
            n = 2 + k % 11
            rank = k % (n + 1)
            rep = verify_kadison_codimension_identity(random_projection(n, rank, seed=k))
            assert rep.residual <= 1e-9, (k, rep.residual)

    def test_normal_identity_diagonal(self):
        n = DenseMatrix.diagonal([1 + 1j, 2, 2, -1])
        rep = verify_normal_codimension_identity(n, n)
        assert rep.ok and abs(rep.lhs) <= 1e-12

    def test_normal_identity_rank_move(self):
        u = haar_unitary(4, seed=13).data
        n = DenseMatrix(u @ np.diag([0, 0, 1, 1]) @ u.conj().T)
        n_prime = DenseMatrix.diagonal([0, 1, 1, 1])
        rep = verify_normal_codimension_identity(n, n_prime)
        assert rep.ok
        assert abs(rep.lhs - (np.trace(n.data) - 3)) <= 1e-10

    def test_normal_identity_random_thousand(self):
        eigsets = [np.array([0, 1, 1j, 1 + 1j]), np.array([2, -1, 0.5j, 2]),
                   np.array([0, 0, 3, -2j])]
        worst = 0.0
        for k in range(1000):
            base = eigsets[k % len(eigsets)]
            perm = rng.permutation(4)
            u = haar_unitary(4, seed=10_000 + k).data
            n = DenseMatrix(u @ np.diag(base) @ u.conj().T)
            n_prime = DenseMatrix.diagonal(base[perm])
            rep = verify_normal_codimension_identity(n, n_prime)
            worst = max(worst, rep.residual)
        assert worst <= 1e-8

    def test_normal_identity_scaling(self):
        u = haar_unitary(4, seed=29).data
        base = u @ np.diag([0, 1j, 1j, 2]) @ u.conj().T
        for c in (1.0, 2.5):
            rep = verify_normal_codimension_identity(
                DenseMatrix(c * base), DenseMatrix.diagonal([0, 0, 2 * c, 1j * c]))
            assert rep.ok
            assert abs(rep.lhs - c * (np.trace(base) - (2 + 1j))) <= 1e-8
