import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from entwit.criteria import ppt_check
from entwit.linalg import max_entangled_projector, partial_transpose
from entwit.maps import (
    LinearMap,
    apply,
    apply_id_tensor,
    apply_tensor_id,
    choi_matrix,
    detection_value,
    dual,
    from_witness,
    identity_map,
    indecomposability_certificate,
    positivity_check,
    tang_apply,
    tang_dual,
    tang_map,
    to_witness,
    transpose_map,
)
from entwit.states import horodecki_2x4, random_density, upb_tiles_bes, werner_2x2
from entwit.witness import Witness, optimize_witness, realignment_witness

U_FIG = 0.849


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, d):
    G = random_complex(rng, d, d)
    return (G + G.conj().T) / 2


def random_map(rng, a, b):
    return from_witness(Witness(random_hermitian(rng, a * b), (a, b)))


def unit(d, i, j):
    E = np.zeros((d, d))
    E[i, j] = 1
    return E


def id_tensor_loops(fn, rho, m, n, out):
    """sum_xy |x><y| (x) L(rho_xy), rho_xy the n x n blocks."""
    res = np.zeros((m * out, m * out), dtype=complex)
    for x in range(m):
        for y in range(m):
            res[x * out:(x + 1) * out, y * out:(y + 1) * out] = fn(rho[x * n:(x + 1) * n, y * n:(y + 1) * n])
    return res


def tensor_id_loops(fn, rho, m, n, out):
    """sum_kl L(rho^(kl)) (x) |k><l| with rho^(kl)_ij = rho[i n + k, j n + l]."""
    res = np.zeros((out * n, out * n), dtype=complex)
    for k in range(n):
        for l in range(n):
            sub = rho[k::n, l::n]
            res += np.kron(fn(sub), unit(n, k, l))
    return res


class TestLinearMap:
    def test_rejects_non_hermiticity_preserving(self):
        B = np.zeros((2, 2, 2, 2))
        B[0, 1, 0, 0] = 1
        with pytest.raises(ValueError, match="Hermiticity"):
            LinearMap(B)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError, match="shape"):
            LinearMap(np.zeros((2, 3, 2, 2)))

    def test_apply_by_linearity(self):
        rng = np.random.default_rng(0)
        L = random_map(rng, 3, 2)
        X = random_complex(rng, 3, 3)
        oracle = sum(X[i, j] * L.blocks[i, j] for i in range(3) for j in range(3))
        assert_allclose(apply(L, X), oracle)
        assert_allclose(L(X), oracle)

    def test_identity_and_transpose(self):
        X = random_complex(np.random.default_rng(1), 3, 3)
        assert_allclose(apply(identity_map(3), X), X)
        assert_allclose(apply(transpose_map(3), X), X.T)


class TestJamiolkowski:
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_round_trips(self, a, b, seed):
        rng = np.random.default_rng(seed)
        W = Witness(random_hermitian(rng, a * b), (a, b))
        assert_array_equal(to_witness(from_witness(W)).mat, W.mat)
        L = random_map(rng, a, b)
        assert_array_equal(from_witness(to_witness(L)).blocks, L.blocks)

    def test_blocks_are_images_of_units(self):
        W = Witness(random_hermitian(np.random.default_rng(2), 6), (2, 3))
        L = from_witness(W)
        for i in range(2):
            for j in range(2):
                assert_allclose(apply(L, unit(2, i, j)), W.mat[i * 3:(i + 1) * 3, j * 3:(j + 1) * 3])

    def test_witness_is_map_on_entangled_projector(self):
        rng = np.random.default_rng(3)
        L = random_map(rng, 3, 2)
        P = 3 * max_entangled_projector(3)
        assert_allclose(apply_id_tensor(L, (P, (3, 3))), to_witness(L).mat, atol=1e-12)
        assert_allclose(choi_matrix(L), to_witness(L).mat / 3)


class TestApplication:
    @pytest.mark.parametrize("m,a,b", [(2, 2, 2), (2, 4, 2), (3, 3, 3), (3, 2, 4)])
    def test_id_tensor_matches_loops(self, m, a, b):
        rng = np.random.default_rng(m * 100 + a * 10 + b)
        L = random_map(rng, a, b)
        rho = random_density((m, a), rng)
        assert_allclose(apply_id_tensor(L, rho), id_tensor_loops(L, rho.mat, m, a, b), atol=1e-12)

    @pytest.mark.parametrize("n,a,b", [(2, 2, 2), (4, 2, 3), (3, 3, 3)])
    def test_tensor_id_matches_loops(self, n, a, b):
        rng = np.random.default_rng(n * 100 + a * 10 + b)
        L = random_map(rng, a, b)
        rho = random_density((a, n), rng)
        assert_allclose(apply_tensor_id(L, rho), tensor_id_loops(L, rho.mat, a, n, b), atol=1e-12)

    def test_dimension_checks(self):
        L = random_map(np.random.default_rng(4), 3, 2)
        with pytest.raises(ValueError):
            apply_id_tensor(L, werner_2x2(0))
        with pytest.raises(ValueError):
            apply_tensor_id(L, werner_2x2(0))

    def test_transpose_map_is_ppt(self):
        rho = random_density((3, 3), 5)
        det = detection_value(transpose_map(3), rho, side="A")
        assert det.lambda_min == pytest.approx(ppt_check(rho).min_eigenvalue, abs=1e-12)
        assert_allclose(det.operator_spectrum, np.linalg.eigvalsh(partial_transpose(rho.mat, (3, 3))), atol=1e-12)

    def test_identity_map_never_detects(self):
        assert not detection_value(identity_map(2), werner_2x2(-1)).entangled

    def test_report_f(self):
        det = detection_value(transpose_map(2), werner_2x2(-1))
        assert det.entangled and det.f == det.lambda_min < 0
        assert detection_value(transpose_map(2), werner_2x2(1)).f == 0

    def test_bad_side(self):
        with pytest.raises(ValueError):
            detection_value(transpose_map(2), werner_2x2(0), side="C")


class TestDual:
    @pytest.mark.parametrize("a,b", [(2, 2), (4, 2), (2, 3)])
    def test_adjoint_identity(self, a, b):
        """Tr(L(X)^H Y) = Tr(X^H L'(Y))."""
        rng = np.random.default_rng(a * 10 + b)
        L = random_map(rng, a, b)
        X, Y = random_complex(rng, a, a), random_complex(rng, b, b)
        lhs = np.trace(apply(L, X).conj().T @ Y)
        rhs = np.trace(X.conj().T @ apply(dual(L), Y))
        assert lhs == pytest.approx(rhs)

    def test_involution(self):
        L = random_map(np.random.default_rng(6), 3, 2)
        assert_array_equal(dual(dual(L)).blocks, L.blocks)

    def test_tang_dual_shape(self):
        L = tang_dual(U_FIG)
        assert (L.in_dim, L.out_dim) == (2, 4)


class TestTang:
    def test_matches_formula(self):
        rng = np.random.default_rng(7)
        L = tang_map(0.6, 0.05)
        for _ in range(5):
            X = random_complex(rng, 4, 4)
            assert_allclose(apply(L, X), tang_apply(X, 0.6, 0.05), atol=1e-12)

    def test_default_eps(self):
        assert_allclose(tang_map(U_FIG).blocks, tang_map(U_FIG, U_FIG**2 / 6).blocks)

    @pytest.mark.parametrize("u,eps", [(0, None), (1, None), (0.5, 0.0), (0.5, 0.05)])
    def test_parameter_bounds(self, u, eps):
        with pytest.raises(ValueError):
            tang_map(u, eps)

    def test_detects_horodecki(self):
        rho = horodecki_2x4(0.5)
        assert not ppt_check(rho).entangled
        assert detection_value(tang_map(U_FIG), rho).entangled

    def test_formula_has_non_positive_direction(self):
        """With x = (1, 0, t, u) the (2,2) output vanishes but the off-diagonal is -u t.

        A 2x2 matrix with a zero diagonal entry and a nonzero off-diagonal entry
        is indefinite, so the formula as written cannot be positive for any u, eps.
        """
        u, t = U_FIG, 0.7
        x = np.array([1, 0, t, u])
        out = tang_apply(np.outer(x, x), u, u * u / 6)
        assert out[1, 1] == pytest.approx(0, abs=1e-15)
        assert out[0, 1] == pytest.approx(-u * t)
        assert np.linalg.eigvalsh(out)[0] < 0

    @pytest.mark.xfail(strict=True, reason="the published formula is not positive; see test above")
    def test_positive(self):
        assert positivity_check(tang_map(U_FIG)).positive

    @pytest.mark.xfail(strict=True, reason="positivity of the published formula fails sampling")
    def test_dual_positive(self):
        assert positivity_check(tang_dual(U_FIG)).positive


class TestPositivity:
    def test_transpose_positive(self):
        assert positivity_check(transpose_map(3), 2000).positive

    def test_negated_identity_not_positive(self):
        L = LinearMap(-identity_map(2).blocks)
        rep = positivity_check(L, 100)
        assert not rep.positive and rep.min_eigenvalue == pytest.approx(-1)

    def test_block_positive_witness_gives_positive_map(self):
        W = optimize_witness(realignment_witness(upb_tiles_bes()), restarts=20)
        assert positivity_check(from_witness(W), 5000).positive


class TestIndecomposability:
    def test_upb_witness_map(self):
        """An optimised block-positive witness detects the PPT UPB state through its map."""
        rho = upb_tiles_bes()
        L = from_witness(optimize_witness(realignment_witness(rho), restarts=20))
        rep = indecomposability_certificate(L, rho, samples=5000)
        assert rep.indecomposable and bool(rep)
        assert rep.ppt_min_eigenvalue > -1e-10 and rep.lambda_min < 0

    def test_transpose_not_certified(self):
        rep = indecomposability_certificate(transpose_map(4), horodecki_2x4(0.3), side="B", samples=500)
        assert not rep.indecomposable

    def test_npt_state_not_certified(self):
        rep = indecomposability_certificate(transpose_map(2), werner_2x2(-1), samples=500)
        assert rep.lambda_min < 0 and not rep.indecomposable

    @pytest.mark.xfail(strict=True, reason="the published formula is not positive, so nothing is certified")
    def test_tang_on_horodecki(self):
        assert indecomposability_certificate(tang_map(U_FIG), horodecki_2x4(0.3)).indecomposable
