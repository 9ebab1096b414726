import numpy as np
import pytest

from cwcheeger.complex import Cochain, augment_boundary, check_orientability, reorient, zoo
from cwcheeger.errors import InapplicableError
from cwcheeger.linalg import rational_rank, zero_threshold
from cwcheeger.spectral import (
    betti,
    hodge_decompose,
    laplacian,
    nontrivial_basis,
    rayleigh_quotient,
    smallest_nontrivial_eigenvalue,
    spectrum,
)

from conftest import ZOO_CASES, all_zoo, case_id

ZOO = all_zoo()


class TestLaplacian:
    def test_p3_lower(self, p3):
        np.testing.assert_array_equal(laplacian(p3, 1, "lower"), [[2, -1], [-1, 2]])

    def test_p3_graph_laplacian(self, p3):
        np.testing.assert_array_equal(laplacian(p3, 0, "upper"), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    def test_tetra_minus_face(self, tmf):
        res = check_orientability(tmf)
        cx = reorient(tmf, 2, res.orientation)
        np.testing.assert_array_equal(laplacian(cx, 2, "lower"), 4 * np.eye(3) - np.ones((3, 3)))

    def test_reduced_lower_at_zero(self, p3):
        np.testing.assert_array_equal(laplacian(p3, 0, "lower", reduced=True), np.ones((3, 3)))
        with pytest.raises(ValueError):
            laplacian(p3, 0, "lower")

    def test_upper_at_top_is_zero(self, tmf):
        assert not laplacian(tmf, 2, "upper").any()

    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_psd(self, name, cx):
        for n in range(cx.dim + 1):
            for kind in ("upper", "full"):
                lap = laplacian(cx, n, kind)
                assert spectrum(cx, n, kind)[0] >= -1e-9 * max(1.0, np.linalg.norm(lap))


class TestSmallestNontrivial:
    def test_p3(self, p3):
        rep = smallest_nontrivial_eigenvalue(p3, 1)
        assert rep.value == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(rep.spectrum, [1, 3], atol=1e-12)
        np.testing.assert_allclose(np.abs(rep.vector.values), [2**-0.5] * 2, atol=1e-12)
        assert rep.trivial_dim == 0

    def test_cycle3_zero(self):
        rep = smallest_nontrivial_eigenvalue(zoo("cycle", 3), 1)
        assert rep.is_zero

    def test_tetra_minus_face(self, tmf):
        rep = smallest_nontrivial_eigenvalue(tmf, 2)
        assert rep.value == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(rep.spectrum, [1, 4, 4], atol=1e-12)

    def test_lower_dimension_projects_boundaries(self):
        # filled triangle, n=1: B_1 is spanned by the face boundary
        cx = zoo("filled_simplex", 2)
        rep = smallest_nontrivial_eigenvalue(cx, 1)
        assert rep.trivial_dim == 1
        assert rep.value == pytest.approx(3.0, abs=1e-12)
        assert abs(rep.vector.values @ cx.inc(2)[:, 0]) < 1e-12

    def test_empty_restriction(self):
        from cwcheeger.complex import CWComplex

        cx = CWComplex((1, 1, 1), (np.zeros((1, 1), dtype=int), np.array([[2]])))
        with pytest.raises(InapplicableError):
            smallest_nontrivial_eigenvalue(cx, 1)

    def test_upper_direction(self, p3):
        # (B^0)^perp is everything unreduced; with reduced it drops constants
        assert smallest_nontrivial_eigenvalue(p3, 0, "upper").is_zero
        rep = smallest_nontrivial_eigenvalue(p3, 0, "upper", reduced=True)
        assert rep.value == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_rayleigh_consistency(self, name, cx):
        rng = np.random.default_rng(abs(hash(name)) % 2**32)
        for n in range(1, cx.dim + 1):
            try:
                rep = smallest_nontrivial_eigenvalue(cx, n)
            except InapplicableError:
                continue
            lap = laplacian(cx, n, "lower")
            assert np.linalg.norm(rep.vector.values) == pytest.approx(1.0, abs=1e-12)
            assert rayleigh_quotient(lap, rep.vector.values) == pytest.approx(rep.value, abs=1e-8)
            Q = nontrivial_basis(cx, n)
            coeffs = rng.normal(size=(Q.shape[1], 200))
            for f in (Q @ coeffs).T:
                assert rayleigh_quotient(lap, f) >= rep.value - 1e-8


class TestSpectralIdentities:
    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_nonzero_spectra_coincide(self, name, cx):
        for n in range(cx.dim):
            up = spectrum(cx, n, "upper")
            low = spectrum(cx, n + 1, "lower")
            thr = max(zero_threshold(laplacian(cx, n, "upper")), zero_threshold(laplacian(cx, n + 1, "lower")))
            a, b = up[up > thr], low[low > thr]
            assert len(a) == len(b)
            np.testing.assert_allclose(a, b, atol=1e-8)

    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_kernel_counts_betti(self, name, cx):
        for n in range(cx.dim + 1):
            lap = laplacian(cx, n, "full")
            zeros = int(np.sum(spectrum(cx, n, "full") < zero_threshold(lap)))
            assert zeros == betti(cx, n, "Q")

    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_adjoint_pairing(self, name, cx):
        rng = np.random.default_rng(7)
        for n in range(cx.dim):
            B = cx.inc(n + 1).astype(float)
            f = rng.normal(size=cx.cell_counts[n])
            g = rng.normal(size=cx.cell_counts[n + 1])
            # <delta f, g> = <f, partial g>
            assert (B.T @ f) @ g == pytest.approx(f @ (B @ g), abs=1e-10)


class TestHodge:
    def test_cycle3_harmonic(self):
        cx = zoo("cycle", 3)
        res = check_orientability(cx)
        f = np.array(res.orientation.signs, dtype=float)
        split = hodge_decompose(cx, 1, f)
        np.testing.assert_allclose(split.harmonic.values, f, atol=1e-12)
        assert not np.any(np.abs(split.exact.values) > 1e-12)
        assert split.coexact_dim == 0

    def test_zero(self, tmf):
        split = hodge_decompose(tmf, 1, np.zeros(6))
        for part in (split.exact, split.harmonic, split.coexact):
            assert not part.values.any()

    def test_boundary_is_coexact(self):
        cx = zoo("filled_simplex", 2)
        f = cx.inc(2)[:, 0].astype(float)
        split = hodge_decompose(cx, 1, Cochain(1, "R", f))
        np.testing.assert_allclose(split.coexact.values, f, atol=1e-12)

    def test_length_mismatch(self, p3):
        with pytest.raises(ValueError):
            hodge_decompose(p3, 1, [1.0])

    @pytest.mark.parametrize("name,cx", ZOO, ids=[z[0] for z in ZOO])
    def test_orthogonal_split(self, name, cx):
        rng = np.random.default_rng(1)
        for n in range(cx.dim + 1):
            f = rng.normal(size=cx.cell_counts[n])
            s = hodge_decompose(cx, n, f)
            parts = [s.exact.values, s.harmonic.values, s.coexact.values]
            np.testing.assert_allclose(sum(parts), f, atol=1e-9)
            for i in range(3):
                for j in range(i + 1, 3):
                    assert abs(parts[i] @ parts[j]) <= 1e-9
            # harmonic part is killed by the full Laplacian
            assert np.linalg.norm(laplacian(cx, n, "full") @ s.harmonic.values) <= 1e-8
            exact_rank = rational_rank(cx.inc(n).T.tolist()) if n >= 1 else 0
            coexact_rank = rational_rank(cx.inc(n + 1).tolist()) if n < cx.dim else 0
            assert (s.exact_dim, s.coexact_dim) == (exact_rank, coexact_rank)
            assert s.exact_dim + s.harmonic_dim + s.coexact_dim == cx.cell_counts[n]
            assert s.harmonic_dim == betti(cx, n, "Q")


class TestBetti:
    def test_cycle3(self):
        cx = zoo("cycle", 3)
        for field in ("F2", "Q"):
            assert betti(cx, 0, field) == 1
            assert betti(cx, 1, field) == 1
            assert betti(cx, 0, field, reduced=True) == 0

    def test_tetrahedron(self):
        cx = zoo("simplex_boundary", 3)
        assert betti(cx, 2, "F2") == betti(cx, 2, "Q") == 1

    def test_rp2(self):
        cx = zoo("rp2_6")
        assert betti(cx, 2, "F2") == 1
        assert betti(cx, 2, "Q") == 0
        assert betti(cx, 1, "F2") == 1
        assert betti(cx, 1, "Q") == 0

    def test_surfaces(self):
        assert [betti(zoo("torus_7"), n, "Q") for n in range(3)] == [1, 2, 1]
        assert [betti(zoo("klein_8"), n, "Q") for n in range(3)] == [1, 1, 0]
        assert [betti(zoo("klein_8"), n, "F2") for n in range(3)] == [1, 2, 1]

    def test_augmentation_preserves_homology(self, tmf):
        aug = augment_boundary(tmf).augmented
        for n in range(3):
            assert betti(aug, n, "Q") == betti(tmf, n, "Q")

    def test_range(self, p3):
        with pytest.raises(ValueError):
            betti(p3, 2)
