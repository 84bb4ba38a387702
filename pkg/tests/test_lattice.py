import numpy as np
import pytest

from flatkernels.errors import ConfigError, DimensionMismatch
from flatkernels.lattice import (
    BundleCharacter,
    Lattice,
    ManifoldSpec,
    apply_group_element,
    canonical_rep,
    char_sign,
    lattice_point,
    moebius_sgn,
    recover_point,
    shell,
)


class TestLattice:
    def test_dependent_basis_rejected(self):
        with pytest.raises(ValueError):
            Lattice([[1.0, 0.0], [2.0, 0.0]])

    def test_rank_bounds(self):
        with pytest.raises(DimensionMismatch):
            Lattice(np.zeros((0, 3)))
        with pytest.raises(DimensionMismatch):
            Lattice(np.ones((4, 3)))

    def test_sigma_min_unit(self):
        L = Lattice(np.eye(3)[:2])
        assert L.sigma_min == pytest.approx(1.0)


class TestLatticePoint:
    def test_zero(self):
        L = Lattice(np.eye(3)[:2])
        assert np.array_equal(lattice_point(L, [0, 0]), np.zeros(3))

    def test_integer_combination(self):
        L = Lattice(np.eye(3)[:2])
        assert np.array_equal(lattice_point(L, [2, -1]), [2.0, -1.0, 0.0])

    def test_linearity(self):
        rng = np.random.default_rng(0)
        L = Lattice(rng.normal(size=(2, 4)))
        m1, m2 = rng.integers(-4, 5, size=2), rng.integers(-4, 5, size=2)
        assert np.allclose(
            lattice_point(L, m1 + m2), lattice_point(L, m1) + lattice_point(L, m2)
        )

    def test_length_mismatch(self):
        L = Lattice(np.eye(3)[:2])
        with pytest.raises(DimensionMismatch):
            lattice_point(L, [1, 2, 3])


class TestShell:
    def test_radius_zero(self):
        L = Lattice(np.eye(3)[:2])
        assert shell(L, 0).tolist() == [[0, 0]]

    def test_counts(self):
        L2 = Lattice(np.eye(3)[:2])
        assert shell(L2, 1).shape[0] == 8
        L3 = Lattice(np.eye(4)[:3])
        assert shell(L3, 2).shape[0] == 5**3 - 3**3

    def test_partition_and_order(self):
        L = Lattice(np.eye(3)[:2])
        shells = [shell(L, r) for r in range(4)]
        stacked = np.concatenate(shells)
        assert stacked.shape[0] == 7**2
        assert np.unique(stacked, axis=0).shape[0] == stacked.shape[0]
        for s in shells:  # lexicographic within each shell
            assert np.array_equal(s, s[np.lexsort(s.T[::-1])])


class TestCharSign:
    def test_prefix_parity_sign(self):
        assert char_sign(BundleCharacter(1), [3, 2]) == -1.0

    def test_trivial(self):
        assert char_sign(BundleCharacter(0), [7, -5, 2]) == 1.0

    def test_parity_of_prefix(self):
        assert char_sign(BundleCharacter(2), [1, 1, 5]) == 1.0

    def test_group_character(self):
        rng = np.random.default_rng(1)
        ch = BundleCharacter(2)
        for _ in range(100):
            a, b = rng.integers(-6, 7, size=3), rng.integers(-6, 7, size=3)
            assert char_sign(ch, a + b) == char_sign(ch, a) * char_sign(ch, b)


class TestMoebiusSgn:
    def test_zero_vector(self):
        assert moebius_sgn([0, 0], "AllEven") == 1.0
        assert moebius_sgn([0, 0], "SumParity") == 1.0

    def test_mixed(self):
        assert moebius_sgn([1, 2], "AllEven") == -1.0
        assert moebius_sgn([1, 2], "SumParity") == -1.0

    def test_distinguishing_case(self):
        assert moebius_sgn([1, 1], "AllEven") == -1.0
        assert moebius_sgn([1, 1], "SumParity") == 1.0

    def test_sumparity_is_character_alleven_is_not(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            a, b = rng.integers(-6, 7, size=2), rng.integers(-6, 7, size=2)
            assert moebius_sgn(a + b, "SumParity") == moebius_sgn(a, "SumParity") * moebius_sgn(
                b, "SumParity"
            )
        w1, w2 = np.array([1, 0]), np.array([0, 1])
        assert moebius_sgn(w1 + w2, "AllEven") != moebius_sgn(w1, "AllEven") * moebius_sgn(
            w2, "AllEven"
        )


class TestManifoldSpec:
    def test_kind_constraints(self):
        L1 = Lattice([[1.0, 0.0, 0.0]])
        with pytest.raises(ConfigError):
            ManifoldSpec("Torus", 3, L1)  # k != n
        with pytest.raises(ConfigError):
            ManifoldSpec("Cylinder", 3, Lattice(np.eye(3)))  # k = n
        with pytest.raises(ConfigError):
            ManifoldSpec("Projective", 3, L1, p=1)  # p < k+1
        with pytest.raises(ConfigError):
            ManifoldSpec("RealProjective", 3, L1, p=2)  # lattice forbidden
        with pytest.raises(ConfigError):
            ManifoldSpec("MoebiusStrip", 3, L1)  # sign_variant missing

    def test_klein_normalization(self):
        with pytest.raises(ConfigError):
            ManifoldSpec("KleinBottle", 3, Lattice([[2.0, 0.0, 0.0]]))
        ok = ManifoldSpec("KleinBottle", 4, Lattice([[1.5, 0, 0, 0], [0, 1.0, 0, 0]]))
        assert ok.k == 2

    def test_reduced_basis_required_for_pin_kinds(self):
        skew = Lattice([[1.0, 0.0, 0.5]])
        with pytest.raises(ConfigError):
            ManifoldSpec("Projective", 3, skew, p=2)

    def test_json_roundtrip(self):
        M = ManifoldSpec(
            "Projective",
            3,
            Lattice([[1.0, 0, 0]]),
            p=2,
            bundle=BundleCharacter(1, negate_fiber=True),
        )
        M2 = ManifoldSpec.from_dict(M.to_dict())
        assert M2.kind == M.kind and M2.p == M.p
        assert M2.bundle == M.bundle
        assert np.array_equal(M2.lattice.basis, M.lattice.basis)

    def test_from_dict_errors(self):
        with pytest.raises(ConfigError):
            ManifoldSpec.from_dict({"kind": "Cylinder"})
        with pytest.raises(ConfigError):
            ManifoldSpec.from_dict({"kind": "Nonsense", "n": 3})
        with pytest.raises(ConfigError):
            ManifoldSpec.from_dict(
                {"kind": "Cylinder", "n": 3, "k": 2, "basis": [[1.0, 0.0, 0.0]]}
            )


class TestCanonicalRep:
    def test_already_reduced(self):
        M = ManifoldSpec("Cylinder", 2, Lattice([[1.0, 0.0]]))
        x = np.array([0.25, 3.0])
        rep, g = canonical_rep(M, x)
        assert np.allclose(rep, x)
        assert g.m == (0,) and not g.flip

    def test_cylinder_example(self):
        M = ManifoldSpec("Cylinder", 2, Lattice([[1.0, 0.0]]))
        rep, g = canonical_rep(M, [2.5, 1.0])
        assert np.allclose(rep, [0.5, 1.0])
        assert g.m == (-2,)

    def test_moebius_example(self):
        M = ManifoldSpec("MoebiusStrip", 2, Lattice([[1.0, 0.0]]), sign_variant="SumParity")
        rep, g = canonical_rep(M, [1.25, 0.3])
        assert np.allclose(rep, [0.25, -0.3])
        assert g.m == (-1,)
        assert np.allclose(apply_group_element(M, g, [1.25, 0.3]), rep)

    @pytest.mark.parametrize(
        "spec",
        [
            ManifoldSpec("Cylinder", 3, Lattice([[1.0, 0, 0]])),
            ManifoldSpec("Torus", 2, Lattice(np.eye(2))),
            ManifoldSpec("Projective", 3, Lattice([[1.0, 0, 0]]), p=3),
            ManifoldSpec("RealProjective", 4, p=3),
            ManifoldSpec("MoebiusStrip", 3, Lattice([[1.0, 0, 0]]), sign_variant="AllEven"),
            ManifoldSpec("KleinBottle", 4, Lattice([[1.0, 0, 0, 0]])),
            ManifoldSpec("KleinBottle", 5, Lattice([[0.8, 0, 0, 0, 0], [0, 1.0, 0, 0, 0]])),
        ],
    )
    def test_roundtrip_and_idempotence(self, spec):
        rng = np.random.default_rng(hash(spec.kind) % 2**32)
        for _ in range(25):
            x = rng.normal(size=spec.n) * 3.0
            rep, g = canonical_rep(spec, x)
            assert np.allclose(recover_point(spec, g, rep), x, atol=1e-12)
            rep2, _ = canonical_rep(spec, rep)
            assert np.allclose(rep2, rep, atol=1e-12)
            if spec.lattice is not None and spec.kind != "KleinBottle":
                t = spec.lattice.coords(rep) if spec.kind in ("Cylinder", "Torus") else None
                if t is not None:
                    assert np.all(t >= -1e-12) and np.all(t < 1.0)

    def test_projective_block_sign(self):
        M = ManifoldSpec("Projective", 3, Lattice([[1.0, 0, 0]]), p=3)
        rep, g = canonical_rep(M, np.array([0.3, -0.4, 0.9]))
        assert rep[1] > 0 and g.flip  # first nonzero block entry made positive
        assert np.allclose(rep[2], -0.9)  # whole block flips together
