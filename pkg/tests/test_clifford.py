import numpy as np
import pytest

from flatkernels.clifford import (
    MultiVector,
    DimensionMismatch,
    geometric_product,
    norm,
    reflect_coords,
    reversion,
    vector_inverse,
    versor_inverse,
)
from flatkernels.errors import SingularPoint


def mv_scalar(n, v):
    return MultiVector.scalar(n, v)


def e(n, j):
    return MultiVector.basis_vector(n, j)


class TestGeometricProduct:
    def test_generator_square(self):
        sq = e(3, 0) * e(3, 0)
        assert sq.scalar_part == -1.0
        assert sq.max_grade_coeff(exclude=0) == 0.0

    def test_canonical_blade(self):
        prod = e(3, 0) * e(3, 1)
        assert prod.coeffs[0b11] == 1.0
        assert np.count_nonzero(prod.coeffs) == 1

    def test_vector_square_is_minus_norm(self):
        x = MultiVector.from_vector([1.0, 1.0])
        sq = x * x
        assert sq.scalar_part == -2.0
        assert sq.max_grade_coeff(exclude=0) == 0.0

    def test_anticommutation_exact(self):
        for n in (2, 3, 4, 5):
            for i in range(n):
                for j in range(n):
                    s = e(n, i) * e(n, j) + e(n, j) * e(n, i)
                    expect = -2.0 if i == j else 0.0
                    assert (s - mv_scalar(n, expect)).norm() == 0.0

    def test_associativity_random(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(300):
            n = int(rng.integers(2, 6))
            a, b, c = (MultiVector(n, rng.normal(size=1 << n)) for _ in range(3))
            dev = ((a * b) * c - a * (b * c)).norm()
            worst = max(worst, dev / max(1.0, a.norm() * b.norm() * c.norm()))
        assert worst <= 1e-12

    def test_random_vector_square(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            x = rng.normal(size=n)
            sq = MultiVector.from_vector(x) * MultiVector.from_vector(x)
            assert abs(sq.scalar_part + x @ x) <= 1e-12 * max(1.0, x @ x)
            assert sq.max_grade_coeff(exclude=0) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            geometric_product(e(2, 0), e(3, 0))

    def test_bilinear(self):
        rng = np.random.default_rng(3)
        a, b, c = (MultiVector(3, rng.normal(size=8)) for _ in range(3))
        lhs = a * (b * 2.0 + c * -3.5)
        rhs = (a * b) * 2.0 + (a * c) * -3.5
        assert (lhs - rhs).norm() <= 1e-12


class TestReversion:
    def test_bivector_sign(self):
        b = e(3, 0) * e(3, 1)
        assert (reversion(b) + b).norm() == 0.0

    def test_scalar_fixed(self):
        assert reversion(mv_scalar(2, 5.0)).scalar_part == 5.0

    def test_trivector_sign(self):
        t = e(3, 0) * e(3, 1) * e(3, 2)
        assert (reversion(t) + t).norm() == 0.0

    def test_antiautomorphism(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            a = MultiVector(n, rng.normal(size=1 << n))
            b = MultiVector(n, rng.normal(size=1 << n))
            dev = (reversion(a * b) - reversion(b) * reversion(a)).norm()
            assert dev <= 1e-12 * max(1.0, a.norm() * b.norm())


class TestVectorInverse:
    def test_basis_vector(self):
        inv = vector_inverse([1.0, 0.0, 0.0])
        assert np.allclose(inv, [-1.0, 0.0, 0.0])
        prod = MultiVector.from_vector([1.0, 0.0, 0.0]) * MultiVector.from_vector(inv)
        assert abs(prod.scalar_part - 1.0) == 0.0

    def test_scaling(self):
        assert np.allclose(vector_inverse([0.0, 2.0]), [0.0, -0.5])

    def test_components(self):
        assert np.allclose(vector_inverse([3.0, 4.0, 0.0]), [-3.0 / 25, -4.0 / 25, 0.0])

    def test_zero_vector(self):
        with pytest.raises(SingularPoint):
            vector_inverse([0.0, 0.0])

    def test_random_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            x = rng.normal(size=n)
            prod = MultiVector.from_vector(x) * MultiVector.from_vector(vector_inverse(x))
            assert abs(prod.scalar_part - 1.0) <= 1e-12
            assert prod.max_grade_coeff(exclude=0) <= 1e-12


class TestNorm:
    def test_two_units(self):
        assert norm(MultiVector.from_vector([1.0, 1.0])) == pytest.approx(np.sqrt(2.0))

    def test_zero(self):
        assert norm(MultiVector.zero(3)) == 0.0

    def test_mixed_grades(self):
        m = mv_scalar(2, 1.0) + e(2, 0) * e(2, 1)
        assert norm(m) == pytest.approx(np.sqrt(2.0))

    def test_agrees_with_vector_norm(self):
        x = np.array([0.3, -0.4, 1.2])
        assert norm(MultiVector.from_vector(x)) == pytest.approx(np.linalg.norm(x))


class TestReflectCoords:
    def test_empty_set(self):
        x = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(reflect_coords(x, []), x)

    def test_single_axis(self):
        assert np.allclose(reflect_coords([1.0, 2.0, 3.0], [2]), [1.0, 2.0, -3.0])

    def test_involution(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = rng.normal(size=4)
            axes = [int(a) for a in rng.choice(4, size=2, replace=False)]
            assert np.array_equal(reflect_coords(reflect_coords(x, axes), axes), x)

    def test_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            reflect_coords([1.0, 2.0], [5])


class TestVersorInverse:
    def test_vector_product_inverse(self):
        rng = np.random.default_rng(4)
        u = MultiVector.from_vector(rng.normal(size=3))
        v = MultiVector.from_vector(rng.normal(size=3))
        q = u * v
        qi = versor_inverse(q)
        assert ((q * qi) - mv_scalar(3, 1.0)).norm() <= 1e-12

    def test_singular(self):
        with pytest.raises(SingularPoint):
            versor_inverse(MultiVector.zero(3))
