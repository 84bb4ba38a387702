"""Dense real Clifford algebra Cl_n with anticommuting generators, e_j^2 = -1.

A multivector is stored as 2^n coefficients; coefficient index b is read as a
bitmask selecting the canonical blade e_{i1}...e_{ir} with i1 < ... < ir
(0-based axes).  Blade products are signed by the standard transposition-count
algorithm plus one sign flip per annihilated generator pair, which makes every
product bit-reproducible.

Module-level helpers (`gp`, `reversion_coeffs`) operate on raw coefficient
arrays of shape (..., 2^n) so that batched kernel and quadrature code can stay
vectorised; the `MultiVector` class wraps single elements.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, SingularPoint

MAX_DIM = 8


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    a = np.array(a, dtype=np.int64, copy=True)
    out = np.zeros_like(a)
    while a.any():
        out += a & 1
        a >>= 1
    return out


@lru_cache(maxsize=None)
def _tables(n: int):
    """Blade index and sign tables: (xor, sign, grade, rev_sign) for Cl_n."""
    if not 1 <= n <= MAX_DIM:
        raise DimensionMismatch(f"algebra dimension must be in [1, {MAX_DIM}], got {n}")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    xor = idx[:, None] ^ idx[None, :]
    # Transpositions needed to sort e_A e_B into canonical order: for every
    # generator of A, count the generators of B strictly below it.
    swaps = np.zeros((dim, dim), dtype=np.int64)
    a = idx[:, None] >> 1
    b = idx[None, :]
    while a.any():
        swaps = swaps + _popcount(a & b)
        a = a >> 1
    swaps = swaps + _popcount(idx[:, None] & idx[None, :])  # e_j^2 = -1 per pair
    sign = np.where(swaps & 1, -1.0, 1.0)
    grade = _popcount(idx)
    rev = np.where((grade * (grade - 1) // 2) & 1, -1.0, 1.0)
    xor.setflags(write=False)
    sign.setflags(write=False)
    grade.setflags(write=False)
    rev.setflags(write=False)
    return xor, sign, grade, rev


def gp(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Geometric product on coefficient arrays of shape (..., 2^n)."""
    xor, sign, _, _ = _tables(n)
    dim = 1 << n
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=float)
    for i in range(dim):
        ai = a[..., i]
        if a.ndim == 1 and ai == 0.0:
            continue
        out[..., xor[i]] += (sign[i] * ai[..., None]) * b
    return out


def reversion_coeffs(a: np.ndarray, n: int) -> np.ndarray:
    """Reversion on coefficient arrays: grade r picks up (-1)^(r(r-1)/2)."""
    _, _, _, rev = _tables(n)
    return np.asarray(a, dtype=float) * rev


def grades(n: int) -> np.ndarray:
    """Grade of each coefficient slot of Cl_n."""
    return _tables(n)[2]


class MultiVector:
    """Element of Cl_n held as a dense length-2^n coefficient vector."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        _tables(n)
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (1 << n,):
            raise DimensionMismatch(
                f"Cl_{n} needs {1 << n} coefficients, got shape {coeffs.shape}"
            )
        self.n = n
        self.coeffs = coeffs.copy()

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "MultiVector":
        return cls(n, np.zeros(1 << n))

    @classmethod
    def scalar(cls, n: int, value: float) -> "MultiVector":
        c = np.zeros(1 << n)
        c[0] = value
        return cls(n, c)

    @classmethod
    def basis_vector(cls, n: int, axis: int) -> "MultiVector":
        if not 0 <= axis < n:
            raise DimensionMismatch(f"axis {axis} out of range for Cl_{n}")
        c = np.zeros(1 << n)
        c[1 << axis] = 1.0
        return cls(n, c)

    @classmethod
    def from_vector(cls, x) -> "MultiVector":
        x = np.asarray(x, dtype=float)
        n = x.shape[0]
        c = np.zeros(1 << n)
        for j in range(n):
            c[1 << j] = x[j]
        return cls(n, c)

    # -- parts -------------------------------------------------------------
    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def vector_part(self) -> np.ndarray:
        return np.array([self.coeffs[1 << j] for j in range(self.n)])

    def grade_projection(self, r: int) -> "MultiVector":
        mask = grades(self.n) == r
        c = np.where(mask, self.coeffs, 0.0)
        return MultiVector(self.n, c)

    def max_grade_coeff(self, exclude: int | None = None) -> float:
        """Largest |coefficient| outside the given grade (None: over all)."""
        g = grades(self.n)
        mask = np.ones_like(self.coeffs, dtype=bool)
        if exclude is not None:
            mask = g != exclude
        if not mask.any():
            return 0.0
        return float(np.max(np.abs(self.coeffs[mask])))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiVector"):
        if self.n != other.n:
            raise DimensionMismatch(f"Cl_{self.n} vs Cl_{other.n}")

    def __add__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.n, self.coeffs + other.coeffs)
        return self + MultiVector.scalar(self.n, float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.n, self.coeffs - other.coeffs)
        return self - MultiVector.scalar(self.n, float(other))

    def __rsub__(self, other):
        return MultiVector.scalar(self.n, float(other)) - self

    def __neg__(self):
        return MultiVector(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.n, gp(self.coeffs, other.coeffs, self.n))
        return MultiVector(self.n, self.coeffs * float(other))

    def __rmul__(self, other):
        if isinstance(other, MultiVector):  # pragma: no cover - dispatched to __mul__
            return other.__mul__(self)
        return MultiVector(self.n, float(other) * self.coeffs)

    def __truediv__(self, other):
        return MultiVector(self.n, self.coeffs / float(other))

    def reversion(self) -> "MultiVector":
        return MultiVector(self.n, reversion_coeffs(self.coeffs, self.n))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self):
        nz = [(int(i), float(c)) for i, c in enumerate(self.coeffs) if c != 0.0]
        return f"MultiVector(n={self.n}, {nz or 0})"


# -- spec-level operations ---------------------------------------------------

def geometric_product(a: MultiVector, b: MultiVector) -> MultiVector:
    return a * b


def reversion(a: MultiVector) -> MultiVector:
    return a.reversion()


def norm(a: MultiVector) -> float:
    return a.norm()


def vector_inverse(x) -> np.ndarray:
    """Inverse of a nonzero vector: -x / |x|^2 (then x * inv = 1)."""
    x = np.asarray(x, dtype=float)
    s = float(np.dot(x, x))
    if s == 0.0:
        raise SingularPoint("zero vector has no inverse")
    return -x / s


def reflect_coords(x, axes) -> np.ndarray:
    """Flip the sign of the listed coordinate axes (0-based); an involution."""
    x = np.asarray(x, dtype=float).copy()
    for a in axes:
        if not 0 <= a < x.shape[-1]:
            raise DimensionMismatch(f"axis {a} out of range for dimension {x.shape[-1]}")
        x[..., a] = -x[..., a]
    return x


def versor_inverse(q: MultiVector, tol: float = 1e-10) -> MultiVector:
    """Inverse of a product of vectors via q~q = scalar; raises if singular."""
    qq = q * q.reversion()
    s = qq.scalar_part
    if abs(s) <= tol * max(1.0, q.norm() ** 2):
        raise SingularPoint("element is not invertible (q~q scalar vanishes)")
    if qq.max_grade_coeff(exclude=0) > tol * max(1.0, abs(s)):
        raise SingularPoint("element is not a versor (q~q is not scalar)")
    return q.reversion() / s


def blade_label(index: int) -> str:
    """Human-readable blade name for a coefficient index, e.g. 'e1e3'."""
    if index == 0:
        return "1"
    return "".join(f"e{j + 1}" for j in range(index.bit_length()) if index >> j & 1)
