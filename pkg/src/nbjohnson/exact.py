"""Exact rational matrices.

Scalars are :class:`fractions.Fraction`.  A matrix is stored as an integer
numerator array together with one positive common denominator, always reduced
so that the gcd of the denominator and every numerator is 1.  Products go
through the cheapest integer kernel whose worst-case magnitude bound is known
to be exact:

* float64 BLAS when every partial sum is below 2**53,
* int64 when below 2**62,
* Python integers (``dtype=object``) otherwise.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


class DimensionError(ValueError):
    """Operands of a matrix operation have incompatible shapes."""


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max())


def _fit(arr: np.ndarray) -> np.ndarray:
    """Return ``arr`` as int64 when its magnitude allows, else as object."""
    if arr.dtype == object:
        if _maxabs(arr) < _INT64_SAFE:
            return arr.astype(np.int64)
        return arr
    return arr.astype(np.int64, copy=False)


def _widen(arr: np.ndarray, bound: int) -> np.ndarray:
    if bound >= _INT64_SAFE and arr.dtype != object:
        return arr.astype(object)
    return arr


def _gcd_all(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return reduce(math.gcd, (int(v) for v in arr.flat), 0)
    return int(np.gcd.reduce(np.abs(arr).ravel()))


def int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two integer arrays."""
    inner = a.shape[1] if a.ndim == 2 else a.shape[0]
    bound = max(inner, 1) * _maxabs(a) * _maxabs(b)
    if bound < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(prod).astype(np.int64)
    if bound < _INT64_SAFE:
        return a.astype(np.int64) @ b.astype(np.int64)
    return _fit(a.astype(object) @ b.astype(object))


class ExactMatrix:
    """Immutable square matrix over the rationals."""

    __slots__ = ("_num", "_den")

    def __init__(self, numerators, denominator: int = 1):
        num = np.array(numerators, dtype=object if _needs_object(numerators) else np.int64)
        if num.ndim != 2 or num.shape[0] != num.shape[1] or num.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {num.shape}")
        den = int(denominator)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        num = _fit(num)
        g = math.gcd(_gcd_all(num), den)
        if g > 1:
            num = _fit(num // g) if num.dtype == object else num // g
            den //= g
        if not num.any():
            den = 1
        num.flags.writeable = False
        self._num = num
        self._den = den

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        fracs = [[Fraction(v) for v in row] for row in rows]
        den = reduce(lambda acc, f: acc * f.denominator // math.gcd(acc, f.denominator),
                     (f for row in fracs for f in row), 1)
        return cls([[f.numerator * (den // f.denominator) for f in row] for row in fracs], den)

    @classmethod
    def identity(cls, dim: int) -> "ExactMatrix":
        return cls(np.eye(dim, dtype=np.int64))

    @classmethod
    def ones(cls, dim: int) -> "ExactMatrix":
        return cls(np.ones((dim, dim), dtype=np.int64))

    @classmethod
    def zeros(cls, dim: int) -> "ExactMatrix":
        return cls(np.zeros((dim, dim), dtype=np.int64))

    @classmethod
    def diagonal(cls, values: Iterable) -> "ExactMatrix":
        vals = [Fraction(v) for v in values]
        den = reduce(lambda acc, f: acc * f.denominator // math.gcd(acc, f.denominator), vals, 1)
        nums = [f.numerator * (den // f.denominator) for f in vals]
        arr = np.zeros((len(vals), len(vals)), dtype=object if _big(nums) else np.int64)
        for i, v in enumerate(nums):
            arr[i, i] = v
        return cls(arr, den)

    # access ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._num.shape[0]

    @property
    def numerators(self) -> np.ndarray:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def __getitem__(self, idx) -> Fraction:
        i, j = idx
        return Fraction(int(self._num[i, j]), self._den)

    def rows(self) -> list[list[Fraction]]:
        return [[Fraction(int(v), self._den) for v in row] for row in self._num]

    def diag(self) -> list[Fraction]:
        return [Fraction(int(self._num[i, i]), self._den) for i in range(self.dim)]

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self._num.astype(object))), self._den)

    def is_zero(self) -> bool:
        return not self._num.any()

    def is_diagonal(self) -> bool:
        off = self._num.copy()
        np.fill_diagonal(off, 0)
        return not off.any()

    def is_symmetric(self) -> bool:
        return bool((self._num == self._num.T).all())

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self._num.T, self._den)

    def first_difference(self, other: "ExactMatrix"):
        """Return ``(i, j, self[i,j], other[i,j])`` for the first differing entry, or None."""
        _check_dims(self, other)
        lhs, rhs = _common(self, other)
        diff = np.argwhere(lhs[0] != rhs[0])
        if diff.size == 0:
            return None
        i, j = (int(t) for t in diff[0])
        return i, j, self[i, j], other[i, j]

    def first_nonzero(self):
        nz = np.argwhere(self._num != 0)
        if nz.size == 0:
            return None
        i, j = (int(t) for t in nz[0])
        return i, j, self[i, j]

    # arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self._den == other._den and self.dim == other.dim
                and bool((self._num == other._num).all()))

    __hash__ = None

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        _check_dims(self, other)
        (a, den), (b, _) = _common(self, other)
        return ExactMatrix(_widen(a, 2 * max(_maxabs(a), _maxabs(b))) + b, den)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(-self._num, self._den)

    def scale(self, c) -> "ExactMatrix":
        c = Fraction(c)
        bound = _maxabs(self._num) * abs(c.numerator)
        return ExactMatrix(_widen(self._num, bound) * c.numerator, self._den * c.denominator)

    def __mul__(self, c) -> "ExactMatrix":
        if isinstance(c, ExactMatrix):
            raise TypeError("use @ for matrix products and hadamard() for entrywise products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def shift(self, c) -> "ExactMatrix":
        """``self + c*I``."""
        return self + ExactMatrix.identity(self.dim).scale(c)

    def __repr__(self) -> str:
        return f"ExactMatrix(dim={self.dim}, den={self._den})"


def _needs_object(values) -> bool:
    if isinstance(values, np.ndarray):
        return values.dtype == object
    return _big(v for row in values for v in row)


def _big(values) -> bool:
    return any(abs(int(v)) >= _INT64_SAFE for v in values)


def _check_dims(a: ExactMatrix, b: ExactMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _common(a: ExactMatrix, b: ExactMatrix):
    """Numerators of ``a`` and ``b`` over their least common denominator."""
    den = a._den * b._den // math.gcd(a._den, b._den)
    fa, fb = den // a._den, den // b._den
    na = _widen(a._num, _maxabs(a._num) * fa) * fa
    nb = _widen(b._num, _maxabs(b._num) * fb) * fb
    return (na, den), (nb, den)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    _check_dims(a, b)
    return ExactMatrix(int_matmul(a._num, b._num), a._den * b._den)


def hadamard(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    _check_dims(a, b)
    bound = _maxabs(a._num) * _maxabs(b._num)
    return ExactMatrix(_widen(a._num, bound) * _widen(b._num, bound), a._den * b._den)


def commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return mat_mul(a, b) - mat_mul(b, a)


def anticommutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return mat_mul(a, b) + mat_mul(b, a)



class BinaryMatrix:
    """Square 0/1 matrix with bit-packed rows."""

    __slots__ = ("_packed", "_dim")

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {bits.shape}")
        self._dim = bits.shape[0]
        self._packed = np.packbits(bits, axis=1)
        self._packed.flags.writeable = False

    @property
    def dim(self) -> int:
        return self._dim

    def to_bool(self) -> np.ndarray:
        return np.unpackbits(self._packed, axis=1, count=self._dim).astype(bool)

    def to_int(self) -> np.ndarray:
        return np.unpackbits(self._packed, axis=1, count=self._dim).astype(np.int64)

    def to_exact(self) -> ExactMatrix:
        return ExactMatrix(self.to_int())

    def row(self, i: int) -> np.ndarray:
        return np.unpackbits(self._packed[i], count=self._dim).astype(bool)

    def row_sums(self) -> np.ndarray:
        return self.to_int().sum(axis=1)

    def is_zero(self) -> bool:
        return not self._packed.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self._dim == other._dim and bool((self._packed == other._packed).all())

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryMatrix(dim={self._dim}, nnz={int(self.to_int().sum())})"


# small dense systems over Q ---------------------------------------------------

def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals.

    Raises ZeroDivisionError if the matrix is singular.
    """
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError(f"singular matrix (no pivot in column {col})")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = 1 / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f != 0:
                prow = aug[col]
                aug[r] = [v - f * pv for v, pv in zip(aug[r], prow)]
    return [row[n:] for row in aug]


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    inv = inverse(rows)
    b = [Fraction(v) for v in rhs]
    return [sum((c * bv for c, bv in zip(row, b)), Fraction(0)) for row in inv]
