"""Exact scalar fields: prime fields F_p and the rationals.

Scalars are plain Python values in canonical form (``int`` in ``[0, p)`` for
F_p, :class:`fractions.Fraction` for Q).  Each field also knows how to hold
dense numpy arrays of its elements, which is what the linear-algebra layer
works on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DivisionByZero, FieldTooSmall, UnsupportedField

DEFAULT_PRIME = 31991
MIN_PRIME = 101

# Below this bound every product of two reduced entries fits in an int64.
_INT64_PRIME_BOUND = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, trial division below that."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface; see :class:`PrimeField` and :class:`Rationals`."""

    kind: str
    dtype: object

    def __call__(self, value):
        raise NotImplementedError

    # scalar operations
    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b) -> bool:
        return self(a) == self(b)

    def inv(self, a):
        raise NotImplementedError

    def random_scalar(self, rng):
        raise UnsupportedField(f"{self} has no uniform distribution")

    # array support
    def reduce(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(self(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a.dot(b))


@dataclass(frozen=True, eq=True)
class PrimeField(Field):
    p: int = DEFAULT_PRIME

    kind = "prime-field"

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p < MIN_PRIME:
            raise FieldTooSmall(f"p = {self.p} is below the minimum {MIN_PRIME}")

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_PRIME_BOUND else object

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            return self.div(value.numerator, value.denominator)
        return int(value) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, -1, self.p)

    def random_scalar(self, rng) -> int:
        if self.p <= 2**62:
            return int(rng.integers(0, self.p))
        nbytes = (self.p.bit_length() + 7) // 8
        while True:
            v = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - self.p.bit_length())
            if v < self.p:
                return v

    def random_array(self, rng, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            for idx in np.ndindex(*np.atleast_1d(shape)):
                out[idx] = self.random_scalar(rng)
            return out
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def reduce(self, arr):
        return arr % self.p

    def array(self, data) -> np.ndarray:
        if self.dtype is object:
            arr = np.array(data, dtype=object)
            return np.vectorize(self, otypes=[object])(arr) if arr.size else arr
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        return np.vectorize(self, otypes=[np.int64])(arr)

    def matmul(self, a, b):
        if self.dtype is object:
            return self.reduce(a.dot(b))
        # keep partial sums below 2**63
        chunk = max(1, (2**63 - 1) // ((self.p - 1) ** 2))
        inner = a.shape[-1]
        if inner <= chunk:
            return a.dot(b) % self.p
        out = np.zeros((a.shape[0], b.shape[-1]) if b.ndim == 2 else a.shape[:-1], dtype=np.int64)
        for s in range(0, inner, chunk):
            out = (out + a[..., s:s + chunk].dot(b[s:s + chunk]) % self.p) % self.p
        return out

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True, eq=True)
class Rationals(Field):
    """Arbitrary-precision rationals.  Only meant for small cross-checks."""

    kind = "rationals"
    dtype = object

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def inv(self, a) -> Fraction:
        a = Fraction(a)
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def reduce(self, arr):
        return arr

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr

    def __str__(self):
        return "QQ"


def make_field(kind: str = "prime-field", p: int | None = None) -> Field:
    if kind == "prime-field":
        return PrimeField(DEFAULT_PRIME if p is None else p)
    if kind == "rationals":
        return Rationals()
    raise ValueError(f"unknown field kind {kind!r}")
