"""Ground fields: the rationals and prime fields F_p.

Matrices are plain numpy arrays.  Over F_p they are int64 arrays holding
residues in [0, p); over Q they are object arrays holding Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 32003


class ContractError(ValueError):
    """Raised when an operation is called with inconsistent arguments."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """A field descriptor.  ``p == 0`` means the rationals."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p != 0:
            if not _is_prime(self.p):
                raise ContractError(f"{self.p} is not prime")
            # products of two residues plus accumulation must fit in int64
            if self.p >= 2**31:
                raise ContractError("prime too large for machine-word arithmetic")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def dtype(self):
        return object if self.p == 0 else np.int64

    def __str__(self):
        return "q" if self.p == 0 else f"p:{self.p}"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip().lower()
        if text in ("q", "rationals"):
            return cls(0)
        if text.startswith("p:"):
            try:
                return cls(int(text[2:]))
            except ValueError as exc:
                raise ContractError(f"bad field descriptor {text!r}") from exc
        raise ContractError(f"bad field descriptor {text!r}")

    # scalars

    def scalar(self, x):
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p == 0:
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(x)
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def format_scalar(self, x) -> str:
        if self.p == 0:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def parse_scalar(self, text: str):
        try:
            return self.scalar(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ContractError(f"bad scalar literal {text!r}") from exc

    # arrays

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p == 0:
            return a
        return a % self.p

    def array(self, data, shape=None) -> np.ndarray:
        if self.p == 0:
            a = np.array(data, dtype=object)
            if shape is not None:
                a = a.reshape(shape)
            flat = a.reshape(-1)
            for idx in range(flat.size):
                flat[idx] = Fraction(flat[idx])
            return a
        a = np.array(data, dtype=object) if not isinstance(data, np.ndarray) else data
        if a.dtype == object:
            flat = [self.scalar(x) for x in a.reshape(-1)]
            a = np.array(flat, dtype=np.int64).reshape(a.shape)
        else:
            a = a.astype(np.int64) % self.p
        if shape is not None:
            a = a.reshape(shape)
        return a

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.p == 0:
            a = np.empty((rows, cols), dtype=object)
            a.fill(Fraction(0))
            return a
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.scalar(1)
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ContractError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if self.p == 0:
            return a.dot(b)
        # chunk the inner dimension so that sums of products stay below 2^63
        chunk = max(1, (2**62) // (self.p * self.p))
        if a.shape[1] <= chunk:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, a.shape[1], chunk):
            out = (out + a[:, s:s + chunk] @ b[s:s + chunk]) % self.p
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul_scalar(self, a, c):
        return self.reduce(a * self.scalar(c))

    def is_zero(self, a: np.ndarray) -> bool:
        return a.size == 0 or not np.any(a != 0)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.sub(a, b))

    def random(self, rng: np.random.Generator, rows: int, cols: int, bound: int = 3) -> np.ndarray:
        if self.p == 0:
            vals = rng.integers(-bound, bound + 1, size=(rows, cols))
            return self.array(vals.tolist(), shape=(rows, cols)) if rows * cols else self.zeros(rows, cols)
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def random_scalar(self, rng: np.random.Generator, bound: int = 1000):
        if self.p == 0:
            return Fraction(int(rng.integers(-bound, bound + 1)))
        return int(rng.integers(0, self.p))


QQ = Field(0)
GF = Field(DEFAULT_PRIME)
