"""Arithmetic over the prime field Z_N and the phase-space line function.

Phase-space points ``(q, p)`` and basis labels all live in ``{0, ..., N-1}``
with arithmetic mod N.  The N+1 mutually unbiased bases are labelled by
:class:`BasisIndex`: the reference (position) basis, and the N bases
``Shifted(b)`` diagonalising ``X Z^b``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

__all__ = [
    "Dimension", "BasisIndex", "REFERENCE", "NotPrime", "EvenOrTooSmall",
    "ZeroDivisor", "validate_dimension", "as_dimension", "mod_inverse",
    "line_point", "line_points", "basis_indices",
]


class NotPrime(ValueError):
    pass


class EvenOrTooSmall(ValueError):
    pass


class ZeroDivisor(ZeroDivisionError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Dimension:
    """Hilbert-space size; always an odd prime."""

    n: int

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, int):
            raise TypeError(f"dimension must be an int, got {type(n).__name__}")
        if n <= 2:
            raise EvenOrTooSmall(f"dimension must be a prime larger than 2, got {n}")
        if not _is_prime(n):
            raise NotPrime(f"dimension {n} is not prime")

    def __int__(self) -> int:
        return self.n

    @property
    def half(self) -> int:
        """(N+1)/2, the field inverse of 2."""
        return (self.n + 1) // 2

    @cached_property
    def roots(self) -> tuple[complex, ...]:
        # powers of omega, indexed by the exponent reduced mod N
        return tuple(cmath.exp(2j * math.pi * k / self.n) for k in range(self.n))

    @property
    def omega(self) -> complex:
        return self.roots[1]

    def phase(self, exponent: int) -> complex:
        return self.roots[exponent % self.n]


def validate_dimension(n: int) -> Dimension:
    if isinstance(n, Dimension):
        return n
    if isinstance(n, float) and not n.is_integer():
        raise TypeError(f"dimension must be an integer, got {n}")
    return Dimension(int(n))


def as_dimension(n: Dimension | int) -> Dimension:
    return n if isinstance(n, Dimension) else Dimension(n)


@dataclass(frozen=True)
class BasisIndex:
    """Label of one of the N+1 bases.

    ``shift is None`` marks the reference basis; otherwise the basis of
    eigenvectors of ``X Z^shift``.  Use :data:`REFERENCE` or
    :meth:`BasisIndex.shifted` rather than the constructor.
    """

    shift: Union[int, None] = None

    def __post_init__(self):
        if self.shift is not None and (not isinstance(self.shift, int) or self.shift < 0):
            raise ValueError(f"basis shift must be a non-negative int, got {self.shift!r}")

    @classmethod
    def shifted(cls, b: int) -> "BasisIndex":
        return cls(int(b))

    @property
    def is_reference(self) -> bool:
        return self.shift is None

    def check(self, n: Dimension | int) -> None:
        n = int(n)
        if self.shift is not None and self.shift >= n:
            raise ValueError(f"basis shift {self.shift} out of range for N={n}")

    @property
    def label(self) -> str:
        return "ref" if self.shift is None else str(self.shift)

    def __repr__(self) -> str:
        return "Reference" if self.shift is None else f"Shifted({self.shift})"


REFERENCE = BasisIndex(None)


def basis_indices(n: Dimension | int) -> list[BasisIndex]:
    """All N+1 labels: Reference, Shifted(0), ..., Shifted(N-1)."""
    return [REFERENCE] + [BasisIndex(b) for b in range(int(n))]


def mod_inverse(a: int, n: Dimension | int) -> int:
    n = int(n)
    if a % n == 0:
        raise ZeroDivisor(f"{a} has no inverse mod {n}")
    return pow(a, -1, n)


def _check_point(q: int, p: int, n: int) -> None:
    if not (0 <= q < n and 0 <= p < n):
        raise ValueError(f"phase-space point ({q}, {p}) outside [0, {n - 1}]")


def line_point(q: int, p: int, b: BasisIndex, n: Dimension | int) -> int:
    """State label M_{q,p}(b) selected in basis ``b`` by the point (q, p)."""
    n = int(n)
    _check_point(q, p, n)
    b.check(n)
    if b.is_reference:
        return q
    return (-p + b.shift * q) % n


def line_points(q: int, p: int, n: Dimension | int) -> list[tuple[BasisIndex, int]]:
    n = int(n)
    return [(b, line_point(q, p, b, n)) for b in basis_indices(n)]


def iter_points(n: Dimension | int) -> Iterator[tuple[int, int]]:
    n = int(n)
    for q in range(n):
        for p in range(n):
            yield q, p
