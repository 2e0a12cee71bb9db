"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A value is a Fraction-coefficient combination of roots of unity, stored on
the tensor-product integral basis of Q(zeta_n): an exponent i (mod n) is a
basis exponent iff i mod p^a < phi(p^a) for every prime power p^a exactly
dividing n.  Conductors are kept minimal (and never congruent to 2 mod 4),
so equality and hashing are plain coefficient comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

_ZERO = Fraction(0)


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as ((p, multiplicity), ...)."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _crt_units(n: int) -> tuple[tuple[int, int, int], ...]:
    """Per prime power q || n: (p, q, u) with u = 1 mod q and u = 0 mod n/q."""
    units = []
    for p, a in _factorize(n):
        q = p**a
        m = n // q
        u = (m * pow(m, -1, q)) % n
        units.append((p, q, u))
    return tuple(units)


@lru_cache(maxsize=500_000)
def _expand_exponent(n: int, x: int) -> tuple[tuple[int, int], ...]:
    """Rewrite zeta_n^x over the basis: a tuple of (exponent, sign) terms.

    Uses Phi_{p^a}(X) = sum_i X^{i p^(a-1)}, so a non-basis residue expands
    into p-1 basis residues with sign -1.
    """
    if n == 1:
        return ((0, 1),)
    x %= n
    terms = [(0, 1)]
    for p, q, u in _crt_units(n):
        e = x % q
        phi = q - q // p
        if e < phi:
            this = ((e, 1),)
        else:
            r = e - phi
            step = q // p
            this = tuple((r + i * step, -1) for i in range(p - 1))
        terms = [((t + ee * u) % n, s * ss) for t, s in terms for ee, ss in this]
    return tuple(terms)


def _reduce(n: int, raw: Iterable[tuple[int, Fraction]]) -> dict[int, Fraction]:
    acc: dict[int, Fraction] = {}
    for x, c in raw:
        if not c:
            continue
        for e, s in _expand_exponent(n, x):
            v = acc.get(e, _ZERO) + (c if s > 0 else -c)
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
    return acc


def _descend(n: int, coeffs: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Minimize the conductor by repeated per-prime descent."""
    while n > 1:
        if not coeffs:
            return 1, {}
        for p, a in _factorize(n):
            # n/2 would be 2 mod 4, so the 2-part 4 drops straight to odd.
            step = 4 if (p == 2 and a == 2) else p
            if all(e % step == 0 for e in coeffs):
                n //= step
                coeffs = _reduce(n, ((e // step, c) for e, c in coeffs.items()))
                break
        else:
            return n, coeffs
    return 1, coeffs


def _coerce(value) -> "Cyclotomic | None":
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, (int, Fraction)):
        return Cyclotomic._make(1, {0: Fraction(value)} if value else {})
    return None


class Cyclotomic:
    """An element of some Q(zeta_n), canonical and immutable."""

    __slots__ = ("_n", "_c")

    def __init__(self, n: int = 1, coeffs: Mapping[int, Rational] | None = None):
        if n < 1:
            raise ValueError("conductor must be positive")
        raw = {int(e): Fraction(c) for e, c in (coeffs or {}).items()}
        if n % 4 == 2:
            # zeta_{2m} = -zeta_m^((m+1)/2) for odd m
            m = n // 2
            shift = (m + 1) // 2
            raw = {
                (k * shift) % m: (c if k % 2 == 0 else -c) for k, c in raw.items()
            }
            n = m
        reduced = _reduce(n, raw.items())
        self._n, self._c = _descend(n, reduced)

    @classmethod
    def _make(cls, n: int, coeffs: dict[int, Fraction]) -> "Cyclotomic":
        """Internal: wrap already-canonical data without re-normalizing."""
        z = object.__new__(cls)
        z._n = n
        z._c = coeffs
        return z

    @classmethod
    def from_rational(cls, q: Rational) -> "Cyclotomic":
        q = Fraction(q)
        return cls._make(1, {0: q} if q else {})

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "Cyclotomic":
        return cls(n, {k % n: 1})

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def is_rational(self) -> bool:
        return self._n == 1

    @property
    def is_integral(self) -> bool:
        """True iff the value is an algebraic integer."""
        return all(c.denominator == 1 for c in self._c.values())

    def as_rational(self) -> Fraction:
        if self._n != 1:
            raise ValueError(f"not a rational value: {self}")
        return self._c.get(0, _ZERO)

    def as_int(self) -> int:
        q = self.as_rational()
        if q.denominator != 1:
            raise ValueError(f"not an integer value: {self}")
        return q.numerator

    def _lift(self, n: int) -> dict[int, Fraction]:
        if n == self._n:
            return self._c
        step = n // self._n
        return _reduce(n, ((e * step, c) for e, c in self._c.items()))

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n = math.lcm(self._n, other._n)
        acc = dict(self._lift(n))
        for e, c in other._lift(n).items():
            v = acc.get(e, _ZERO) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return Cyclotomic._make(*_descend(n, acc))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._make(self._n, {e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclotomic._make(1, {})
            q = Fraction(other)
            return Cyclotomic._make(self._n, {e: c * q for e, c in self._c.items()})
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self._n == 1:
            return other * self.as_rational()
        if other._n == 1:
            return self * other.as_rational()
        n = math.lcm(self._n, other._n)
        a = self._lift(n)
        b = other._lift(n)
        acc: dict[int, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                c = ca * cb
                for e, s in _expand_exponent(n, ea + eb):
                    v = acc.get(e, _ZERO) + (c if s > 0 else -c)
                    if v:
                        acc[e] = v
                    else:
                        acc.pop(e, None)
        return Cyclotomic._make(*_descend(n, acc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            other = other.as_rational()
        q = Fraction(other)
        if not q:
            raise ZeroDivisionError("division by zero")
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic._make(1, {0: Fraction(1)})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def coords(self, n: int) -> dict[int, Fraction]:
        """Basis coordinates after lifting to conductor n (a multiple of ours)."""
        if n % self._n:
            raise ValueError(f"{n} is not a multiple of the conductor {self._n}")
        return dict(self._lift(n))

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism zeta -> zeta^k; k must be prime to the conductor."""
        if math.gcd(k, self._n) != 1:
            raise ValueError(f"galois exponent {k} not coprime to conductor {self._n}")
        return Cyclotomic._make(
            *_descend(self._n, _reduce(self._n, ((e * k, c) for e, c in self._c.items())))
        )

    def conjugate(self) -> "Cyclotomic":
        if self._n == 1:
            return self
        return self.galois(self._n - 1)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._n == other._n and self._c == other._c

    def __hash__(self):
        if self._n == 1:
            return hash(self._c.get(0, _ZERO))
        return hash((self._n, tuple(sorted(self._c.items()))))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"Cyclotomic({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items()):
            if self._n == 1 or e == 0:
                term = str(c)
            else:
                root = f"E({self._n})" if e == 1 else f"E({self._n})^{e}"
                if c == 1:
                    term = root
                elif c == -1:
                    term = f"-{root}"
                else:
                    term = f"{c}*{root}"
            if parts and not term.startswith("-"):
                parts.append("+")
            parts.append(term)
        return "".join(parts)


def E(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity zeta_n^k."""
    return Cyclotomic.root_of_unity(n, k)


def cyc_sum(terms) -> Cyclotomic:
    """Sum many cyclotomics with a single final normalization."""
    terms = [t if isinstance(t, Cyclotomic) else Cyclotomic.from_rational(t) for t in terms]
    if not terms:
        return Cyclotomic._make(1, {})
    n = 1
    for t in terms:
        n = math.lcm(n, t._n)
    acc: dict[int, Fraction] = {}
    for t in terms:
        for e, c in t._lift(n).items():
            v = acc.get(e, _ZERO) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
    return Cyclotomic._make(*_descend(n, acc))


ZERO = Cyclotomic.from_rational(0)
ONE = Cyclotomic.from_rational(1)
