"""Exact coefficient fields: Q, F_p, and cyclotomic fields Q(zeta_n).

Field elements are plain hashable Python values so they can live in tuples,
dicts and numpy object arrays without wrappers:

* ``QQ``            -- ``fractions.Fraction``
* ``GF(p)``         -- ``int`` reduced into ``[0, p)``
* ``Cyclotomic(n)`` -- ``tuple[Fraction, ...]`` of coordinates in the power
  basis ``1, z, ..., z^(deg-1)`` modulo the n-th cyclotomic polynomial.

All operations are exact and equality is literal; there is no tolerance
anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence


class FieldError(ValueError):
    """Raised for malformed scalars or impossible field operations."""


class Field:
    """Common interface for the exact coefficient fields.

    Subclasses implement a tiny protocol (``add``, ``mul``, ``inv``, ...)
    over plain Python values; everything higher up (matrices, Hopf data,
    diagram evaluation) is generic over a ``Field`` instance.
    """

    characteristic: int = 0

    @property
    def zero(self) -> Any:
        raise NotImplementedError

    @property
    def one(self) -> Any:
        raise NotImplementedError

    def from_int(self, k: int) -> Any:
        raise NotImplementedError

    def add(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def neg(self, a: Any) -> Any:
        raise NotImplementedError

    def mul(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def inv(self, a: Any) -> Any:
        raise NotImplementedError

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def eq(self, a: Any, b: Any) -> bool:
        return a == b

    def validate(self, a: Any) -> Any:
        """Return ``a`` if it is a well-formed element, else raise."""
        raise NotImplementedError

    # --- serialization ----------------------------------------------------

    def parse(self, value: Any) -> Any:
        """Parse a scalar from its file representation."""
        raise NotImplementedError

    def to_json(self, a: Any) -> Any:
        """File representation of a scalar (string or list of strings)."""
        raise NotImplementedError

    def describe(self) -> Any:
        """File representation of the field itself."""
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}({self.describe()!r})"


class _Rationals(Field):
    characteristic = 0

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero in Q")
        return 1 / a

    def validate(self, a):
        if not isinstance(a, Fraction):
            raise FieldError(f"not a rational scalar: {a!r}")
        return a

    def parse(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"bad rational scalar {value!r}") from exc
        raise FieldError(f"bad rational scalar {value!r}")

    def to_json(self, a) -> str:
        return str(a)

    def describe(self) -> str:
        return "rational"

    def __eq__(self, other) -> bool:
        return isinstance(other, _Rationals)

    def __hash__(self) -> int:
        return hash("rational")


QQ: Field = _Rationals()


class _PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.p

    def from_int(self, k: int) -> int:
        return k % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError(f"division by zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def validate(self, a):
        if not isinstance(a, int) or not 0 <= a < self.p:
            raise FieldError(f"not an F_{self.p} scalar: {a!r}")
        return a

    def parse(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            try:
                return int(value.strip(), 10) % self.p
            except ValueError as exc:
                raise FieldError(f"bad F_{self.p} scalar {value!r}") from exc
        raise FieldError(f"bad F_{self.p} scalar {value!r}")

    def to_json(self, a) -> str:
        return str(a % self.p)

    def describe(self):
        return {"prime": self.p}

    def __eq__(self, other) -> bool:
        return isinstance(other, _PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("prime", self.p))


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    """The prime field F_p."""
    return _PrimeField(p)


def _poly_trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out

def _poly_divmod(num: Sequence[Fraction], den: Sequence[Fraction]):
    num = list(num)
    den = _poly_trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    deg_d = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - deg_d, 0)
    for k in range(len(num) - deg_d - 1, -1, -1):
        c = num[k + deg_d] / lead
        quot[k] = c
        if c != 0:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    return _poly_trim(quot), _poly_trim(num[:deg_d])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise FieldError("cyclotomic order must be positive")
    # x^n - 1 divided by the product of Phi_d over proper divisors d of n
    num: list[Fraction] = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            if r:
                raise AssertionError("cyclotomic recursion left a remainder")
            num = q
    return tuple(num)


class _CyclotomicField(Field):
    """Q(zeta_n) as Q[x] modulo the n-th cyclotomic polynomial."""

    characteristic = 0

    def __init__(self, n: int):
        if n < 1:
            raise FieldError("cyclotomic order must be positive")
        self.n = n
        self.modulus = list(cyclotomic_polynomial(n))
        self.degree = len(self.modulus) - 1
        # reduction table for x^k, degree <= k <= 2*degree - 2
        self._red: list[tuple[Fraction, ...]] = []
        pows: list[Fraction] = [Fraction(0)] * self.degree
        # x^degree = -(lower part of modulus)  (modulus is monic)
        base = [-c for c in self.modulus[: self.degree]]
        cur = list(base)
        self._red.append(tuple(cur))
        for _ in range(self.degree - 2):
            shifted = [Fraction(0)] + cur[:-1]
            if cur[-1] != 0:
                shifted = [s + cur[-1] * b for s, b in zip(shifted, base)]
            cur = shifted
            self._red.append(tuple(cur))
        del pows

    @property
    def zero(self):
        return (Fraction(0),) * self.degree

    @property
    def one(self):
        return (Fraction(1),) + (Fraction(0),) * (self.degree - 1)

    def zeta(self):
        """The distinguished primitive n-th root of unity."""
        if self.degree == 1:
            # n in {1, 2}: zeta is rational
            return (Fraction(1) if self.n == 1 else Fraction(-1),)
        return tuple(Fraction(1) if i == 1 else Fraction(0)
                     for i in range(self.degree))

    def from_int(self, k: int):
        return (Fraction(k),) + (Fraction(0),) * (self.degree - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    prod[i + j] += ai * bj
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c != 0:
                red = self._red[k - d]
                for i in range(d):
                    out[i] += c * red[i]
        return tuple(out)

    def inv(self, a):
        if all(x == 0 for x in a):
            raise FieldError(f"division by zero in Q(zeta_{self.n})")
        # extended Euclid in Q[x] against the modulus
        r0, r1 = list(self.modulus), _poly_trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = _poly_divmod(r0, r1)
            if not r:
                break
            s = _poly_trim([x - y for x, y in
                            zip(_pad(s0, len(s1) + len(q)),
                                _pad(_poly_mul(q, s1), len(s1) + len(q)))])
            r0, r1, s0, s1 = r1, r, s1, s
        # r1 is the gcd: a nonzero constant since the modulus is irreducible
        if len(r1) != 1:
            raise FieldError("scalar is a zero divisor; modulus not coprime")
        c = r1[0]
        out = [x / c for x in s1]
        out = out[: self.degree] + [Fraction(0)] * max(self.degree - len(out), 0)
        return tuple(out[: self.degree])

    def validate(self, a):
        if (not isinstance(a, tuple) or len(a) != self.degree
                or not all(isinstance(x, Fraction) for x in a)):
            raise FieldError(f"not a Q(zeta_{self.n}) scalar: {a!r}")
        return a

    def parse(self, value):
        if isinstance(value, tuple) and len(value) == self.degree:
            return self.validate(value)
        if isinstance(value, (int, str)):
            return (QQ.parse(value),) + (Fraction(0),) * (self.degree - 1)
        if isinstance(value, list):
            if len(value) > self.degree:
                raise FieldError(
                    f"coefficient list longer than degree {self.degree}")
            coeffs = [QQ.parse(v) for v in value]
            coeffs += [Fraction(0)] * (self.degree - len(coeffs))
            return tuple(coeffs)
        raise FieldError(f"bad Q(zeta_{self.n}) scalar {value!r}")

    def to_json(self, a):
        return [str(x) for x in a]

    def describe(self):
        return {"cyclotomic": self.n}

    def __eq__(self, other) -> bool:
        return isinstance(other, _CyclotomicField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("cyclotomic", self.n))


def _pad(coeffs: list[Fraction], length: int) -> list[Fraction]:
    return list(coeffs) + [Fraction(0)] * (length - len(coeffs))


@lru_cache(maxsize=None)
def Cyclotomic(n: int) -> Field:
    """The cyclotomic field Q(zeta_n)."""
    return _CyclotomicField(n)


def field_from_json(value: Any) -> Field:
    """Inverse of ``Field.describe``."""
    if value == "rational":
        return QQ
    if isinstance(value, dict):
        if set(value) == {"prime"}:
            return GF(int(value["prime"]))
        if set(value) == {"cyclotomic"}:
            return Cyclotomic(int(value["cyclotomic"]))
    raise FieldError(f"unknown field description {value!r}")
