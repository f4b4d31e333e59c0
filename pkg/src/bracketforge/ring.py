"""Exact coefficient rings: the integers mod n and integer Laurent polynomials.

Modular elements are plain ``int`` residues in ``[0, n)``.  Laurent elements are
:class:`Laurent` instances, which are immutable, hashable and kept in canonical
form (no zero coefficients), so structural equality is ring equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Union

__all__ = [
    "Laurent",
    "ModularRing",
    "LaurentRing",
    "Ring",
    "RingElement",
    "NotInvertibleError",
    "RingFormatError",
    "ring_from_dict",
    "parse_ring",
    "is_unit",
    "invert",
    "power",
]


class NotInvertibleError(ArithmeticError):
    """Raised when an inverse (or negative power) of a non-unit is requested."""


class RingFormatError(ValueError):
    """Raised for malformed ring specifications or element encodings."""


class Laurent:
    """A Laurent polynomial in one variable with arbitrary-precision integer
    coefficients, stored sparsely as sorted ``(exponent, coefficient)`` pairs.

    >>> a = Laurent.variable()
    >>> str(-a**2 - a**-2)
    '-A^-2 - A^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[int, int], Iterable[tuple[int, int]], int] = ()):
        if isinstance(terms, int):
            terms = {0: terms}
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = hash(self._terms)

    @classmethod
    def variable(cls) -> "Laurent":
        return cls({1: 1})

    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "Laurent":
        return cls({exponent: coefficient})

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def coefficient(self, exponent: int) -> int:
        for e, c in self._terms:
            if e == exponent:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Laurent(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> "Laurent":
        return Laurent([(e, -c) for e, c in self._terms])

    def __add__(self, other: Union["Laurent", int]) -> "Laurent":
        if isinstance(other, int):
            other = Laurent(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return Laurent(self._terms + other._terms)

    __radd__ = __add__

    def __sub__(self, other: Union["Laurent", int]) -> "Laurent":
        if isinstance(other, int):
            other = Laurent(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "Laurent":
        return Laurent(other) - self

    def __mul__(self, other: Union["Laurent", int]) -> "Laurent":
        if isinstance(other, int):
            return Laurent([(e, c * other) for e, c in self._terms])
        if not isinstance(other, Laurent):
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return Laurent(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            return self.inverse() ** (-k)
        result = Laurent(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Laurent":
        if not self.is_monomial() or abs(self._terms[0][1]) != 1:
            raise NotInvertibleError(f"{self} is not a unit of Z[A, A^-1]")
        e, c = self._terms[0]
        return Laurent({-e: c})

    def sort_key(self) -> tuple:
        # graded-lexicographic: by span, then by coefficient list
        if not self._terms:
            return (0, ())
        return (self._terms[-1][0] - self._terms[0][0], self._terms)

    def __repr__(self) -> str:
        return f"Laurent({dict(self._terms)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self._terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "A" if e == 1 else f"A^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)


RingElement = Union[int, Laurent]


class Ring:
    """Common interface of the two coefficient rings."""

    kind: str

    def zero(self) -> RingElement:
        raise NotImplementedError

    def one(self) -> RingElement:
        raise NotImplementedError

    def coerce(self, value: Any) -> RingElement:
        raise NotImplementedError

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        raise NotImplementedError

    def neg(self, x: RingElement) -> RingElement:
        raise NotImplementedError

    def mul(self, x: RingElement, y: RingElement) -> RingElement:
        raise NotImplementedError

    def is_unit(self, x: RingElement) -> bool:
        raise NotImplementedError

    def invert(self, x: RingElement) -> RingElement:
        raise NotImplementedError

    def sub(self, x: RingElement, y: RingElement) -> RingElement:
        return self.add(x, self.neg(y))

    def power(self, x: RingElement, k: int) -> RingElement:
        if k < 0:
            x, k = self.invert(x), -k
        result = self.one()
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def sum(self, values: Iterable[RingElement]) -> RingElement:
        total = self.zero()
        for v in values:
            total = self.add(total, v)
        return total

    def prod(self, values: Iterable[RingElement]) -> RingElement:
        total = self.one()
        for v in values:
            total = self.mul(total, v)
        return total

    def sort_key(self, x: RingElement) -> Any:
        raise NotImplementedError

    def format(self, x: RingElement) -> str:
        return str(x)

    def encode(self, x: RingElement) -> Any:
        raise NotImplementedError

    def decode(self, data: Any) -> RingElement:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ModularRing(Ring):
    """The ring Z/nZ with residues normalized to ``[0, n)``."""

    n: int
    kind = "modular"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise RingFormatError(f"modulus must be an integer >= 2, got {self.n!r}")

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def coerce(self, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise RingFormatError(f"expected an integer residue, got {value!r}")
        return value % self.n

    def elements(self) -> range:
        return range(self.n)

    def units(self) -> list[int]:
        return [x for x in range(self.n) if math.gcd(x, self.n) == 1]

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return -x % self.n

    def mul(self, x: int, y: int) -> int:
        return x * y % self.n

    def is_unit(self, x: int) -> bool:
        return math.gcd(x, self.n) == 1

    def invert(self, x: int) -> int:
        try:
            return pow(x, -1, self.n)
        except ValueError:
            raise NotInvertibleError(f"{x} is not a unit mod {self.n}") from None

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.invert(x), -k
        return pow(x, k, self.n)

    def sort_key(self, x: int) -> int:
        return x

    def encode(self, x: int) -> int:
        return x

    def decode(self, data: Any) -> int:
        return self.coerce(data)

    def to_dict(self) -> dict:
        return {"kind": "modular", "n": self.n}

    def __str__(self) -> str:
        return f"Z{self.n}"


@dataclass(frozen=True)
class LaurentRing(Ring):
    """The ring Z[A, A^-1]."""

    kind = "laurent"

    def zero(self) -> Laurent:
        return Laurent()

    def one(self) -> Laurent:
        return Laurent(1)

    def variable(self) -> Laurent:
        return Laurent.variable()

    def coerce(self, value: Any) -> Laurent:
        if isinstance(value, Laurent):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return Laurent(value)
        raise RingFormatError(f"cannot interpret {value!r} as a Laurent polynomial")

    def add(self, x: Laurent, y: Laurent) -> Laurent:
        return x + y

    def neg(self, x: Laurent) -> Laurent:
        return -x

    def mul(self, x: Laurent, y: Laurent) -> Laurent:
        return x * y

    def is_unit(self, x: Laurent) -> bool:
        return x.is_monomial() and abs(x.terms[0][1]) == 1

    def invert(self, x: Laurent) -> Laurent:
        return x.inverse()

    def power(self, x: Laurent, k: int) -> Laurent:
        return x**k

    def sort_key(self, x: Laurent) -> tuple:
        return x.sort_key()

    def encode(self, x: Laurent) -> list[list[int]]:
        return [[e, c] for e, c in x.terms]

    def decode(self, data: Any) -> Laurent:
        if isinstance(data, int) and not isinstance(data, bool):
            return Laurent(data)
        if not isinstance(data, list):
            raise RingFormatError(f"Laurent element must be a list of [exponent, coefficient] pairs, got {data!r}")
        pairs = []
        for item in data:
            if (
                not isinstance(item, (list, tuple))
                or len(item) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
            ):
                raise RingFormatError(f"bad Laurent term {item!r}")
            pairs.append((item[0], item[1]))
        exps = [e for e, _ in pairs]
        if len(set(exps)) != len(exps):
            raise RingFormatError(f"repeated exponent in {data!r}")
        return Laurent(pairs)

    def to_dict(self) -> dict:
        return {"kind": "laurent"}

    def __str__(self) -> str:
        return "Z[A,A^-1]"


def ring_from_dict(data: Mapping) -> Ring:
    """Build a ring from ``{"kind": "modular", "n": 7}`` or ``{"kind": "laurent"}``.

    A wrapping ``{"ring": {...}}`` document is also accepted.
    """
    if "ring" in data and isinstance(data["ring"], Mapping):
        data = data["ring"]
    kind = data.get("kind")
    if kind == "modular":
        return ModularRing(data.get("n"))
    if kind == "laurent":
        return LaurentRing()
    raise RingFormatError(f"unknown ring kind {kind!r}")


def parse_ring(text: str) -> Ring:
    """Parse the short command-line forms ``Z7``, ``Zn=7`` or ``laurent``."""
    t = text.strip()
    if t.lower() == "laurent":
        return LaurentRing()
    for prefix in ("Zn=", "Z", "z"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return ModularRing(int(t[len(prefix):]))
    raise RingFormatError(f"cannot parse ring {text!r}; use e.g. 'Z7' or 'laurent'")


def is_unit(ring: Ring, x: RingElement) -> bool:
    return ring.is_unit(x)


def invert(ring: Ring, x: RingElement) -> RingElement:
    return ring.invert(x)


def power(ring: Ring, x: RingElement, k: int) -> RingElement:
    return ring.power(x, k)
