"""Finite biquandles given by operation tables on the elements ``1..n``.

``under[x-1][y-1]`` is ``x ▷̲ y`` and ``over[x-1][y-1]`` is ``x ▷̄ y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .ring import ModularRing, NotInvertibleError

__all__ = [
    "Biquandle",
    "BiquandleFormatError",
    "Violation",
    "BiquandleReport",
    "alexander_biquandle",
    "trivial_biquandle",
    "validate_biquandle",
    "is_quandle",
    "s_inverse_by_search",
]


class BiquandleFormatError(ValueError):
    """Malformed biquandle table (wrong shape or out-of-range entries)."""


@dataclass(frozen=True)
class Violation:
    """One violated axiom with its lexicographically smallest witness."""

    axiom: str
    witness: tuple
    detail: str
    count: int = 1

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail, "count": self.count}


@dataclass(frozen=True)
class BiquandleReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> list[str]:
        return [v.axiom for v in self.violations]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _as_table(rows: Sequence[Sequence[int]], n: int, name: str) -> tuple[tuple[int, ...], ...]:
    if len(rows) != n:
        raise BiquandleFormatError(f"{name} table has {len(rows)} rows, expected {n}")
    out = []
    for i, row in enumerate(rows, 1):
        if len(row) != n:
            raise BiquandleFormatError(f"{name} table row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row, 1):
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
                raise BiquandleFormatError(f"{name}[{i}][{j}] = {v!r} is outside 1..{n}")
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Biquandle:
    """Operation tables of a finite biquandle on ``{1, ..., n}``.

    Construction checks only shape and range; use :func:`validate_biquandle`
    for the axioms.  The inverse tables used by coloring propagation are
    built lazily and raise ``ValueError`` if the relevant map is not bijective.
    """

    under: tuple[tuple[int, ...], ...]
    over: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.under)
        if n == 0:
            raise BiquandleFormatError("a biquandle needs at least one element")
        object.__setattr__(self, "under", _as_table(self.under, n, "under"))
        object.__setattr__(self, "over", _as_table(self.over, n, "over"))

    @property
    def n(self) -> int:
        return len(self.under)

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    def under_op(self, x: int, y: int) -> int:
        return self.under[x - 1][y - 1]

    def over_op(self, x: int, y: int) -> int:
        return self.over[x - 1][y - 1]

    def sideways(self, x: int, y: int) -> tuple[int, int]:
        """The map S(x, y) = (y ▷̄ x, x ▷̲ y)."""
        return self.over[y - 1][x - 1], self.under[x - 1][y - 1]

    @cached_property
    def under_column_inverse(self) -> tuple[tuple[int, ...], ...]:
        """``t[y-1][z-1]`` is the unique x with ``x ▷̲ y = z``."""
        return _column_inverse(self.under, "under")

    @cached_property
    def over_column_inverse(self) -> tuple[tuple[int, ...], ...]:
        """``t[y-1][z-1]`` is the unique x with ``x ▷̄ y = z``."""
        return _column_inverse(self.over, "over")

    @cached_property
    def sideways_inverse(self) -> dict[tuple[int, int], tuple[int, int]]:
        inv = {}
        for x, y in itertools.product(self.elements, repeat=2):
            image = self.sideways(x, y)
            if image in inv:
                raise ValueError("the sideways map S is not injective")
            inv[image] = (x, y)
        return inv

    @classmethod
    def from_dict(cls, data: Mapping) -> "Biquandle":
        if "biquandle" in data and isinstance(data["biquandle"], Mapping):
            data = data["biquandle"]
        try:
            n, under, over = data["n"], data["under"], data["over"]
        except KeyError as exc:
            raise BiquandleFormatError(f"biquandle document is missing {exc.args[0]!r}") from None
        if not isinstance(under, list) or not isinstance(over, list):
            raise BiquandleFormatError("'under' and 'over' must be lists of rows")
        if len(under) != n:
            raise BiquandleFormatError(f"declared n={n} but the under table has {len(under)} rows")
        return cls(under, over, name=data.get("name", ""))

    def to_dict(self) -> dict:
        d = {"n": self.n, "under": [list(r) for r in self.under], "over": [list(r) for r in self.over]}
        if self.name:
            d["name"] = self.name
        return d


def _column_inverse(table, name):
    n = len(table)
    inv = [[0] * n for _ in range(n)]
    for y in range(n):
        for x in range(n):
            z = table[x][y]
            if inv[y][z - 1]:
                raise ValueError(f"column {y + 1} of the {name} table is not a bijection")
            inv[y][z - 1] = x + 1
    return tuple(tuple(r) for r in inv)


def alexander_biquandle(modulus: int, t: int, s: int) -> Biquandle:
    """Alexander biquandle on Z_modulus: x ▷̲ y = tx + (s - t)y, x ▷̄ y = sx.

    Element ``k`` stands for the residue ``k mod modulus`` (so ``modulus``
    itself is the class of zero).
    """
    ring = ModularRing(modulus)
    t, s = ring.coerce(t), ring.coerce(s)
    for name, v in (("t", t), ("s", s)):
        if not ring.is_unit(v):
            raise NotInvertibleError(f"{name}={v} is not a unit mod {modulus}")

    def label(r: int) -> int:
        return r % modulus or modulus

    under = [[label(t * x + (s - t) * y) for y in range(1, modulus + 1)] for x in range(1, modulus + 1)]
    over = [[label(s * x) for _ in range(1, modulus + 1)] for x in range(1, modulus + 1)]
    bq = Biquandle(under, over, name=f"alexander(Z{modulus}, t={t}, s={s})")
    report = validate_biquandle(bq)
    if not report.ok:  # pragma: no cover - Alexander tables always satisfy the axioms
        raise AssertionError(f"Alexander table failed validation: {report}")
    return bq


def trivial_biquandle(n: int = 1) -> Biquandle:
    rows = [[x] * n for x in range(1, n + 1)]
    return Biquandle(rows, rows, name=f"trivial({n})")


def _bijective(values) -> bool:
    values = list(values)
    return len(set(values)) == len(values)


def _iter_violations(bq: Biquandle) -> Iterator[tuple[str, tuple, str]]:
    els = bq.elements
    u, o = bq.under_op, bq.over_op
    for x in els:
        if u(x, x) != o(x, x):
            yield "i", (x,), f"{x} ▷̲ {x} = {u(x, x)} but {x} ▷̄ {x} = {o(x, x)}"
    for y in els:
        if not _bijective(o(x, y) for x in els):
            yield "ii.over", (y,), f"x -> x ▷̄ {y} is not a bijection"
    for y in els:
        if not _bijective(u(x, y) for x in els):
            yield "ii.under", (y,), f"x -> x ▷̲ {y} is not a bijection"
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in itertools.product(els, repeat=2):
        image = bq.sideways(x, y)
        if image in seen:
            yield "ii.S", (x, y), f"S{(x, y)} = S{seen[image]} = {image}"
        else:
            seen[image] = (x, y)
    for x, y, z in itertools.product(els, repeat=3):
        lhs, rhs = u(u(x, y), u(z, y)), u(u(x, z), o(y, z))
        if lhs != rhs:
            yield "iii.1", (x, y, z), f"(x▷̲y)▷̲(z▷̲y) = {lhs} but (x▷̲z)▷̲(y▷̄z) = {rhs}"
    for x, y, z in itertools.product(els, repeat=3):
        lhs, rhs = o(u(x, y), u(z, y)), u(o(x, z), o(y, z))
        if lhs != rhs:
            yield "iii.2", (x, y, z), f"(x▷̲y)▷̄(z▷̲y) = {lhs} but (x▷̄z)▷̲(y▷̄z) = {rhs}"
    for x, y, z in itertools.product(els, repeat=3):
        lhs, rhs = o(o(x, y), o(z, y)), o(o(x, z), u(y, z))
        if lhs != rhs:
            yield "iii.3", (x, y, z), f"(x▷̄y)▷̄(z▷̄y) = {lhs} but (x▷̄z)▷̄(y▷̲z) = {rhs}"


def validate_biquandle(bq: Biquandle) -> BiquandleReport:
    """Check every biquandle axiom and report each violated one.

    Each violation carries the lexicographically smallest witness for its
    axiom and the total number of witnesses.
    """
    first: dict[str, Violation] = {}
    for axiom, witness, detail in _iter_violations(bq):
        if axiom in first:
            v = first[axiom]
            first[axiom] = Violation(v.axiom, v.witness, v.detail, v.count + 1)
        else:
            first[axiom] = Violation(axiom, witness, detail)
    return BiquandleReport(tuple(first.values()))


def s_inverse_by_search(bq: Biquandle) -> dict[tuple[int, int], tuple[int, int]] | None:
    """Construct S^-1 explicitly by solving S(x, y) = (a, b) for every target.

    Returns ``None`` when some target has no preimage or several.  This is a
    second, independent route to the invertibility part of axiom (ii).
    """
    inv = {}
    for a, b in itertools.product(bq.elements, repeat=2):
        pre = [(x, y) for x in bq.elements for y in bq.elements
               if bq.over_op(y, x) == a and bq.under_op(x, y) == b]
        if len(pre) != 1:
            return None
        inv[(a, b)] = pre[0]
    for x, y in itertools.product(bq.elements, repeat=2):
        if inv[bq.sideways(x, y)] != (x, y):
            return None
    return inv


def is_quandle(bq: Biquandle) -> bool:
    return all(bq.over_op(x, y) == x for x in bq.elements for y in bq.elements)
