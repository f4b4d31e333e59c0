"""Biquandle brackets and their state-sum invariant.

A bracket assigns unit coefficients ``A[x][y]``, ``B[x][y]`` to color pairs.
At a crossing with color pair ``(x, y)`` and sign ``e`` the oriented
smoothing is weighted by ``A[x][y]**e`` and the unoriented one by
``B[x][y]**e``.  Each state also carries ``δ`` per loop and the whole sum is
scaled by ``w**(n - p)``.

Two loop normalizations are offered.  ``"unknot"`` (the default) uses
``δ**(k - 1)`` so a single unknot evaluates to 1; ``"raw"`` uses ``δ**k``.
They differ by the overall factor ``δ``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence

from .biquandle import Biquandle
from .coloring import Coloring, check_coloring, enumerate_colorings, render_u_polynomial
from .diagram import Diagram, loop_counts
from .ring import LaurentRing, ModularRing, NotInvertibleError, Ring, RingElement, ring_from_dict

__all__ = [
    "BiquandleBracket",
    "BracketError",
    "BracketReport",
    "BracketViolation",
    "InvariantValue",
    "NORMALIZATIONS",
    "validate_bracket",
    "make_bracket",
    "state_sum",
    "bracket_invariant",
    "is_cocycle_bracket",
    "kauffman_bracket",
    "kauffman_at",
    "constant_bracket",
]

NORMALIZATIONS = ("unknot", "raw")


class BracketError(ValueError):
    """Invalid bracket data; ``report`` holds the violations when axioms fail."""

    def __init__(self, message: str, report: Optional["BracketReport"] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BracketViolation:
    condition: str  # "unit", "i", "ii", "iii.1" .. "iii.5"
    witness: tuple
    detail: str
    count: int = 1

    def to_dict(self) -> dict:
        return {"condition": self.condition, "witness": list(self.witness), "detail": self.detail,
                "count": self.count}


@dataclass(frozen=True)
class BracketReport:
    violations: tuple[BracketViolation, ...]
    delta: Optional[RingElement] = None
    w: Optional[RingElement] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions_failed(self) -> list[str]:
        return [v.condition for v in self.violations]

    def to_dict(self, ring: Optional[Ring] = None) -> dict:
        enc = ring.encode if ring else (lambda v: v)
        return {
            "ok": self.ok,
            "delta": None if self.delta is None else enc(self.delta),
            "w": None if self.w is None else enc(self.w),
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class BiquandleBracket:
    """A validated bracket; build it with :func:`make_bracket`."""

    biquandle: Biquandle
    ring: Ring
    A: tuple[tuple[RingElement, ...], ...]
    B: tuple[tuple[RingElement, ...], ...]
    delta: RingElement
    w: RingElement
    name: str = field(default="", compare=False)

    def coefficient(self, smoothing: str, x: int, y: int, sign: int) -> RingElement:
        table = self.A if smoothing == "A" else self.B
        v = table[x - 1][y - 1]
        return v if sign > 0 else self.ring.invert(v)

    def to_dict(self) -> dict:
        enc = self.ring.encode
        d = {
            "ring": self.ring.to_dict(),
            "biquandle": self.biquandle.to_dict(),
            "A": [[enc(v) for v in row] for row in self.A],
            "B": [[enc(v) for v in row] for row in self.B],
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> "BiquandleBracket":
        try:
            ring = ring_from_dict(data["ring"])
            bq = Biquandle.from_dict(data["biquandle"])
            a_raw, b_raw = data["A"], data["B"]
        except KeyError as exc:
            raise BracketError(f"bracket document is missing {exc.args[0]!r}") from None
        a = [[ring.decode(v) for v in row] for row in a_raw]
        b = [[ring.decode(v) for v in row] for row in b_raw]
        return make_bracket(bq, ring, a, b, name=data.get("name", ""))

    def block_matrix(self) -> str:
        """The ``[A | B]`` block matrix, one row per element."""
        fmt = self.ring.format
        rows = []
        for ra, rb in zip(self.A, self.B):
            rows.append(" ".join(fmt(v) for v in ra) + " | " + " ".join(fmt(v) for v in rb))
        return "\n".join(rows)


def _coerce_matrix(ring: Ring, m: Sequence[Sequence[Any]], n: int, name: str) -> tuple[tuple[RingElement, ...], ...]:
    if len(m) != n or any(len(row) != n for row in m):
        raise BracketError(f"{name} must be a {n}x{n} matrix")
    return tuple(tuple(ring.coerce(v) for v in row) for row in m)


def _exchange_sides(bq: Biquandle, A, B, delta, ring: Ring, x: int, y: int, z: int):
    """Left and right sides of the five condition (iii) equations at ``(x, y, z)``."""
    u, o = bq.under_op, bq.over_op
    mul, add = ring.mul, ring.add

    def at(t, pair):
        return t[pair[0] - 1][pair[1] - 1]

    l1, l2, l3 = (x, y), (y, z), (u(x, y), o(z, y))
    r1, r2, r3 = (x, z), (o(y, x), o(z, x)), (u(x, z), u(y, z))

    def p(t1, t2, t3, left=True):
        a, b, c = (l1, l2, l3) if left else (r1, r2, r3)
        return mul(mul(at(t1, a), at(t2, b)), at(t3, c))

    eq = [
        (p(A, A, A), p(A, A, A, False)),
        (p(A, B, B), p(B, B, A, False)),
        (p(B, A, B), p(B, A, B, False)),
        (p(A, A, B),
         ring.sum([p(A, B, A, False), p(A, A, B, False), mul(delta, p(A, B, B, False)), p(B, B, B, False)])),
        (ring.sum([p(B, A, A), p(A, B, A), mul(delta, p(B, B, A)), p(B, B, B)]), p(B, A, A, False)),
    ]
    return eq


def validate_bracket(biquandle: Biquandle, ring: Ring, a_matrix, b_matrix) -> BracketReport:
    """Check the unit condition and conditions (i)-(iii); one violation per condition,
    with the first witness in lexicographic order and the number of failures."""
    n = biquandle.n
    A = _coerce_matrix(ring, a_matrix, n, "A")
    B = _coerce_matrix(ring, b_matrix, n, "B")
    fmt = ring.format
    found: dict[str, BracketViolation] = {}

    def note(cond, witness, detail):
        if cond in found:
            v = found[cond]
            found[cond] = BracketViolation(v.condition, v.witness, v.detail, v.count + 1)
        else:
            found[cond] = BracketViolation(cond, witness, detail)

    for name, t in (("A", A), ("B", B)):
        for x, y in itertools.product(biquandle.elements, repeat=2):
            if not ring.is_unit(t[x - 1][y - 1]):
                note(f"unit.{name}", (x, y), f"{name}[{x}][{y}] = {fmt(t[x - 1][y - 1])} is not a unit")
    if found:
        return BracketReport(tuple(found.values()))

    inv = ring.invert
    w_vals = {x: ring.neg(ring.mul(ring.power(A[x - 1][x - 1], 2), inv(B[x - 1][x - 1]))) for x in biquandle.elements}
    w = w_vals[1]
    for x, v in w_vals.items():
        if v != w:
            note("i", (1, x), f"-A[{x}][{x}]^2 B[{x}][{x}]^-1 = {fmt(v)} differs from the value {fmt(w)} at x=1")
    d_vals = {}
    for x, y in itertools.product(biquandle.elements, repeat=2):
        a, b = A[x - 1][y - 1], B[x - 1][y - 1]
        d_vals[x, y] = ring.neg(ring.add(ring.mul(a, inv(b)), ring.mul(inv(a), b)))
    delta = d_vals[1, 1]
    for (x, y), v in d_vals.items():
        if v != delta:
            note("ii", (x, y), f"δ at ({x},{y}) is {fmt(v)} but {fmt(delta)} at (1,1)")
    for x, y, z in itertools.product(biquandle.elements, repeat=3):
        for i, (lhs, rhs) in enumerate(_exchange_sides(biquandle, A, B, delta, ring, x, y, z), 1):
            if lhs != rhs:
                note(f"iii.{i}", (x, y, z), f"left side {fmt(lhs)} but right side {fmt(rhs)}")
    order = ["unit.A", "unit.B", "i", "ii"] + [f"iii.{i}" for i in range(1, 6)]
    viol = tuple(found[k] for k in order if k in found)
    consistent = not any(k in found for k in ("i", "ii"))
    return BracketReport(viol, delta if consistent else None, w if consistent else None)


def make_bracket(biquandle: Biquandle, ring: Ring, a_matrix, b_matrix, name: str = "") -> BiquandleBracket:
    """Validate and build a bracket, raising :class:`BracketError` on any violation."""
    report = validate_bracket(biquandle, ring, a_matrix, b_matrix)
    if not report.ok:
        first = report.violations[0]
        raise BracketError(f"bracket condition {first.condition} fails at {first.witness}: {first.detail}", report)
    n = biquandle.n
    return BiquandleBracket(biquandle, ring, _coerce_matrix(ring, a_matrix, n, "A"),
                            _coerce_matrix(ring, b_matrix, n, "B"), report.delta, report.w, name)


def is_cocycle_bracket(beta: BiquandleBracket) -> bool:
    return beta.A == beta.B


def constant_bracket(biquandle: Biquandle, ring: Ring, a: RingElement, b: RingElement) -> BiquandleBracket:
    n = biquandle.n
    return make_bracket(biquandle, ring, [[a] * n for _ in range(n)], [[b] * n for _ in range(n)])


# -- state sums ------------------------------------------------------------

def _loop_table(d: Diagram) -> tuple[int, ...]:
    return _cached_loops(d)


@lru_cache(maxsize=256)
def _cached_loops(d: Diagram) -> tuple[int, ...]:
    return tuple(loop_counts(d))


def _check_normalization(normalization: str) -> None:
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")


def _state_sum_unchecked(d: Diagram, f: Coloring, beta: BiquandleBracket, normalization: str) -> RingElement:
    ring = beta.ring
    shift = 1 if normalization == "unknot" else 0
    loops = _loop_table(d)
    coeffs = []
    for c in d.crossings:
        pu, po = c.pair_labels
        x, y = f[pu], f[po]
        coeffs.append((beta.coefficient("A", x, y, c.sign), beta.coefficient("B", x, y, c.sign)))
    dpow = [ring.power(beta.delta, max(k - shift, 0)) for k in range(max(loops) + 1)]
    total = ring.zero()
    ncross = len(coeffs)
    for idx, k in enumerate(loops):
        term = dpow[k]
        for j in range(ncross):
            term = ring.mul(term, coeffs[j][idx >> j & 1])
        total = ring.add(total, term)
    p = sum(1 for c in d.crossings if c.sign > 0)
    n = len(d.crossings) - p
    return ring.mul(total, ring.power(beta.w, n - p))


def state_sum(d: Diagram, f: Coloring, beta: BiquandleBracket, normalization: str = "unknot") -> RingElement:
    """The bracket value of one colored diagram.

    States are visited in binary-counter order (bit ``j`` set means crossing
    ``j`` is B-smoothed) and accumulated in that order.
    """
    _check_normalization(normalization)
    problems = check_coloring(d, beta.biquandle, f)
    if problems:
        raise BracketError("not a valid coloring: " + "; ".join(problems))
    return _state_sum_unchecked(d, f, beta, normalization)


def _format_exponent(ring: Ring, v: RingElement) -> str:
    s = ring.format(v)
    return f"({s})" if (" " in s or s.startswith("-")) else s


@dataclass(frozen=True)
class InvariantValue:
    """Multiset of ring values, compared as a multiset."""

    ring: Ring
    counts: tuple[tuple[RingElement, int], ...]  # sorted by the ring's canonical order

    @classmethod
    def from_values(cls, ring: Ring, values) -> "InvariantValue":
        c = Counter(values)
        return cls(ring, tuple(sorted(c.items(), key=lambda kv: ring.sort_key(kv[0]))))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.counts)

    def as_counter(self) -> Counter:
        return Counter(dict(self.counts))

    def values(self) -> list[RingElement]:
        return [v for v, m in self.counts for _ in range(m)]

    def polynomial(self) -> str:
        return render_u_polynomial((_format_exponent(self.ring, v), m) for v, m in self.counts)

    def multiset_text(self) -> str:
        return "{" + ", ".join(f"{self.ring.format(v)}: {m}" for v, m in self.counts) + "}"

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.to_dict(),
            "multiset": [[self.ring.encode(v), m] for v, m in self.counts],
            "polynomial": self.polynomial(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "InvariantValue":
        ring = ring_from_dict(data["ring"])
        vals = []
        for v, m in data["multiset"]:
            vals += [ring.decode(v)] * m
        return cls.from_values(ring, vals)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, InvariantValue):
            return self.ring == other.ring and self.counts == other.counts
        if isinstance(other, (Counter, dict)):
            return self.as_counter() == Counter(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.counts)


def _values_chunk(d: Diagram, beta: BiquandleBracket, colorings: Sequence[Coloring],
                  normalization: str) -> list[RingElement]:
    return [_state_sum_unchecked(d, f, beta, normalization) for f in colorings]


def bracket_invariant(d: Diagram, beta: BiquandleBracket, normalization: str = "unknot",
                      workers: int = 1) -> InvariantValue:
    """Multiset of state sums over all colorings of ``d``.

    With ``workers > 1`` the colorings are split into contiguous chunks
    evaluated in separate processes; chunk results are joined in order.
    """
    _check_normalization(normalization)
    colorings = enumerate_colorings(d, beta.biquandle)
    if workers > 1 and len(colorings) > 1:
        size = -(-len(colorings) // workers)
        chunks = [colorings[i:i + size] for i in range(0, len(colorings), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_values_chunk, [d] * len(chunks), [beta] * len(chunks), chunks,
                                  [normalization] * len(chunks)))
        values = [v for part in parts for v in part]
    else:
        values = _values_chunk(d, beta, colorings, normalization)
    return InvariantValue.from_values(beta.ring, values)


def kauffman_bracket(ring: Optional[Ring] = None, value: Optional[RingElement] = None) -> BiquandleBracket:
    """One-element bracket with ``A = value`` and ``B = value**-1``.

    Defaults to the formal variable ``A`` over the Laurent ring.
    """
    ring = ring or LaurentRing()
    if value is None:
        if not isinstance(ring, LaurentRing):
            raise BracketError("the formal Kauffman bracket needs the Laurent ring")
        value = ring.variable()
    value = ring.coerce(value)
    if not ring.is_unit(value):
        raise NotInvertibleError(f"{ring.format(value)} is not a unit in {ring}")
    one = Biquandle([[1]], [[1]], name="trivial(1)")
    return make_bracket(one, ring, [[value]], [[ring.invert(value)]], name="kauffman")


def kauffman_at(d: Diagram, value: RingElement, ring: Ring, normalization: str = "unknot") -> RingElement:
    """Kauffman bracket of ``d`` (writhe-normalized) with ``A`` set to ``value``."""
    beta = kauffman_bracket(ring, value)
    f = Coloring((1,) * d.semiarc_count, (1,) * d.free_loops)
    _check_normalization(normalization)
    return _state_sum_unchecked(d, f, beta, normalization)
