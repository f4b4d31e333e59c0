"""Biquandle colorings of diagrams and the invariants built from them.

At a crossing with color pair ``(x, y)`` (see :attr:`Crossing.pair_labels`)
the under strand's other semiarc gets ``x ▷̲ y`` and the over strand's other
semiarc gets ``y ▷̄ x``.  For a positive crossing this reads
``under_out = under_in ▷̲ over_out`` and ``over_in = over_out ▷̄ under_in``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .biquandle import Biquandle
from .diagram import Diagram
from .ring import ModularRing, NotInvertibleError

__all__ = [
    "Coloring",
    "ColoringError",
    "enumerate_colorings",
    "counting_invariant",
    "image_closure",
    "image_enhancement",
    "alexander_count",
    "alexander_system",
    "solution_count_mod",
    "check_coloring",
    "render_u_polynomial",
]


class ColoringError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Coloring:
    """Colors of the semiarcs ``1..m`` (``arcs[i]`` colors label ``i+1``) and of the free loops."""

    arcs: tuple[int, ...]
    loops: tuple[int, ...] = ()

    def __getitem__(self, label: int) -> int:
        if label < 1:
            raise KeyError(label)
        return self.arcs[label - 1]

    def image(self) -> frozenset[int]:
        return frozenset(self.arcs) | frozenset(self.loops)

    def as_dict(self) -> dict[int, int]:
        return {i + 1: c for i, c in enumerate(self.arcs)}

    def to_dict(self) -> dict:
        return {"semiarcs": list(self.arcs), "loops": list(self.loops)}


def check_coloring(d: Diagram, x: Biquandle, f: Coloring) -> list[str]:
    """Problems with ``f`` as an X-coloring of ``d``; empty when valid."""
    problems = []
    if len(f.arcs) != d.semiarc_count:
        return [f"coloring has {len(f.arcs)} semiarc colors, diagram has {d.semiarc_count} semiarcs"]
    if len(f.loops) != d.free_loops:
        return [f"coloring has {len(f.loops)} loop colors, diagram has {d.free_loops} free loops"]
    for c in list(f.arcs) + list(f.loops):
        if not 1 <= c <= x.n:
            return [f"color {c} is not an element of the biquandle"]
    for i, c in enumerate(d.crossings, 1):
        pu, po = c.pair_labels
        tu, to = c.image_labels
        a, b = f[pu], f[po]
        if f[tu] != x.under_op(a, b):
            problems.append(f"crossing {i}: semiarc {tu} has {f[tu]}, expected {a} ▷̲ {b} = {x.under_op(a, b)}")
        if f[to] != x.over_op(b, a):
            problems.append(f"crossing {i}: semiarc {to} has {f[to]}, expected {b} ▷̄ {a} = {x.over_op(b, a)}")
    return problems


def _arc_solutions(d: Diagram, x: Biquandle) -> list[tuple[int, ...]]:
    """All consistent semiarc colorings, by backtracking with propagation."""
    m = d.semiarc_count
    if m == 0:
        return [()]
    U, O = x.under, x.over
    try:
        uinv = x.under_column_inverse
        oinv = x.over_column_inverse
    except ValueError:
        uinv = oinv = None
    try:
        sinv = x.sideways_inverse
    except ValueError:
        sinv = None
    # per crossing: (pu, po, tu, to); per label: crossings touching it
    rules = [c.pair_labels + c.image_labels for c in d.crossings]
    touching: list[list[int]] = [[] for _ in range(m + 1)]
    for k, r in enumerate(rules):
        for lab in set(r):
            touching[lab].append(k)

    color = [0] * (m + 1)
    trail: list[int] = []

    def assign(lab: int, val: int, queue: list[int]) -> bool:
        cur = color[lab]
        if cur:
            return cur == val
        color[lab] = val
        trail.append(lab)
        queue.extend(touching[lab])
        return True

    def propagate(queue: list[int]) -> bool:
        while queue:
            pu, po, tu, to = rules[queue.pop()]
            a, b, c, e = color[pu], color[po], color[tu], color[to]
            if a and b:
                if not assign(tu, U[a - 1][b - 1], queue) or not assign(to, O[b - 1][a - 1], queue):
                    return False
                continue
            if c and e and sinv is not None:
                a2, b2 = sinv[(e, c)]
                if not assign(pu, a2, queue) or not assign(po, b2, queue):
                    return False
                continue
            if a and e and oinv is not None:
                if not assign(po, oinv[a - 1][e - 1], queue):
                    return False
                continue
            if b and c and uinv is not None:
                if not assign(pu, uinv[b - 1][c - 1], queue):
                    return False
        return True

    solutions: list[tuple[int, ...]] = []

    def search(start: int) -> None:
        lab = start
        while lab <= m and color[lab]:
            lab += 1
        if lab > m:
            # everything assigned; propagation has already checked every crossing touched,
            # but a final check keeps non-invertible tables honest
            for pu, po, tu, to in rules:
                a, b = color[pu], color[po]
                if color[tu] != U[a - 1][b - 1] or color[to] != O[b - 1][a - 1]:
                    return
            solutions.append(tuple(color[1:]))
            return
        for val in x.elements:
            mark = len(trail)
            queue: list[int] = []
            if assign(lab, val, queue) and propagate(queue):
                search(lab + 1)
            while len(trail) > mark:
                color[trail.pop()] = 0

    search(1)
    solutions.sort()
    return solutions


def enumerate_colorings(d: Diagram, x: Biquandle) -> list[Coloring]:
    """Every X-coloring of ``d`` in lexicographic order; free loops take any color."""
    arcs = _arc_solutions(d, x)
    loop_choices = list(itertools.product(x.elements, repeat=d.free_loops))
    return [Coloring(a, lp) for a in arcs for lp in loop_choices]


def counting_invariant(d: Diagram, x: Biquandle) -> int:
    return len(_arc_solutions(d, x)) * x.n ** d.free_loops


def image_closure(x: Biquandle, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subset containing ``seed`` closed under both operations and their column inverses."""
    ops = [x.under, x.over]
    try:
        ops += [x.under_column_inverse, x.over_column_inverse]
    except ValueError:
        pass
    closed = set(seed)
    frontier = list(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(closed):
                for t in ops:
                    new.add(t[a - 1][b - 1])
                    new.add(t[b - 1][a - 1])
        new -= closed
        closed |= new
        frontier = list(new)
    return frozenset(closed)


def image_enhancement(d: Diagram, x: Biquandle) -> Counter:
    """Multiset (as a Counter) of image sub-biquandle sizes over all colorings."""
    sizes: Counter = Counter()
    cache: dict[frozenset[int], int] = {}
    for f in enumerate_colorings(d, x):
        img = f.image()
        if img not in cache:
            cache[img] = len(image_closure(x, img))
        sizes[cache[img]] += 1
    return sizes


def render_u_polynomial(terms: Iterable[tuple[str, int]]) -> str:
    """Render ``(exponent, multiplicity)`` pairs, already ordered, as ``3u + 6u^3``."""
    parts = []
    for exp, mult in terms:
        if mult == 0:
            continue
        mono = "u" if exp == "1" else f"u^{exp}"
        parts.append(mono if mult == 1 else f"{mult}{mono}")
    return " + ".join(parts) if parts else "0"


# -- Alexander biquandles: counting by linear algebra ----------------------

def alexander_system(d: Diagram, modulus: int, t: int, s: int) -> list[list[int]]:
    """Coefficient rows of the homogeneous coloring system over ``Z_modulus``.

    For ``x ▷̲ y = t x + (s - t) y`` and ``x ▷̄ y = s x`` each crossing with pair
    ``(x, y)`` contributes ``t x + (s - t) y - under_image = 0`` and
    ``s y - over_image = 0``.  Columns are semiarcs ``1..m``.
    """
    ring = ModularRing(modulus)
    for name, v in (("t", t), ("s", s)):
        if not ring.is_unit(v % modulus):
            raise NotInvertibleError(f"{name} = {v} is not a unit mod {modulus}")
    m = d.semiarc_count
    rows = []
    for c in d.crossings:
        pu, po = c.pair_labels
        tu, to = c.image_labels
        r1 = [0] * m
        r1[pu - 1] += t
        r1[po - 1] += s - t
        r1[tu - 1] -= 1
        r2 = [0] * m
        r2[po - 1] += s
        r2[to - 1] -= 1
        rows.append([v % modulus for v in r1])
        rows.append([v % modulus for v in r2])
    return rows


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _valuation(v: int, p: int, cap: int) -> int:
    if v == 0:
        return cap
    k = 0
    while v % p == 0 and k < cap:
        v //= p
        k += 1
    return k


def _count_prime_power(rows: list[list[int]], columns: int, p: int, e: int) -> int:
    q = p ** e
    a = [[v % q for v in row] for row in rows]
    free = columns
    count = 1
    while a and free:
        # the entry of least valuation divides every other entry of the block
        best = None
        for i, row in enumerate(a):
            for j, v in enumerate(row):
                if v:
                    k = _valuation(v, p, e)
                    if best is None or k < best[0]:
                        best = (k, i, j)
        if best is None:
            break
        k, i, j = best
        pk = p ** k
        unit_inv = pow(a[i][j] // pk, -1, q)
        pivot_row = [v * unit_inv % q for v in a[i]]  # pivot becomes p^k
        rest = []
        for r, row in enumerate(a):
            if r == i:
                continue
            f = row[j] // pk
            rest.append([(x - f * y) % q for x, y in zip(row, pivot_row)])
        # column operations clear the pivot row without touching other rows
        a = [row[:j] + row[j + 1:] for row in rest]
        count *= pk
        free -= 1
    return count * q ** free


def solution_count_mod(rows: Sequence[Sequence[int]], columns: int, modulus: int) -> int:
    """Number of solutions of ``M v = 0`` over ``Z_modulus``.

    Counted separately modulo each prime power of ``modulus``; over
    ``Z_(p^e)`` elimination with a pivot of least valuation gives a diagonal
    form whose entry ``p^k`` contributes ``p^k`` solutions in its column.
    """
    if modulus == 1:
        return 1
    rows = [list(r) for r in rows]
    return math.prod(_count_prime_power(rows, columns, p, e) for p, e in _prime_powers(modulus))


def alexander_count(d: Diagram, modulus: int, t: int, s: int) -> int:
    """Coloring count by the Alexander biquandle ``(Z_modulus, t, s)`` via linear algebra."""
    rows = alexander_system(d, modulus, t, s)
    return solution_count_mod(rows, d.semiarc_count, modulus) * modulus ** d.free_loops
