"""Exhaustive search for biquandle brackets over a finite biquandle and ``Z_n``.

Candidates are pairs of unit matrices ``(A, B)`` ordered lexicographically by
the row-major entries of ``A`` and then of ``B``.  The pruned search fixes
``A`` first, then fills ``B`` only from entries that keep the loop value
``δ`` and the kink value ``w`` consistent, so the cubic exchange check only
runs on candidates that already satisfy conditions (i) and (ii).  Statistics
are computed by counting, so pruned and unpruned runs report the same numbers.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .biquandle import Biquandle
from .bracket import BiquandleBracket, make_bracket
from .ring import ModularRing, Ring

__all__ = ["SearchStats", "SearchResult", "SearchError", "search_brackets", "search_partition",
           "automorphisms", "default_workers"]


class SearchError(ValueError):
    pass


@dataclass
class SearchStats:
    """Candidates by the first condition they fail."""

    candidates: int = 0
    pruned_i: int = 0
    pruned_ii: int = 0
    failed_iii: int = 0
    found: int = 0
    deduplicated: int = 0

    def merge(self, other: "SearchStats") -> None:
        for k in self.__dataclass_fields__:
            setattr(self, k, getattr(self, k) + getattr(other, k))

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    def summary(self) -> str:
        s = (f"candidates {self.candidates}, pruned at (i) {self.pruned_i}, pruned at (ii) {self.pruned_ii}, "
             f"failed (iii) {self.failed_iii}, found {self.found}")
        if self.deduplicated:
            s += f", dropped as relabelings {self.deduplicated}"
        return s


@dataclass
class SearchResult:
    brackets: list[BiquandleBracket]
    stats: SearchStats
    complete: bool = True  # False when a limit stopped the search early

    def __iter__(self):
        return iter(self.brackets)

    def __len__(self) -> int:
        return len(self.brackets)


def default_workers() -> int:
    env = os.environ.get("BRACKETFORGE_THREADS")
    if env and env.isdigit() and int(env) > 0:
        return int(env)
    return 1


class _Tables:
    """Integer lookup tables shared by both search paths."""

    def __init__(self, x: Biquandle, ring: ModularRing):
        self.n = x.n
        self.mod = m = ring.n
        self.units = ring.units()
        inv = {u: pow(u, -1, m) for u in self.units}
        self.inv = inv
        self.delta = {(a, b): (-a * inv[b] - inv[a] * b) % m for a in self.units for b in self.units}
        self.kink = {(a, b): (-a * a * inv[b]) % m for a in self.units for b in self.units}
        n = self.n
        u, o = x.under_op, x.over_op
        # flat cell indices (row-major, 0-based) of the six pairs in each exchange equation
        self.triples = []
        for a, b, c in itertools.product(range(1, n + 1), repeat=3):
            cells = [(a, b), (b, c), (u(a, b), o(c, b)), (a, c), (o(b, a), o(c, a)), (u(a, c), u(b, c))]
            self.triples.append(tuple((p - 1) * n + (q - 1) for p, q in cells))
        self.diag = [i * n + i for i in range(n)]
        self.off = [c for c in range(n * n) if c not in self.diag]

    def exchange_ok(self, A: Sequence[int], B: Sequence[int], d: int) -> bool:
        m = self.mod
        for l1, l2, l3, r1, r2, r3 in self.triples:
            if (A[l1] * A[l2] * A[l3] - A[r1] * A[r2] * A[r3]) % m:
                return False
            if (A[l1] * B[l2] * B[l3] - B[r1] * B[r2] * A[r3]) % m:
                return False
            if (B[l1] * A[l2] * B[l3] - B[r1] * A[r2] * B[r3]) % m:
                return False
            rhs4 = (A[r1] * B[r2] * A[r3] + A[r1] * A[r2] * B[r3] + d * A[r1] * B[r2] * B[r3]
                    + B[r1] * B[r2] * B[r3])
            if (A[l1] * A[l2] * B[l3] - rhs4) % m:
                return False
            lhs5 = (B[l1] * A[l2] * A[l3] + A[l1] * B[l2] * A[l3] + d * B[l1] * B[l2] * A[l3]
                    + B[l1] * B[l2] * B[l3])
            if (lhs5 - B[r1] * A[r2] * A[r3]) % m:
                return False
        return True


def automorphisms(x: Biquandle) -> list[tuple[int, ...]]:
    """Permutations ``p`` (``p[i-1]`` is the image of ``i``) preserving both operations."""
    n = x.n
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if all(perm[x.under_op(a, b) - 1] == x.under_op(perm[a - 1], perm[b - 1])
               and perm[x.over_op(a, b) - 1] == x.over_op(perm[a - 1], perm[b - 1])
               for a in range(1, n + 1) for b in range(1, n + 1)):
            out.append(perm)
    return out


def _relabel(flat: Sequence[int], perm: Sequence[int], n: int) -> tuple[int, ...]:
    out = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            out[(perm[i] - 1) * n + perm[j] - 1] = flat[i * n + j]
    return tuple(out)


def _is_orbit_minimum(A, B, autos, n) -> bool:
    key = (tuple(A), tuple(B))
    return all((_relabel(A, p, n), _relabel(B, p, n)) >= key for p in autos)


def _pruned(t: _Tables, a_prefix: tuple[int, ...], limit: Optional[int], stats: SearchStats,
            autos) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    n2 = t.n * t.n
    units = t.units
    nu = len(units)
    free = n2 - len(a_prefix)
    found = 0
    for rest in itertools.product(units, repeat=free):
        A = a_prefix + rest
        stats.candidates += nu ** n2
        # count B completions by first failing condition
        kink_groups: dict[int, int] = {}
        by_dw: dict[tuple[int, int], int] = {}
        diag_counts = []
        for c in t.diag:
            cnt: dict[tuple[int, int], int] = {}
            for b in units:
                key = (t.delta[A[c], b], t.kink[A[c], b])
                cnt[key] = cnt.get(key, 0) + 1
            diag_counts.append(cnt)
        off_counts = []
        for c in t.off:
            cnt2: dict[int, int] = {}
            for b in units:
                dv = t.delta[A[c], b]
                cnt2[dv] = cnt2.get(dv, 0) + 1
            off_counts.append(cnt2)
        ws = {k[1] for cnt in diag_counts for k in cnt}
        pass_i = 0
        for wv in ws:
            pass_i += math.prod(sum(v for k, v in cnt.items() if k[1] == wv) for cnt in diag_counts)
        pass_i *= nu ** len(t.off)
        pass_ii = 0
        for dv, wv in {k for cnt in diag_counts for k in cnt}:
            pass_ii += (math.prod(cnt.get((dv, wv), 0) for cnt in diag_counts)
                        * math.prod(cnt.get(dv, 0) for cnt in off_counts))
        stats.pruned_i += nu ** n2 - pass_i
        stats.pruned_ii += pass_i - pass_ii
        if pass_ii == 0:
            continue
        # enumerate B in lexicographic order among those passing (i) and (ii)
        choices_by_dw = {}
        for dv, wv in sorted({k for cnt in diag_counts for k in cnt}):
            cells = []
            for c in range(n2):
                if c in t.diag:
                    cells.append([b for b in units if t.delta[A[c], b] == dv and t.kink[A[c], b] == wv])
                else:
                    cells.append([b for b in units if t.delta[A[c], b] == dv])
            if all(cells):
                choices_by_dw[dv, wv] = cells
        tested = 0
        hits = []
        for (dv, wv), cells in choices_by_dw.items():
            for B in itertools.product(*cells):
                tested += 1
                if t.exchange_ok(A, B, dv):
                    hits.append((B, dv))
        hits.sort()
        stats.failed_iii += tested - len(hits)
        for B, dv in hits:
            stats.found += 1
            if autos is not None and not _is_orbit_minimum(A, B, autos, t.n):
                stats.deduplicated += 1
                continue
            yield A, B, dv
            found += 1
            if limit is not None and found >= limit:
                return


def _unpruned(t: _Tables, a_prefix: tuple[int, ...], limit: Optional[int], stats: SearchStats,
              autos) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    n2 = t.n * t.n
    units = t.units
    diag, delta, kink = t.diag, t.delta, t.kink
    found = 0
    for rest in itertools.product(units, repeat=n2 - len(a_prefix)):
        A = a_prefix + rest
        for B in itertools.product(units, repeat=n2):
            stats.candidates += 1
            w0 = kink[A[0], B[0]]
            if any(kink[A[c], B[c]] != w0 for c in diag):
                stats.pruned_i += 1
                continue
            d0 = delta[A[0], B[0]]
            if any(delta[A[c], B[c]] != d0 for c in range(n2)):
                stats.pruned_ii += 1
                continue
            if not t.exchange_ok(A, B, d0):
                stats.failed_iii += 1
                continue
            stats.found += 1
            if autos is not None and not _is_orbit_minimum(A, B, autos, t.n):
                stats.deduplicated += 1
                continue
            yield A, B, d0
            found += 1
            if limit is not None and found >= limit:
                return


def search_partition(x: Biquandle, ring: ModularRing, a_prefix: tuple[int, ...], prune: bool = True,
                     limit: Optional[int] = None, dedup: bool = False):
    """Search the candidates whose ``A`` matrix starts with ``a_prefix`` (row-major).

    Returns ``(solutions, stats, complete)`` with solutions as flat ``(A, B)`` tuples.
    """
    t = _Tables(x, ring)
    stats = SearchStats()
    autos = automorphisms(x) if dedup else None
    gen = (_pruned if prune else _unpruned)(t, tuple(a_prefix), limit, stats, autos)
    sols = [(A, B) for A, B, _ in gen]
    complete = limit is None or len(sols) < limit
    return sols, stats, complete


def _check_inputs(x: Biquandle, ring: Ring) -> None:
    if not isinstance(ring, ModularRing):
        raise SearchError(f"bracket search needs a finite ring Z_n, got {ring}")


def search_brackets(x: Biquandle, ring: Ring, *, prune: bool = True, limit: Optional[int] = None,
                    dedup: bool = False, workers: Optional[int] = None, prefix_length: int = 1,
                    progress: Optional[Callable[[int, int], None]] = None) -> SearchResult:
    """All brackets over ``x`` and ``ring`` (or the first ``limit``) in candidate order.

    The space is split by the first ``prefix_length`` entries of ``A``; with
    ``workers > 1`` the parts run in separate processes and are merged in
    prefix order.  ``progress(done, total)`` is called after each part.
    """
    _check_inputs(x, ring)
    if limit is not None and limit < 1:
        raise SearchError("limit must be positive")
    workers = workers or default_workers()
    units = ring.units()
    prefix_length = max(0, min(prefix_length, x.n * x.n))
    prefixes = list(itertools.product(units, repeat=prefix_length))
    stats = SearchStats()
    sols: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    complete = True

    def absorb(part):
        nonlocal complete
        part_sols, part_stats, part_complete = part
        stats.merge(part_stats)
        sols.extend(part_sols)
        if limit is not None and len(sols) >= limit:
            complete = False
            return True
        return False

    if workers > 1 and len(prefixes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(search_partition, x, ring, p, prune, limit, dedup) for p in prefixes]
            for i, fut in enumerate(futures):
                stop = absorb(fut.result())
                if progress:
                    progress(i + 1, len(prefixes))
                if stop:
                    for f in futures[i + 1:]:
                        f.cancel()
                    break
    else:
        for i, p in enumerate(prefixes):
            remaining = None if limit is None else limit - len(sols)
            stop = absorb(search_partition(x, ring, p, prune, remaining, dedup))
            if progress:
                progress(i + 1, len(prefixes))
            if stop:
                break
    if limit is not None:
        sols = sols[:limit]
    n = x.n
    brackets = []
    for A, B in sols:
        rows_a = [list(A[i * n:(i + 1) * n]) for i in range(n)]
        rows_b = [list(B[i * n:(i + 1) * n]) for i in range(n)]
        brackets.append(make_bracket(x, ring, rows_a, rows_b))
    return SearchResult(brackets, stats, complete)
