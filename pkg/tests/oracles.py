"""Independent reference implementations used only by the tests.

Nothing here imports the package's coloring, loop counting, bracket or search
code; diagrams are handled as plain tuples ``(sign, ui, oi, uo, oo)``.
"""

from __future__ import annotations

import itertools

import sympy as sp

A = sp.Symbol("A")


def plain(diagram):
    """Crossing tuples and free loop count of a package Diagram."""
    return [(c.sign, c.under_in, c.over_in, c.under_out, c.over_out) for c in diagram.crossings], diagram.free_loops


# -- colorings ----------------------------------------------------------------

def crossing_ok(sign, ui, oi, uo, oo, under, over):
    """The coloring rule written out per sign, 1-based colors."""
    op_u = lambda x, y: under[x - 1][y - 1]
    op_o = lambda x, y: over[x - 1][y - 1]
    if sign > 0:
        return uo == op_u(ui, oo) and oi == op_o(oo, ui)
    return ui == op_u(uo, oi) and oo == op_o(oi, uo)


def brute_colorings(crossings, free_loops, under, over):
    n = len(under)
    m = 2 * len(crossings)
    found = []
    for assignment in itertools.product(range(1, n + 1), repeat=m):
        col = (None,) + assignment
        if all(crossing_ok(s, col[a], col[b], col[c], col[d], under, over) for s, a, b, c, d in crossings):
            found.append(assignment)
    return len(found) * n ** free_loops, found


# -- loop counting by walking circles --------------------------------------------

def walk_loops(crossings, free_loops, state):
    """Count circles of a smoothing by walking them.

    ``state[j]`` is "A" (join under_in/over_out and over_in/under_out) or
    "B" (join under_in/over_in and under_out/over_out).
    """
    # end of a semiarc: (label, "head") where it enters a crossing, (label, "tail") where it leaves
    partner = {}
    for (s, ui, oi, uo, oo), choice in zip(crossings, state):
        ends = {"ui": (ui, "head"), "oi": (oi, "head"), "uo": (uo, "tail"), "oo": (oo, "tail")}
        pairs = [("ui", "oo"), ("oi", "uo")] if choice == "A" else [("ui", "oi"), ("uo", "oo")]
        for p, q in pairs:
            partner[ends[p]] = ends[q]
            partner[ends[q]] = ends[p]
    seen = set()
    circles = 0
    for label in range(1, 2 * len(crossings) + 1):
        if label in seen:
            continue
        circles += 1
        end = (label, "head")
        while True:
            seen.add(end[0])
            nxt = partner[end]
            other = (nxt[0], "tail" if nxt[1] == "head" else "head")
            if other[0] == label:
                break
            end = other
    return circles + free_loops


# -- recursive skein expansion of the Kauffman bracket ----------------------------

def _circles_from_joins(n_labels, joins):
    adj = {i: [] for i in range(1, n_labels + 1)}
    for a, b in joins:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v])
    return count


def skein_bracket(crossings, free_loops):
    """Unnormalized-by-writhe bracket with <O> = 1: expand one crossing at a time."""
    delta = -A ** 2 - A ** -2
    n_labels = 2 * len(crossings)

    def rec(rest, joins):
        if not rest:
            k = _circles_from_joins(n_labels, joins) if n_labels else 0
            return delta ** (k + free_loops - 1)
        (s, ui, oi, uo, oo), tail = rest[0], rest[1:]
        oriented = joins + [(ui, oo), (oi, uo)]
        unoriented = joins + [(ui, oi), (uo, oo)]
        return A ** s * rec(tail, oriented) + A ** (-s) * rec(tail, unoriented)

    return sp.expand(rec(list(crossings), []))


def kauffman_polynomial(crossings, free_loops):
    """Writhe-normalized bracket (-A^3)^(-writhe) <D>, with the unknot equal to 1."""
    writhe = sum(s for s, *_ in crossings)
    return sp.expand((-A ** 3) ** (-writhe) * skein_bracket(crossings, free_loops))


def as_terms(expr, shift=200):
    """Laurent polynomial in A as a sorted tuple of (exponent, coefficient)."""
    poly = sp.Poly(sp.expand(expr * A ** shift), A)
    return tuple(sorted((e[0] - shift, int(c)) for e, c in zip(poly.monoms(), poly.coeffs()) if c))


# -- brute-force bracket search ----------------------------------------------------

def brute_bracket_search(under, over, modulus):
    """Every unit pair of matrices satisfying the bracket conditions, checked naively."""
    n = len(under)
    units = [u for u in range(1, modulus) if sp.gcd(u, modulus) == 1]
    inv = {u: pow(u, -1, modulus) for u in units}
    u_op = lambda x, y: under[x][y] - 1
    o_op = lambda x, y: over[x][y] - 1
    cells = [(i, j) for i in range(n) for j in range(n)]
    hits = []
    for flat_a in itertools.product(units, repeat=n * n):
        a = {c: v for c, v in zip(cells, flat_a)}
        for flat_b in itertools.product(units, repeat=n * n):
            b = {c: v for c, v in zip(cells, flat_b)}
            ws = {(-a[i, i] ** 2 * inv[b[i, i]]) % modulus for i in range(n)}
            if len(ws) != 1:
                continue
            ds = {(-a[c] * inv[b[c]] - inv[a[c]] * b[c]) % modulus for c in cells}
            if len(ds) != 1:
                continue
            d = ds.pop()
            good = True
            for x, y, z in itertools.product(range(n), repeat=3):
                l1, l2, l3 = (x, y), (y, z), (u_op(x, y), o_op(z, y))
                r1, r2, r3 = (x, z), (o_op(y, x), o_op(z, x)), (u_op(x, z), u_op(y, z))
                eqs = [
                    a[l1] * a[l2] * a[l3] - a[r1] * a[r2] * a[r3],
                    a[l1] * b[l2] * b[l3] - b[r1] * b[r2] * a[r3],
                    b[l1] * a[l2] * b[l3] - b[r1] * a[r2] * b[r3],
                    a[l1] * a[l2] * b[l3] - (a[r1] * b[r2] * a[r3] + a[r1] * a[r2] * b[r3]
                                             + d * a[r1] * b[r2] * b[r3] + b[r1] * b[r2] * b[r3]),
                    (b[l1] * a[l2] * a[l3] + a[l1] * b[l2] * a[l3] + d * b[l1] * b[l2] * a[l3]
                     + b[l1] * b[l2] * b[l3]) - b[r1] * a[r2] * a[r3],
                ]
                if any(e % modulus for e in eqs):
                    good = False
                    break
            if good:
                hits.append((flat_a, flat_b))
    return hits


# -- state sum by recursion over crossings -------------------------------------------

def pair_colors(sign, ui, oi, uo, oo, col):
    """Color pair read at a crossing: (under_in, over_out) if positive, (under_out, over_in) if negative."""
    return (col[ui], col[oo]) if sign > 0 else (col[uo], col[oi])


def oracle_state_sum(crossings, free_loops, col, a, b, modulus, raw=False):
    """Bracket value of one coloring over Z_modulus; ``a``/``b`` are 1-based nested lists."""
    inv = lambda v: pow(v, -1, modulus)
    delta = (-a[0][0] * inv(b[0][0]) - inv(a[0][0]) * b[0][0]) % modulus
    w = (-a[0][0] ** 2 * inv(b[0][0])) % modulus
    n_labels = 2 * len(crossings)
    total = 0

    def rec(i, joins, coef):
        nonlocal total
        if i == len(crossings):
            k = (_circles_from_joins(n_labels, joins) if n_labels else 0) + free_loops
            total += coef * pow(delta, k if raw else k - 1, modulus)
            return
        s, ui, oi, uo, oo = crossings[i]
        x, y = pair_colors(s, ui, oi, uo, oo, col)
        ca, cb = a[x - 1][y - 1], b[x - 1][y - 1]
        if s < 0:
            ca, cb = inv(ca), inv(cb)
        rec(i + 1, joins + [(ui, oo), (oi, uo)], coef * ca % modulus)
        rec(i + 1, joins + [(ui, oi), (uo, oo)], coef * cb % modulus)

    rec(0, [], 1)
    p = sum(1 for c in crossings if c[0] > 0)
    n = len(crossings) - p
    wf = pow(w, n - p, modulus) if n >= p else pow(inv(w), p - n, modulus)
    return total * wf % modulus
