"""Hypothesis strategies for diagrams."""

from hypothesis import strategies as st

from bracketforge.diagram import Crossing, Diagram, add_kink, braid_closure, poke_r2


@st.composite
def role_diagrams(draw, max_crossings=8):
    """Any closed role-labelled diagram (not necessarily planar)."""
    c = draw(st.integers(1, max_crossings))
    labels = list(range(1, 2 * c + 1))
    ins = draw(st.permutations(labels))
    outs = draw(st.permutations(labels))
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=c, max_size=c))
    loops = draw(st.integers(0, 2))
    crossings = [Crossing(signs[i], ins[2 * i], ins[2 * i + 1], outs[2 * i], outs[2 * i + 1]) for i in range(c)]
    return Diagram(tuple(crossings), loops)


@st.composite
def braid_diagrams(draw, max_len=7, max_strands=4):
    k = draw(st.integers(2, max_strands))
    gens = [g for i in range(1, k) for g in (i, -i)]
    word = draw(st.lists(st.sampled_from(gens), min_size=1, max_size=max_len))
    return braid_closure(word, k)


@st.composite
def moves(draw, d):
    """A random Reidemeister I or II move applicable to ``d``."""
    labels = list(d.semiarcs)
    targets = labels + ([None] if d.free_loops else [])
    kind = draw(st.sampled_from(["kink", "poke"]))
    sign = draw(st.sampled_from([1, -1]))
    if kind == "kink" or len(targets) + (d.free_loops >= 2) < 2:
        return ("kink", draw(st.sampled_from(targets)), sign, draw(st.booleans()))
    a = draw(st.sampled_from(targets))
    b = draw(st.sampled_from([t for t in targets if t != a or (t is None and d.free_loops >= 2)]))
    return ("poke", a, b, sign, draw(st.booleans()))


def apply_move(d, move):
    if move[0] == "kink":
        return add_kink(d, move[1], move[2], over_first=move[3])
    return poke_r2(d, move[1], move[2], sign=move[3], reverse=move[4])
