"""Oriented link diagrams in role-explicit PD form.

Each crossing lists its four semiarcs by role: the under strand's incoming and
outgoing semiarcs and the over strand's incoming and outgoing semiarcs, plus a
sign.  Text format, one crossing per ``;``-separated entry or line::

    # positive Hopf link
    + [1, 3, 2, 4] ; + [4, 2, 3, 1]
    loops: 0

where the bracket lists ``[under_in, over_in, under_out, over_out]``.
Crossingless unknotted components are carried as a count of free loops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

__all__ = [
    "Crossing",
    "Diagram",
    "DiagramError",
    "PDParseError",
    "parse_pd",
    "format_pd",
    "crossing_counts",
    "enumerate_states",
    "smooth_and_count_loops",
    "loop_counts",
    "add_kink",
    "poke_r2",
    "disjoint_union",
    "mirror",
    "braid_closure",
    "unlink",
]

ROLES = ("under_in", "over_in", "under_out", "over_out")


class DiagramError(ValueError):
    """Structurally invalid diagram, or a bad argument to a diagram surgery."""


class PDParseError(DiagramError):
    """Error in PD text.  ``kind`` is one of ``empty``, ``syntax``, ``sign``,
    ``duplicate``, ``dangling``, ``missing``."""

    def __init__(self, kind: str, message: str, line: Optional[int] = None, field: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"entry {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.kind = kind
        self.line = line
        self.field = field


@dataclass(frozen=True)
class Crossing:
    sign: int
    under_in: int
    over_in: int
    under_out: int
    over_out: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError(f"crossing sign must be +1 or -1, got {self.sign!r}")

    @property
    def labels(self) -> tuple[int, int, int, int]:
        return (self.under_in, self.over_in, self.under_out, self.over_out)

    @property
    def pair_labels(self) -> tuple[int, int]:
        """Semiarcs carrying the crossing's color pair (x, y).

        Positive crossings read (under_in, over_out), negative crossings
        (under_out, over_in).  The other two semiarcs get x ▷̲ y (under
        strand) and y ▷̄ x (over strand); see :attr:`image_labels`.
        """
        if self.sign > 0:
            return self.under_in, self.over_out
        return self.under_out, self.over_in

    @property
    def image_labels(self) -> tuple[int, int]:
        if self.sign > 0:
            return self.under_out, self.over_in
        return self.under_in, self.over_out

    def oriented_wiring(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.under_in, self.over_out), (self.over_in, self.under_out)

    def unoriented_wiring(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.under_in, self.over_in), (self.under_out, self.over_out)

    def flipped(self) -> "Crossing":
        return Crossing(-self.sign, *self.labels)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    free_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if self.free_loops < 0:
            raise DiagramError("free loop count must be non-negative")
        if not self.crossings and not self.free_loops:
            raise DiagramError("a diagram needs at least one crossing or one free loop")
        _check_closure(self.crossings)

    @property
    def semiarc_count(self) -> int:
        return 2 * len(self.crossings)

    @property
    def semiarcs(self) -> range:
        return range(1, self.semiarc_count + 1)

    def __len__(self) -> int:
        return len(self.crossings)

    def successor(self) -> dict[int, int]:
        """Map each semiarc to the next semiarc along the orientation."""
        nxt = {}
        for c in self.crossings:
            nxt[c.under_in] = c.under_out
            nxt[c.over_in] = c.over_out
        return nxt

    def components(self) -> list[list[int]]:
        """Semiarc cycles of the link components with crossings (free loops excluded)."""
        nxt = self.successor()
        seen: set[int] = set()
        comps = []
        for start in self.semiarcs:
            if start in seen:
                continue
            comp, s = [], start
            while s not in seen:
                seen.add(s)
                comp.append(s)
                s = nxt[s]
            comps.append(comp)
        return comps

    @property
    def component_count(self) -> int:
        return len(self.components()) + self.free_loops

    def end_of(self, label: int) -> tuple[int, str]:
        """(crossing index, role) where ``label`` is an incoming semiarc."""
        for i, c in enumerate(self.crossings):
            if c.under_in == label:
                return i, "under_in"
            if c.over_in == label:
                return i, "over_in"
        raise DiagramError(f"unknown semiarc {label}")


def _check_closure(crossings: Sequence[Crossing]) -> None:
    m = 2 * len(crossings)
    ins: dict[int, int] = {}
    outs: dict[int, int] = {}
    for i, c in enumerate(crossings):
        for role in ROLES:
            lab = getattr(c, role)
            if not isinstance(lab, int) or not 1 <= lab <= m:
                raise DiagramError(f"crossing {i + 1}: semiarc {lab!r} outside 1..{m}")
            bucket = ins if role.endswith("_in") else outs
            if lab in bucket:
                raise DiagramError(f"semiarc {lab} is {'incoming' if bucket is ins else 'outgoing'} twice")
            bucket[lab] = i
    if len(ins) != m or len(outs) != m:  # pragma: no cover - implied by the checks above
        raise DiagramError("diagram is not closed")


_ENTRY = re.compile(r"^\s*(\S+)\s*\[\s*([^\]]*)\]\s*$")
_SIGNS = {"+": 1, "+1": 1, "p": 1, "pos": 1, "positive": 1, "-": -1, "-1": -1, "n": -1, "neg": -1, "negative": -1}


def parse_pd(text: str) -> Diagram:
    """Parse role-explicit PD text into a validated :class:`Diagram`."""
    entries = []  # (sign, labels, line, field)
    loops = 0
    field = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^loops\s*:\s*(\S+)$", line)
        if m:
            if not m.group(1).isdigit():
                raise PDParseError("syntax", f"bad free loop count {m.group(1)!r}", lineno)
            loops += int(m.group(1))
            continue
        for chunk in line.split(";"):
            if not chunk.strip():
                continue
            field += 1
            em = _ENTRY.match(chunk)
            if not em:
                raise PDParseError("syntax", f"cannot parse crossing {chunk.strip()!r}", lineno, field)
            sign_tok, body = em.groups()
            if sign_tok.lower() not in _SIGNS:
                raise PDParseError("sign", f"unknown sign token {sign_tok!r}", lineno, field)
            parts = [p.strip() for p in body.split(",")]
            if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
                raise PDParseError("syntax", f"expected four positive integer labels, got [{body}]", lineno, field)
            entries.append((_SIGNS[sign_tok.lower()], tuple(int(p) for p in parts), lineno, field))
    if not entries and not loops:
        raise PDParseError("empty", "no crossings and no free loops")

    m = 2 * len(entries)
    ins: dict[int, tuple[int, int]] = {}
    outs: dict[int, tuple[int, int]] = {}
    for _, labels, lineno, fld in entries:
        for pos, lab in enumerate(labels):
            bucket = ins if pos in (0, 1) else outs
            if lab in bucket:
                where = "incoming" if bucket is ins else "outgoing"
                raise PDParseError("duplicate", f"semiarc {lab} is {where} twice (first at entry {bucket[lab][1]})",
                                   lineno, fld)
            bucket[lab] = (lineno, fld)
    for lab, (lineno, fld) in sorted(ins.items()):
        if lab not in outs:
            raise PDParseError("dangling", f"semiarc {lab} enters a crossing but never leaves one", lineno, fld)
    for lab, (lineno, fld) in sorted(outs.items()):
        if lab not in ins:
            raise PDParseError("dangling", f"semiarc {lab} leaves a crossing but never enters one", lineno, fld)
    expected = set(range(1, m + 1))
    if set(ins) != expected:
        missing = sorted(expected - set(ins))
        extra = sorted(set(ins) - expected)
        msg = f"labels must be exactly 1..{m}"
        if missing:
            msg += f"; missing {missing}"
        if extra:
            msg += f"; unexpected {extra}"
        raise PDParseError("missing", msg)
    crossings = [Crossing(sign, *labels) for sign, labels, _, _ in entries]
    return Diagram(tuple(crossings), loops)


def format_pd(d: Diagram) -> str:
    lines = [f"{'+' if c.sign > 0 else '-'} [{c.under_in}, {c.over_in}, {c.under_out}, {c.over_out}]"
             for c in d.crossings]
    if d.free_loops:
        lines.append(f"loops: {d.free_loops}")
    return "\n".join(lines) + "\n"


def crossing_counts(d: Diagram) -> tuple[int, int]:
    """Return ``(p, n)``, the numbers of positive and negative crossings."""
    p = sum(1 for c in d.crossings if c.sign > 0)
    return p, len(d.crossings) - p


def enumerate_states(d: Diagram) -> Iterator[tuple[str, ...]]:
    """Yield all Kauffman states in binary-counter order.

    A state assigns ``"A"`` or ``"B"`` to each crossing; bit ``j`` of the
    counter set means crossing ``j`` takes ``"B"``.  ``"A"`` is the oriented
    smoothing, weighted by A_{x,y} at positive and A_{x,y}^-1 at negative
    crossings; ``"B"`` is the unoriented smoothing with B_{x,y}^{±1}.
    """
    c = len(d.crossings)
    for i in range(1 << c):
        yield tuple("B" if i >> j & 1 else "A" for j in range(c))


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def smooth_and_count_loops(d: Diagram, state: Sequence[str]) -> int:
    """Number of circles after smoothing every crossing per ``state``."""
    if len(state) != len(d.crossings):
        raise DiagramError(f"state has {len(state)} entries for {len(d.crossings)} crossings")
    m = d.semiarc_count
    parent = list(range(m + 1))
    groups = m
    for c, choice in zip(d.crossings, state):
        if choice == "A":
            wiring = c.oriented_wiring()
        elif choice == "B":
            wiring = c.unoriented_wiring()
        else:
            raise DiagramError(f"state entries must be 'A' or 'B', got {choice!r}")
        for a, b in wiring:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                parent[ra] = rb
                groups -= 1
    return groups + d.free_loops


def loop_counts(d: Diagram) -> list[int]:
    """Loop counts of all states, indexed by the binary state counter."""
    return [smooth_and_count_loops(d, s) for s in enumerate_states(d)]


# -- surgery --------------------------------------------------------------

class _Builder:
    """Mutable copy of a diagram used by the Reidemeister surgeries."""

    def __init__(self, d: Diagram):
        self.rows = [dict(zip(ROLES, c.labels), sign=c.sign) for c in d.crossings]
        self.free_loops = d.free_loops
        self.next_label = d.semiarc_count + 1
        self.diagram = d

    def new_label(self) -> int:
        lab = self.next_label
        self.next_label += 1
        return lab

    def new_crossing(self, sign: int) -> int:
        self.rows.append({role: 0 for role in ROLES} | {"sign": sign})
        return len(self.rows) - 1

    def thread(self, segment: Optional[int], slots: Sequence[tuple[int, str]]) -> None:
        """Route ``segment`` (or a fresh free loop when None) through ``slots``,
        a sequence of (new crossing index, "under"/"over")."""
        if segment is None:
            if self.free_loops < 1:
                raise DiagramError("no free loop available")
            self.free_loops -= 1
            first = self.new_label()
            end = None
        else:
            end = self.diagram.end_of(segment)
            first = segment
        cur = first
        for k, (idx, level) in enumerate(slots):
            self.rows[idx][f"{level}_in"] = cur
            last = k == len(slots) - 1
            cur = first if (last and end is None) else self.new_label()
            self.rows[idx][f"{level}_out"] = cur
        if end is not None:
            self.rows[end[0]][end[1]] = cur

    def build(self) -> Diagram:
        crossings = [Crossing(r["sign"], *(r[role] for role in ROLES)) for r in self.rows]
        return Diagram(tuple(crossings), self.free_loops)


def _check_semiarc(d: Diagram, label: Optional[int]) -> None:
    if label is None:
        return
    if not isinstance(label, int) or not 1 <= label <= d.semiarc_count:
        raise DiagramError(f"unknown semiarc {label!r}")


def add_kink(d: Diagram, semiarc: Optional[int], sign: int, over_first: bool = False) -> Diagram:
    """Add a Reidemeister I curl of the given sign on ``semiarc``.

    ``semiarc=None`` puts the curl on a free loop.  With ``over_first`` the
    strand passes over itself on entering the curl, otherwise under.  Old
    labels are kept; the two new semiarcs get the next labels.
    """
    if sign not in (1, -1):
        raise DiagramError("sign must be +1 or -1")
    _check_semiarc(d, semiarc)
    b = _Builder(d)
    k = b.new_crossing(sign)
    order = ("over", "under") if over_first else ("under", "over")
    b.thread(semiarc, [(k, order[0]), (k, order[1])])
    return b.build()


def poke_r2(d: Diagram, semiarc_a: Optional[int], semiarc_b: Optional[int], sign: int = 1,
            reverse: bool = False) -> Diagram:
    """Push ``semiarc_a`` over ``semiarc_b`` with a Reidemeister II move.

    Two crossings are added: the first one met along ``semiarc_b`` has sign
    ``sign``, the second ``-sign``.  With ``reverse`` the over strand meets
    them in the opposite order (the antiparallel form of the move).  ``None``
    for either semiarc means a free loop.
    """
    if sign not in (1, -1):
        raise DiagramError("sign must be +1 or -1")
    if semiarc_a is not None and semiarc_a == semiarc_b:
        raise DiagramError("poke_r2 needs two distinct semiarcs")
    _check_semiarc(d, semiarc_a)
    _check_semiarc(d, semiarc_b)
    if semiarc_a is None and semiarc_b is None and d.free_loops < 2:
        raise DiagramError("two free loops are needed to poke one over the other")
    b = _Builder(d)
    p = b.new_crossing(sign)
    q = b.new_crossing(-sign)
    over_slots = [(q, "over"), (p, "over")] if reverse else [(p, "over"), (q, "over")]
    # thread the under strand first so a free loop used for it gets the smaller label
    b.thread(semiarc_b, [(p, "under"), (q, "under")])
    b.thread(semiarc_a, over_slots)
    return b.build()


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    shift = d1.semiarc_count
    moved = [Crossing(c.sign, *(lab + shift for lab in c.labels)) for c in d2.crossings]
    return Diagram(d1.crossings + tuple(moved), d1.free_loops + d2.free_loops)


def mirror(d: Diagram) -> Diagram:
    return Diagram(tuple(c.flipped() for c in d.crossings), d.free_loops)


def unlink(components: int) -> Diagram:
    return Diagram((), components)


def braid_closure(word: Sequence[int], strands: Optional[int] = None) -> Diagram:
    """Closure of a braid word; generator ``i`` is σ_i, ``-i`` is σ_i^-1.

    At σ_i the strand in position i crosses over the strand in position i+1
    and the crossing is positive; σ_i^-1 passes it under, negative.  Strands
    that never cross close up into free loops.
    """
    if not word and not strands:
        raise DiagramError("empty braid word needs an explicit strand count")
    k = strands or (max(abs(g) for g in word) + 1)
    if any(g == 0 or abs(g) >= k for g in word):
        raise DiagramError(f"generator out of range for {k} strands")
    rows: list[int] = []  # crossing signs
    links: list[tuple[tuple[int, str], tuple[int, str]]] = []  # (outgoing slot, incoming slot)
    first_slot: list[Optional[tuple[int, str]]] = [None] * k
    current: list[Optional[tuple[int, str]]] = [None] * k  # outgoing slot feeding each position
    for g in word:
        i = abs(g) - 1
        sign = 1 if g > 0 else -1
        idx = len(rows)
        rows.append(sign)
        left, right = ("over", "under") if sign > 0 else ("under", "over")
        for pos, level in ((i, left), (i + 1, right)):
            slot_in = (idx, f"{level}_in")
            if current[pos] is None:
                first_slot[pos] = slot_in
            else:
                links.append((current[pos], slot_in))
        current[i], current[i + 1] = (idx, f"{right}_out"), (idx, f"{left}_out")
    free = 0
    for pos in range(k):
        if current[pos] is None:
            free += 1
        else:
            links.append((current[pos], first_slot[pos]))
    label_of_slot: dict[tuple[int, str], int] = {}
    label = 0
    for out_slot, in_slot in links:
        label += 1
        label_of_slot[out_slot] = label
        label_of_slot[in_slot] = label
    crossings = [Crossing(sign, *(label_of_slot[(idx, role)] for role in ROLES))
                 for idx, sign in enumerate(rows)]
    return Diagram(tuple(crossings), free)
