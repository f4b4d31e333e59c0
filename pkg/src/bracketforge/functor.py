"""Colored tangle functors: matrices for colored crossings, cups and caps.

A closed colored tangle is written as rows of generators read from the
bottom up.  Each row is the Kronecker product of its generators (left to
right) and the rows are multiplied so the first row acts first; the final
1x1 matrix times ``w**(n - p)`` is the value.

Generators: ``I`` (one strand), ``U`` (cup, no strands in, two out), ``N``
(cap, two in, none out), ``X(x,y)`` and ``Xi(x,y)`` (crossing for the color
pair ``(x, y)`` and its inverse).  The two-strand basis is ordered
``(1,1), (1,2), (2,1), (2,2)``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .biquandle import Biquandle
from .bracket import BiquandleBracket, InvariantValue, bracket_invariant
from .coloring import Coloring, enumerate_colorings
from .diagram import Diagram, parse_pd
from .ring import NotInvertibleError, Ring, RingElement, ring_from_dict

__all__ = [
    "Matrix",
    "FunctorError",
    "WordError",
    "ColoredTangleFunctor",
    "Generator",
    "TangleWord",
    "FunctorIssue",
    "FunctorReport",
    "parse_word",
    "format_word",
    "evaluate_word",
    "evaluate_rows",
    "check_functor_equations",
    "functor_vs_bracket",
    "functor_from_bracket",
    "hopf_words",
    "braid_colors",
    "mat_mul",
    "kron",
    "mat_inverse",
    "identity",
]

Matrix = tuple[tuple[RingElement, ...], ...]


class FunctorError(ValueError):
    pass


class WordError(ValueError):
    """Malformed tangle word or mismatched row widths (``row`` is 1-based)."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(f"row {row}: {message}" if row is not None else message)
        self.row = row


# -- small matrix algebra over a Ring ---------------------------------------

def identity(ring: Ring, n: int) -> Matrix:
    return tuple(tuple(ring.one() if i == j else ring.zero() for j in range(n)) for i in range(n))


def mat_mul(ring: Ring, a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = list(zip(*b))
    zero = ring.zero()
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                if x and y:
                    acc = ring.add(acc, ring.mul(x, y))
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def kron(ring: Ring, a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(ring.mul(x, y) for x in ra for y in rb)
        for ra in a for rb in b
    )


def mat_inverse(ring: Ring, m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; pivots must be units of the ring."""
    n = len(m)
    a = [list(row) + list(r) for row, r in zip(m, identity(ring, n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if ring.is_unit(a[r][col])), None)
        if piv is None:
            raise NotInvertibleError("matrix is not invertible by unit pivots")
        a[col], a[piv] = a[piv], a[col]
        inv = ring.invert(a[col][col])
        a[col] = [ring.mul(inv, v) for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [ring.sub(v, ring.mul(f, p)) for v, p in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _as_matrix(ring: Ring, data: Any, shape: tuple[int, int], name: str) -> Matrix:
    rows, cols = shape
    if isinstance(data, list) and data and not isinstance(data[0], list):
        # flat vector: column for a 4x1 shape, row for 1x4
        data = [[v] for v in data] if cols == 1 else [data]
    if not isinstance(data, list) or len(data) != rows or any(
            not isinstance(r, list) or len(r) != cols for r in data):
        raise FunctorError(f"{name} must be a {rows}x{cols} matrix")
    return tuple(tuple(ring.decode(v) for v in r) for r in data)


# -- functors and words -----------------------------------------------------

@dataclass(frozen=True)
class ColoredTangleFunctor:
    ring: Ring
    biquandle: Biquandle
    X: Mapping[tuple[int, int], Matrix]
    X_inverse: Mapping[tuple[int, int], Matrix]
    I: Matrix
    U: Matrix  # 4x1
    N: Matrix  # 1x4
    w: RingElement
    name: str = field(default="", compare=False)

    def generator_matrix(self, g: "Generator") -> Matrix:
        if g.kind == "I":
            return self.I
        if g.kind == "U":
            return self.U
        if g.kind == "N":
            return self.N
        table = self.X if g.kind == "X" else self.X_inverse
        try:
            return table[g.colors]
        except KeyError:
            raise FunctorError(f"no matrix for {g}") from None

    @classmethod
    def from_dict(cls, data: Mapping) -> "ColoredTangleFunctor":
        try:
            ring = ring_from_dict(data["ring"])
            bq = Biquandle.from_dict(data["biquandle"])
            x_raw = data["X"]
        except KeyError as exc:
            raise FunctorError(f"functor document is missing {exc.args[0]!r}") from None
        X = {_color_key(k): _as_matrix(ring, v, (4, 4), f"X[{k}]") for k, v in x_raw.items()}
        for x, y in itertools.product(bq.elements, repeat=2):
            if (x, y) not in X:
                raise FunctorError(f"no crossing matrix for colors ({x},{y})")
        if "X_inverse" in data:
            Xi = {_color_key(k): _as_matrix(ring, v, (4, 4), f"X_inverse[{k}]") for k, v in data["X_inverse"].items()}
        else:
            try:
                Xi = {k: mat_inverse(ring, m) for k, m in X.items()}
            except NotInvertibleError:
                raise FunctorError("a crossing matrix is not invertible and no inverse was supplied") from None
        I = _as_matrix(ring, data.get("I", [[1, 0], [0, 1]]), (2, 2), "I")
        U = _as_matrix(ring, data.get("U"), (4, 1), "U")
        N = _as_matrix(ring, data.get("N"), (1, 4), "N")
        if "w" not in data:
            raise FunctorError("functor document is missing 'w'")
        return cls(ring, bq, X, Xi, I, U, N, ring.decode(data["w"]), data.get("name", ""))

    def to_dict(self) -> dict:
        enc = self.ring.encode

        def m(mat):
            return [[enc(v) for v in row] for row in mat]

        d = {
            "ring": self.ring.to_dict(),
            "biquandle": self.biquandle.to_dict(),
            "X": {f"{x},{y}": m(v) for (x, y), v in sorted(self.X.items())},
            "X_inverse": {f"{x},{y}": m(v) for (x, y), v in sorted(self.X_inverse.items())},
            "I": m(self.I),
            "U": [enc(r[0]) for r in self.U],
            "N": [enc(v) for v in self.N[0]],
            "w": enc(self.w),
        }
        if self.name:
            d["name"] = self.name
        return d


def _color_key(k: Any) -> tuple[int, int]:
    if isinstance(k, str):
        parts = [p for p in re.split(r"[,\s()]+", k) if p]
    else:
        parts = list(k)
    if len(parts) != 2:
        raise FunctorError(f"bad color pair key {k!r}")
    return int(parts[0]), int(parts[1])


@dataclass(frozen=True)
class Generator:
    kind: str  # "I", "U", "N", "X", "Xi"
    colors: tuple[int, int] = ()

    @property
    def strands_in(self) -> int:
        return {"I": 1, "U": 0, "N": 2}.get(self.kind, 2)

    @property
    def strands_out(self) -> int:
        return {"I": 1, "U": 2, "N": 0}.get(self.kind, 2)

    def __str__(self) -> str:
        if self.kind in ("X", "Xi"):
            return f"{self.kind}({self.colors[0]},{self.colors[1]})"
        return self.kind


@dataclass(frozen=True)
class TangleWord:
    rows: tuple[tuple[Generator, ...], ...]
    p: int = 0
    n: int = 0
    name: str = field(default="", compare=False)

    def colorings(self) -> list[tuple[int, int]]:
        return [g.colors for row in self.rows for g in row if g.colors]


_TOKEN = re.compile(r"\s*(Xi|X\^-1|X|I|U|N)\s*(?:\(\s*(\d+)\s*,\s*(\d+)\s*\)|_\{?(\d)(\d)\}?)?")


def _parse_row(text: str, row: int) -> tuple[Generator, ...]:
    gens = []
    pos = 0
    text = text.strip()
    if not text:
        raise WordError("empty row", row)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordError(f"cannot parse generator at {text[pos:]!r}", row)
        kind = m.group(1)
        kind = "Xi" if kind == "X^-1" else kind
        cx = m.group(2) or m.group(4)
        cy = m.group(3) or m.group(5)
        if kind in ("X", "Xi"):
            if cx is None:
                raise WordError(f"crossing generator needs colors, e.g. X(1,2)", row)
            gens.append(Generator(kind, (int(cx), int(cy))))
        else:
            if cx is not None:
                raise WordError(f"{kind} takes no colors", row)
            gens.append(Generator(kind))
        pos = m.end()
        while pos < len(text) and text[pos] in " \t*⊗":
            pos += 1
    return tuple(gens)


def parse_word(text: str) -> TangleWord:
    """Parse a word such as ``U U | I X(2,1) I | I X(1,2) I | N N``.

    Rows are separated by ``|`` or newlines and listed bottom first.  Lines
    ``p: 2`` and ``n: 0`` give the writhe counts; ``#`` starts a comment.
    """
    rows_text: list[str] = []
    p = n = 0
    name = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^(p|n|name|word)\s*:\s*(.*)$", line)
        if m:
            key, val = m.groups()
            if key in ("p", "n"):
                if not val.strip().isdigit():
                    raise WordError(f"bad {key} count {val!r}")
                if key == "p":
                    p = int(val)
                else:
                    n = int(val)
                continue
            if key == "name":
                name = val.strip()
                continue
            line = val
        rows_text += [r for r in line.split("|") if r.strip()]
    if not rows_text:
        raise WordError("word has no rows")
    rows = tuple(_parse_row(r, i) for i, r in enumerate(rows_text, 1))
    _check_widths(rows)
    return TangleWord(rows, p, n, name)


def format_word(word: TangleWord) -> str:
    body = " | ".join(" ".join(str(g) for g in row) for row in word.rows)
    return f"{body}\np: {word.p}\nn: {word.n}\n"


def _check_widths(rows: Sequence[Sequence[Generator]]) -> None:
    width = 0
    for i, row in enumerate(rows, 1):
        need = sum(g.strands_in for g in row)
        if need != width:
            raise WordError(f"row takes {need} strands but {width} arrive from below", i)
        width = sum(g.strands_out for g in row)
    if width:
        raise WordError(f"word leaves {width} open strands at the top", len(rows))


def evaluate_rows(f: ColoredTangleFunctor, rows: Sequence[Sequence[Generator]]) -> Matrix:
    """Matrix of a (possibly open) stack of rows, first row acting first."""
    ring = f.ring
    result: Optional[Matrix] = None
    for i, row in enumerate(rows, 1):
        m: Optional[Matrix] = None
        for g in row:
            gm = f.generator_matrix(g)
            m = gm if m is None else kron(ring, m, gm)
        if result is None:
            result = m
        else:
            if len(m[0]) != len(result):
                raise WordError(f"row expects dimension {len(m[0])}, got {len(result)}", i)
            result = mat_mul(ring, m, result)
    return result


def evaluate_word(f: ColoredTangleFunctor, word: TangleWord, p: Optional[int] = None,
                  n: Optional[int] = None) -> RingElement:
    """Scalar value of a closed word times ``w**(n - p)``."""
    _check_widths(word.rows)
    p = word.p if p is None else p
    n = word.n if n is None else n
    m = evaluate_rows(f, word.rows)
    return f.ring.mul(m[0][0], f.ring.power(f.w, n - p))


# -- equation checks --------------------------------------------------------

@dataclass(frozen=True)
class FunctorIssue:
    check: str  # "RII", "RII.inverse", "zigzag.left", "zigzag.right", "RIII"
    colors: tuple
    detail: str

    def to_dict(self) -> dict:
        return {"check": self.check, "colors": list(self.colors), "detail": self.detail}


@dataclass(frozen=True)
class FunctorReport:
    issues: tuple[FunctorIssue, ...]
    checked: Mapping[str, int]

    @property
    def ok(self) -> bool:
        return not self.issues

    def failed(self, check: str) -> list[FunctorIssue]:
        return [i for i in self.issues if i.check == check]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": dict(self.checked), "issues": [i.to_dict() for i in self.issues]}


def braid_colors(bq: Biquandle, left: int, right: int, chirality: str = "left-over") -> tuple[tuple[int, int], tuple[int, int]]:
    """Color pair of a positive braid crossing and the colors leaving it.

    ``left``/``right`` are the colors entering from below.  With
    ``"left-over"`` the left strand passes over; with ``"left-under"`` it
    passes under.  Returns ``((x, y), (new_left, new_right))``.
    """
    if chirality == "left-over":
        under_in, over_in = right, left
    elif chirality == "left-under":
        under_in, over_in = left, right
    else:
        raise ValueError(f"unknown chirality {chirality!r}")
    x = under_in
    y = bq.over_column_inverse[x - 1][over_in - 1]  # y ▷̄ x = over_in
    under_out, over_out = bq.under_op(x, y), y
    if chirality == "left-over":
        return (x, y), (under_out, over_out)
    return (x, y), (over_out, under_out)


def check_functor_equations(f: ColoredTangleFunctor, chirality: str = "left-over") -> FunctorReport:
    """Check colored RII, the zigzag identities and the colored braid relation."""
    ring = f.ring
    issues: list[FunctorIssue] = []
    checked = Counter()
    I2, I4 = identity(ring, 2), identity(ring, 4)
    for key in sorted(f.X):
        checked["RII"] += 1
        if mat_mul(ring, f.X[key], f.X_inverse[key]) != I4 or mat_mul(ring, f.X_inverse[key], f.X[key]) != I4:
            issues.append(FunctorIssue("RII", key, "X and its inverse do not cancel"))
    left = mat_mul(ring, kron(ring, f.N, f.I), kron(ring, f.I, f.U))
    right = mat_mul(ring, kron(ring, f.I, f.N), kron(ring, f.U, f.I))
    checked["zigzag"] += 2
    if left != I2:
        issues.append(FunctorIssue("zigzag.left", (), f"(N⊗I)(I⊗U) = {_fmt(ring, left)}"))
    if right != I2:
        issues.append(FunctorIssue("zigzag.right", (), f"(I⊗N)(U⊗I) = {_fmt(ring, right)}"))
    bq = f.biquandle
    for c1, c2, c3 in itertools.product(bq.elements, repeat=3):
        checked["RIII"] += 1
        # σ1 σ2 σ1
        p1, (a1, a2) = braid_colors(bq, c1, c2, chirality)
        p2, (b2, b3) = braid_colors(bq, a2, c3, chirality)
        p3, (d1, d2) = braid_colors(bq, a1, b2, chirality)
        lhs = mat_mul(ring, kron(ring, f.X[p3], f.I),
                      mat_mul(ring, kron(ring, f.I, f.X[p2]), kron(ring, f.X[p1], f.I)))
        # σ2 σ1 σ2
        q1, (e2, e3) = braid_colors(bq, c2, c3, chirality)
        q2, (g1, g2) = braid_colors(bq, c1, e2, chirality)
        q3, (h2, h3) = braid_colors(bq, g2, e3, chirality)
        rhs = mat_mul(ring, kron(ring, f.I, f.X[q3]),
                      mat_mul(ring, kron(ring, f.X[q2], f.I), kron(ring, f.I, f.X[q1])))
        if (d1, d2, b3) != (g1, h2, h3):
            issues.append(FunctorIssue("RIII", (c1, c2, c3), "outgoing colors differ: biquandle is not braided"))
        elif lhs != rhs:
            issues.append(FunctorIssue("RIII", (c1, c2, c3), "braid relation fails"))
    return FunctorReport(tuple(issues), dict(checked))


def _fmt(ring: Ring, m: Matrix) -> str:
    return "[" + "; ".join(" ".join(ring.format(v) for v in row) for row in m) + "]"


# -- comparison with the state sum -------------------------------------------

HOPF_PD = "+ [1, 3, 2, 4] ; + [4, 2, 3, 1]"


def hopf_words(bq: Biquandle) -> list[tuple[Coloring, TangleWord]]:
    """One word ``(U⊗U)(I⊗X(x,y)⊗I)(I⊗X(y,x)⊗I)(N⊗N)`` per coloring of the positive Hopf link.

    ``(x, y)`` and ``(y, x)`` are the color pairs of the two crossings of
    the Hopf diagram :data:`HOPF_PD` under the coloring.
    """
    d = parse_pd(HOPF_PD)
    out = []
    for f in enumerate_colorings(d, bq):
        pairs = [(f[c.pair_labels[0]], f[c.pair_labels[1]]) for c in d.crossings]
        rows = (
            (Generator("U"), Generator("U")),
            (Generator("I"), Generator("X", pairs[0]), Generator("I")),
            (Generator("I"), Generator("X", pairs[1]), Generator("I")),
            (Generator("N"), Generator("N")),
        )
        out.append((f, TangleWord(rows, 2, 0, f"hopf X({pairs[0][0]},{pairs[0][1]}) X({pairs[1][0]},{pairs[1][1]})")))
    return out


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    functor: InvariantValue
    bracket: InvariantValue

    @property
    def equal(self) -> bool:
        return self.functor == self.bracket

    def to_dict(self) -> dict:
        return {"label": self.label, "equal": self.equal, "functor": self.functor.to_dict(),
                "bracket": self.bracket.to_dict()}


def functor_vs_bracket(f: ColoredTangleFunctor, beta: BiquandleBracket,
                       cases: Sequence[tuple[str, Sequence[TangleWord], Diagram]],
                       normalization: str = "raw") -> list[ComparisonRow]:
    """Compare, per case, the multiset of word values with the bracket invariant.

    Each case is ``(label, words, diagram)`` with one word per coloring of
    the diagram.  A functor's closed loop is worth ``N·U``, which matches the
    bracket's loop value under the ``"raw"`` normalization.
    """
    out = []
    for label, words, d in cases:
        fv = InvariantValue.from_values(f.ring, [evaluate_word(f, w) for w in words])
        bv = bracket_invariant(d, beta, normalization)
        out.append(ComparisonRow(label, fv, bv))
    return out


def functor_from_bracket(beta: BiquandleBracket) -> ColoredTangleFunctor:
    """Functor whose crossing matrices expand each crossing by the skein relation.

    With cup ``U = (0, u, 1, 0)`` and cap ``N = (0, 1, 1/u, 0)`` where
    ``u = -A[1][1] / B[1][1]`` (so a closed loop ``N·U`` is worth ``δ`` and
    the zigzags are identities), the crossing is
    ``X(x,y) = A[x][y] I⊗I + B[x][y] U N``: the identity term is the oriented
    smoothing and the cup-cap term the unoriented one.  Words then evaluate
    to the bracket's ``"raw"`` state sum of the matching colored diagram.
    """
    r = beta.ring
    z, one = r.zero(), r.one()
    u = r.neg(r.mul(beta.A[0][0], r.invert(beta.B[0][0])))
    U = ((z,), (u,), (one,), (z,))
    N = ((z, one, r.invert(u), z),)
    cupcap = mat_mul(r, U, N)
    I4 = identity(r, 4)
    X = {}
    for x, y in itertools.product(beta.biquandle.elements, repeat=2):
        a, b = beta.A[x - 1][y - 1], beta.B[x - 1][y - 1]
        X[x, y] = tuple(tuple(r.add(r.mul(a, i), r.mul(b, c)) for i, c in zip(ri, rc))
                        for ri, rc in zip(I4, cupcap))
    Xi = {k: mat_inverse(r, m) for k, m in X.items()}
    return ColoredTangleFunctor(r, beta.biquandle, X, Xi, identity(r, 2), U, N, beta.w,
                                name=f"from bracket {beta.name}".strip())
