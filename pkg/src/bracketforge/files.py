"""Loading inputs from disk and writing JSON documents.

Paths of the form ``fixtures/<name>`` (or a bare fixture name) fall back to
the fixtures shipped inside the package when no such file exists.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .biquandle import Biquandle, alexander_biquandle
from .bracket import BiquandleBracket
from .diagram import Diagram, parse_pd
from .functor import ColoredTangleFunctor, TangleWord, parse_word

__all__ = [
    "InputError",
    "fixture_names",
    "fixture_path",
    "resolve",
    "read_text",
    "read_json",
    "load_diagram",
    "load_biquandle",
    "load_bracket",
    "load_functor",
    "load_word",
    "dump_json",
]

PathLike = Union[str, Path]


class InputError(ValueError):
    """Unreadable file or malformed document."""


def _fixture_dir():
    return resources.files("bracketforge") / "fixtures"


def fixture_names() -> list[str]:
    return sorted(p.name for p in _fixture_dir().iterdir() if p.is_file() and not p.name.startswith("."))


def fixture_path(name: str) -> Path:
    p = _fixture_dir() / name
    if not p.is_file():
        raise InputError(f"no fixture named {name!r}")
    return Path(str(p))


def resolve(path: PathLike) -> Path:
    p = Path(path)
    if p.exists():
        return p
    parts = p.parts
    if len(parts) == 2 and parts[0] == "fixtures" or len(parts) == 1:
        try:
            return fixture_path(parts[-1])
        except InputError:
            pass
    raise InputError(f"cannot read {str(path)!r}: no such file")


def read_text(path: PathLike) -> str:
    p = resolve(path)
    try:
        return p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {str(path)!r}: {exc.strerror}") from None


def read_json(path: PathLike) -> Any:
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_diagram(path: PathLike) -> Diagram:
    return parse_pd(read_text(path))


def load_biquandle(path: PathLike) -> Biquandle:
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "under" not in data and "biquandle" not in data and "alexander" in data:
        a = data["alexander"]
        try:
            return alexander_biquandle(a["modulus"], a["t"], a["s"])
        except KeyError as exc:
            raise InputError(f"alexander biquandle needs 'modulus', 't' and 's', missing {exc.args[0]!r}") from None
    return Biquandle.from_dict(data)


def load_bracket(path: PathLike) -> BiquandleBracket:
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return BiquandleBracket.from_dict(data)


def load_functor(path: PathLike) -> ColoredTangleFunctor:
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return ColoredTangleFunctor.from_dict(data)


def load_word(path: PathLike) -> TangleWord:
    return parse_word(read_text(path))


def dump_json(obj: Any) -> str:
    """Indented JSON with each innermost list of scalars kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False)

    def flat(m: re.Match) -> str:
        inner = m.group(1).strip()
        if not inner:
            return "[]"
        return "[" + ", ".join(x.strip() for x in inner.split(",")) + "]"

    return re.sub(r"\[([^\[\]{}\"]*)\]", flat, text) + "\n"
