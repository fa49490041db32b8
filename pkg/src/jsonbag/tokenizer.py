"""Turn JSON documents into token streams.

A token names one atomic component (anything that is neither an object nor
an array) by its descent path plus the rendered value, e.g.
``.playerResources[0].Wood.2``. List levels render as ``[i]`` in ordered
mode and disappear from the path in unordered mode; ``both`` emits both
renderings for tokens that traverse at least one list. ``char`` mode
tokenizes the individual characters of the compact JSON rendering instead.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

JsonValue = Any  # object | list | str | int | float | bool | None

_INDEX_STEP = re.compile(r"\[\d+\]")


class TokenizationMode(str, Enum):
    ORDERED = "ordered"
    UNORDERED = "unordered"
    BOTH = "both"
    CHAR = "char"


class JsonParseError(ValueError):
    """Raised for malformed input; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


def _reject_constant(name: str):
    raise JsonParseError(f"non-finite number {name!r} not admitted")


def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise JsonParseError(f"number {text!r} overflows to non-finite")
    return value


def _unique_pairs(pairs):
    obj: dict[str, JsonValue] = {}
    for key, value in pairs:
        if key in obj:
            raise JsonParseError(f"duplicate object key {key!r}")
        obj[key] = value
    return obj


def parse_json(text: str | bytes) -> JsonValue:
    """Strict JSON parse: rejects NaN/Inf, duplicate keys, trailing garbage."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(
            text,
            parse_constant=_reject_constant,
            parse_float=_parse_float,
            object_pairs_hook=_unique_pairs,
        )
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise JsonParseError(exc.msg, offset) from exc


@dataclass(frozen=True)
class PathFilter:
    """Drops tokens whose path starts with any excluded prefix.

    List index steps are wildcarded: ``[i]`` substrings are stripped from
    the token path before prefix matching, so one prefix covers every list
    position. The empty filter is the identity.
    """

    excluded: tuple[str, ...] = ()

    def matches(self, path: str) -> bool:
        if not self.excluded:
            return False
        stripped = _INDEX_STEP.sub("", path)
        return any(stripped.startswith(prefix) for prefix in self.excluded)

    @classmethod
    def from_json(cls, source: str | Path | Sequence[str]) -> "PathFilter":
        """Load from a JSON array of path-prefix strings (or a parsed list)."""
        if isinstance(source, (str, Path)):
            data = parse_json(Path(source).read_text(encoding="utf-8"))
        else:
            data = list(source)
        if not isinstance(data, list) or not all(isinstance(p, str) for p in data):
            raise ValueError("filter spec must be a JSON array of path prefixes")
        return cls(tuple(data))


EMPTY_FILTER = PathFilter()


def render_atom(value: JsonValue) -> str:
    """Deterministic rendering of an atomic value as a path segment."""
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    if isinstance(value, str):
        return value
    raise TypeError(f"not an atomic value: {type(value).__name__}")


def escape_key(key: str) -> str:
    return key.replace("\\", "\\\\").replace(".", "\\.")


def _is_atomic(value: JsonValue) -> bool:
    return not isinstance(value, (dict, list))


def tokenize(
    doc: JsonValue,
    mode: TokenizationMode = TokenizationMode.UNORDERED,
    path_filter: PathFilter = EMPTY_FILTER,
) -> list[str]:
    """One token per atomic component, in document order.

    In ``both`` mode an atomic whose path traverses at least one list emits
    the ordered and the unordered rendering; others emit a single token.
    """
    mode = TokenizationMode(mode)
    if mode is TokenizationMode.CHAR:
        raise ValueError("char mode is handled by tokenize_chars")
    tokens: list[str] = []

    def emit(path: str, value: JsonValue) -> None:
        token = f"{path}.{render_atom(value)}"
        if not token.startswith("."):
            token = "." + token  # root-level array
        if not path_filter.matches(token):
            tokens.append(token)

    def walk(node: JsonValue, ordered: str, unordered: str, in_list: bool) -> None:
        if isinstance(node, dict):
            for key, child in node.items():
                step = "." + escape_key(key)
                walk(child, ordered + step, unordered + step, in_list)
        elif isinstance(node, list):
            for i, child in enumerate(node):
                walk(child, f"{ordered}[{i}]", unordered, True)
        else:
            if mode is TokenizationMode.ORDERED:
                emit(ordered, node)
            elif mode is TokenizationMode.UNORDERED:
                emit(unordered, node)
            elif in_list:
                emit(ordered, node)
                emit(unordered, node)
            else:
                emit(ordered, node)

    walk(doc, "", "", False)
    return tokens


def compact_render(doc: JsonValue) -> str:
    """Canonical compact JSON rendering (no whitespace, original key order)."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def filter_document(doc: JsonValue, path_filter: PathFilter) -> JsonValue:
    """Prune subtrees whose (index-free) path matches the filter.

    Equivalent to token-level filtering but applied to the document itself,
    which is what char-mode tokenization needs: excluded fields must not
    appear in the rendering at all.
    """
    if not path_filter.excluded:
        return doc

    def prune(node: JsonValue, path: str) -> JsonValue:
        if isinstance(node, dict):
            out = {}
            for key, child in node.items():
                child_path = path + "." + escape_key(key)
                if _is_atomic(child):
                    if not path_filter.matches(f"{child_path}.{render_atom(child)}"):
                        out[key] = child
                elif not path_filter.matches(child_path):
                    out[key] = prune(child, child_path)
            return out
        if isinstance(node, list):
            out_list = []
            for child in node:
                if _is_atomic(child):
                    token = f"{path}.{render_atom(child)}"
                    if not token.startswith("."):
                        token = "." + token
                    if not path_filter.matches(token):
                        out_list.append(child)
                elif not path_filter.matches(path if path else "."):
                    out_list.append(prune(child, path))
            return out_list
        return node

    return prune(doc, "")


def tokenize_chars(text: str) -> list[str]:
    """One token per character of the compact rendering of ``text``.

    Whitespace outside string literals never appears: the input is parsed
    and re-rendered compactly before counting characters.
    """
    if not text.strip():
        return []
    return list(compact_render(parse_json(text)))


def tokenize_document_chars(doc: JsonValue, path_filter: PathFilter = EMPTY_FILTER) -> list[str]:
    """Char tokens of an already-parsed document, after pruning filtered paths."""
    return list(compact_render(filter_document(doc, path_filter)))


def tokenize_trajectory(
    states: Sequence[JsonValue],
    mode: TokenizationMode = TokenizationMode.UNORDERED,
    path_filter: PathFilter = EMPTY_FILTER,
) -> list[str]:
    """Concatenated tokens of every state in a trajectory.

    The trajectory-level list is a time sequence, not a game component, so
    it contributes no index steps (and no wrapper punctuation in char mode).
    """
    if not states:
        raise ValueError("empty trajectory")
    mode = TokenizationMode(mode)
    tokens: list[str] = []
    for state in states:
        if mode is TokenizationMode.CHAR:
            tokens.extend(tokenize_document_chars(state, path_filter))
        else:
            tokens.extend(tokenize(state, mode, path_filter))
    return tokens


def read_json(path: str | Path) -> JsonValue:
    return parse_json(Path(path).read_text(encoding="utf-8"))


def read_jsonl(path: str | Path) -> list[JsonValue]:
    """One JSON document per non-blank line."""
    docs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            docs.append(parse_json(line))
    return docs
