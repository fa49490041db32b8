import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jsonbag.tokenizer import (
    JsonParseError,
    PathFilter,
    TokenizationMode,
    compact_render,
    filter_document,
    parse_json,
    tokenize,
    tokenize_chars,
    tokenize_trajectory,
)

RESOURCE_DOC = {"currentAge": 2, "playerResources": [{"Wood": 2}, {"Wood": 2}]}


class TestGoldenListing:
    def test_unordered(self):
        assert tokenize(RESOURCE_DOC, TokenizationMode.UNORDERED) == [
            ".currentAge.2",
            ".playerResources.Wood.2",
            ".playerResources.Wood.2",
        ]

    def test_ordered(self):
        assert tokenize(RESOURCE_DOC, TokenizationMode.ORDERED) == [
            ".currentAge.2",
            ".playerResources[0].Wood.2",
            ".playerResources[1].Wood.2",
        ]

    def test_both_mode_is_union_minus_nonlist_duplicate(self):
        got = Counter(tokenize(RESOURCE_DOC, TokenizationMode.BOTH))
        want = Counter(
            {
                ".currentAge.2": 1,
                ".playerResources[0].Wood.2": 1,
                ".playerResources[1].Wood.2": 1,
                ".playerResources.Wood.2": 2,
            }
        )
        assert got == want
        assert sum(got.values()) == 5


class TestParseJson:
    def test_empty_object(self):
        assert parse_json("{}") == {}

    def test_nested(self):
        assert parse_json('{"a":[1,2]}') == {"a": [1, 2]}

    def test_malformed_reports_byte_offset(self):
        with pytest.raises(JsonParseError) as exc:
            parse_json('{"a":}')
        assert exc.value.offset == 5

    def test_multibyte_offset_counts_bytes_not_chars(self):
        # "é" is 2 bytes in UTF-8, so the error offset shifts past it.
        with pytest.raises(JsonParseError) as exc:
            parse_json('{"é":}')
        assert exc.value.offset == len('{"é":'.encode("utf-8"))

    @pytest.mark.parametrize("bad", ["NaN", "Infinity", "-Infinity", "[1e999]"])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(JsonParseError):
            parse_json(bad)

    def test_duplicate_keys_rejected(self):
        with pytest.raises(JsonParseError):
            parse_json('{"a":1,"a":2}')


class TestRendering:
    def test_value_renderings(self):
        doc = {"b": True, "f": False, "n": None, "i": -3, "x": 0.5, "s": "hi"}
        assert tokenize(doc, TokenizationMode.ORDERED) == [
            ".b.true",
            ".f.false",
            ".n.null",
            ".i.-3",
            ".x.0.5",
            ".s.hi",
        ]

    def test_dotted_key_escaped(self):
        assert tokenize({"a.b": 1}, TokenizationMode.ORDERED) == [".a\\.b.1"]

    def test_root_array_tokens_start_with_dot(self):
        assert tokenize([7, 8], TokenizationMode.ORDERED) == [".[0].7", ".[1].8"]
        assert tokenize([7, 8], TokenizationMode.UNORDERED) == [".7", ".8"]

    def test_empty_containers_emit_nothing(self):
        assert tokenize({"a": [], "b": {}}, TokenizationMode.ORDERED) == []
        assert tokenize({}, TokenizationMode.UNORDERED) == []


class TestPathFilter:
    def test_empty_filter_is_identity(self):
        doc = {"a": 1, "b": [2, 3]}
        assert tokenize(doc, TokenizationMode.ORDERED, PathFilter()) == tokenize(
            doc, TokenizationMode.ORDERED
        )

    def test_prefix_removes_matching_only(self):
        doc = {"keep": 1, "drop": {"x": 2, "y": 3}}
        got = tokenize(doc, TokenizationMode.UNORDERED, PathFilter((".drop",)))
        assert got == [".keep.1"]

    def test_index_steps_wildcarded(self):
        doc = {"boards": [{"size": 8}, {"size": 9}], "turn": 1}
        got = tokenize(doc, TokenizationMode.ORDERED, PathFilter((".boards.size",)))
        assert got == [".turn.1"]

    def test_from_json_list(self):
        f = PathFilter.from_json([".a", ".b"])
        assert f.matches(".a.1") and f.matches(".b.x.2") and not f.matches(".c.1")

    def test_filter_document_prunes_subtrees(self):
        doc = {"keep": 1, "drop": {"x": 2}, "list": [{"drop2": 3, "ok": 4}]}
        pruned = filter_document(doc, PathFilter((".drop", ".list.drop2")))
        assert pruned == {"keep": 1, "list": [{"ok": 4}]}


class TestCharMode:
    def test_object_counts(self):
        assert Counter(tokenize_chars('{"a":1}')) == Counter(
            {"{": 1, '"': 2, "a": 1, ":": 1, "1": 1, "}": 1}
        )

    def test_empty_string(self):
        assert tokenize_chars("") == []

    def test_array_counts(self):
        assert Counter(tokenize_chars("[0,0]")) == Counter({"[": 1, "0": 2, ",": 1, "]": 1})

    def test_whitespace_outside_strings_excluded(self):
        assert tokenize_chars('{ "a" : "x y" }') == list('{"a":"x y"}')


class TestTrajectory:
    def test_concatenation(self):
        state = {"t": 1}
        assert tokenize_trajectory([state, state], TokenizationMode.ORDERED) == [
            ".t.1",
            ".t.1",
        ]

    def test_held_component_counts_per_state(self):
        # A hand component present from turn 1 to turn 3 shows up 3 times;
        # one gained at turn 3 shows up once.
        states = [
            {"hand": ["AS"]},
            {"hand": ["AS"]},
            {"hand": ["AS", "KD"]},
        ]
        counts = Counter(tokenize_trajectory(states, TokenizationMode.UNORDERED))
        assert counts[".hand.AS"] == 3
        assert counts[".hand.KD"] == 1

    def test_single_state_matches_tokenize(self):
        doc = {"a": [1, 2]}
        assert tokenize_trajectory([doc], TokenizationMode.BOTH) == tokenize(
            doc, TokenizationMode.BOTH
        )

    def test_empty_trajectory_rejected(self):
        with pytest.raises(ValueError):
            tokenize_trajectory([], TokenizationMode.ORDERED)

    def test_char_mode_has_no_wrapper_punctuation(self):
        states = [{"a": 1}, {"a": 2}]
        got = tokenize_trajectory(states, TokenizationMode.CHAR)
        assert got == list('{"a":1}') + list('{"a":2}')


json_atoms = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(10**6), max_value=10**6),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
    st.text(st.characters(blacklist_categories=("Cs",)), max_size=8),
)
json_docs = st.recursive(
    json_atoms,
    lambda children: st.one_of(
        st.lists(children, max_size=4),
        st.dictionaries(st.text(st.characters(blacklist_categories=("Cs",)), max_size=6), children, max_size=4),
    ),
    max_leaves=12,
)
json_containers = json_docs.filter(lambda d: isinstance(d, (dict, list)))


@settings(max_examples=150)
@given(json_containers)
def test_ordered_and_unordered_counts_match(doc):
    assert len(tokenize(doc, TokenizationMode.ORDERED)) == len(
        tokenize(doc, TokenizationMode.UNORDERED)
    )


def _has_array(node):
    if isinstance(node, list):
        return True
    if isinstance(node, dict):
        return any(_has_array(v) for v in node.values())
    return False


@settings(max_examples=150)
@given(json_containers.filter(lambda d: not _has_array(d)))
def test_modes_agree_without_arrays(doc):
    ordered = tokenize(doc, TokenizationMode.ORDERED)
    assert ordered == tokenize(doc, TokenizationMode.UNORDERED)
    assert ordered == tokenize(doc, TokenizationMode.BOTH)


@settings(max_examples=150)
@given(json_containers)
def test_both_mode_count_bounds(doc):
    n = len(tokenize(doc, TokenizationMode.ORDERED))
    n_both = len(tokenize(doc, TokenizationMode.BOTH))
    assert n <= n_both <= 2 * n


@settings(max_examples=150)
@given(json_containers)
def test_tokenize_deterministic(doc):
    a = tokenize(doc, TokenizationMode.BOTH)
    b = tokenize(json.loads(json.dumps(doc)), TokenizationMode.BOTH)
    assert a == b


@settings(max_examples=150)
@given(json_containers, st.integers(min_value=1, max_value=6))
def test_filter_removes_exactly_matching_tokens(doc, prefix_len):
    import re

    tokens = tokenize(doc, TokenizationMode.ORDERED)
    if not tokens:
        return
    prefix = tokens[0][:prefix_len]
    got = tokenize(doc, TokenizationMode.ORDERED, PathFilter((prefix,)))
    strip = lambda t: re.sub(r"\[\d+\]", "", t)
    want = [t for t in tokens if not strip(t).startswith(prefix)]
    assert got == want


@settings(max_examples=150)
@given(json_containers)
def test_every_token_starts_at_root(doc):
    for mode in (TokenizationMode.ORDERED, TokenizationMode.UNORDERED, TokenizationMode.BOTH):
        assert all(t.startswith(".") for t in tokenize(doc, mode))


@settings(max_examples=150)
@given(json_containers)
def test_char_count_equals_compact_length(doc):
    text = compact_render(doc)
    assert len(tokenize_chars(text)) == len(text)
