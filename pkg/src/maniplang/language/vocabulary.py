"""The fixed manipulation vocabulary and composition grammar.

Words carry a parameter signature and a result sort; `centroid` is a second
surface spelling of `get_centroid` (one word, two names). The grammar rules
cover infix composition and the literal coercions; call typing comes from
the word signatures. Both serialize to one JSON schema so competitor word
lists load through the same code path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import ManiplangError
from .ast import SORTS


class VocabularyError(ManiplangError):
    pass


@dataclass(frozen=True)
class Param:
    name: str
    sort: str
    required: bool = True


@dataclass(frozen=True)
class Word:
    name: str
    params: tuple[Param, ...]
    result_sort: str
    alias_of: str | None = None

    def __post_init__(self):
        if self.result_sort not in SORTS:
            raise VocabularyError(f"word {self.name}: unknown result sort {self.result_sort!r}")
        for p in self.params:
            if p.sort not in SORTS:
                raise VocabularyError(f"word {self.name}: unknown parameter sort {p.sort!r}")


@dataclass(frozen=True)
class GrammarRule:
    """lhs <- rhs, where rhs is a sequence of sorts and terminal symbols."""

    lhs: str
    rhs: tuple[str, ...]

    def __post_init__(self):
        if self.lhs not in SORTS:
            raise VocabularyError(f"rule lhs {self.lhs!r} is not a sort")
        if not self.rhs:
            raise VocabularyError("rule rhs must be non-empty")


class Vocabulary:
    """Word set with unique names plus an optional host-language escape flag.

    The escape flag marks vocabularies that additionally allow arbitrary
    host code; such words are never enumerated or executed here, the flag
    only feeds the metrics module.
    """

    def __init__(self, words, has_host_escape: bool = False):
        self.words: tuple[Word, ...] = tuple(words)
        self.has_host_escape = bool(has_host_escape)
        self._by_name: dict[str, Word] = {}
        for word in self.words:
            if word.name in self._by_name:
                raise VocabularyError(f"duplicate word name {word.name!r}")
            self._by_name[word.name] = word
        for word in self.words:
            if word.alias_of is not None and word.alias_of not in self._by_name:
                raise VocabularyError(f"{word.name!r} aliases unknown word {word.alias_of!r}")

    def lookup(self, name: str) -> Word | None:
        """Resolve a surface name to its canonical word (following aliases)."""
        word = self._by_name.get(name)
        if word is not None and word.alias_of is not None:
            return self._by_name[word.alias_of]
        return word

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> tuple[str, ...]:
        return tuple(w.name for w in self.words)


def vocabulary_size(vocab: Vocabulary) -> int:
    """|V| as used by the generalizability metric; the escape set is a flag,
    never counted."""
    return len(vocab.words)


def _w(name, params, result, alias_of=None):
    return Word(name, tuple(Param(*p) if isinstance(p, tuple) else p for p in params), result, alias_of)


def default_vocabulary() -> Vocabulary:
    """The full 20-word vocabulary: the core table plus the template words."""
    s, p, v, c = "string", "point", "vec", "cost"
    return Vocabulary(
        [
            _w("get_axis", [("part", s)], v),
            _w("get_centroid", [("part", s)], p),
            _w("centroid", [("part", s)], p, alias_of="get_centroid"),
            _w("centroid_last", [("part", s)], p),
            _w("get_height", [("part", s)], "scalar"),
            _w("get_width", [("part", s)], "scalar"),
            _w("get_length", [("part", s)], "scalar"),
            _w("get_gripper_pos", [], p),
            _w("direction_of", [("start", s), ("end", s)], v),
            _w("move_cost", [("source", p), ("target", p), Param("offset", v, required=False)], c),
            _w("move_cost_with_offset", [("part", s), ("offset", v)], c),
            _w("parallel_cost", [("first", v), ("second", v)], c),
            _w("perpendicular_cost", [("first", v), ("second", v)], c),
            _w("rotate_cost", [("axis", v), ("angle", "scalar"), ("reference", v)], c),
            _w("orbit_cost", [("center_part", s), ("radius", "scalar"), ("moving_part", s)], c),
            _w("upright_cost", [("up_part", s), ("down_part", s)], c),
            _w("gripper_open_cost", [], c),
            _w("gripper_close_first_cost", [], c),
            _w("gripper_open", [], "void"),
            _w("gripper_close", [], "void"),
        ]
    )


def default_grammar() -> tuple[GrammarRule, ...]:
    """Composition and coercion rules consulted by the type checker.

    Binary rules read lhs <- (left, op, right); unary negation is
    ("scalar", ("-", "scalar")); single-element rules are coercions,
    e.g. a part-name string may stand where a point is expected.
    """
    r = GrammarRule
    return (
        r("scalar", ("scalar", "+", "scalar")),
        r("scalar", ("scalar", "-", "scalar")),
        r("scalar", ("scalar", "*", "scalar")),
        r("scalar", ("-", "scalar")),
        r("point", ("point", "+", "point")),
        r("point", ("point", "-", "point")),
        r("point", ("point", "+", "vec")),
        r("point", ("point", "-", "vec")),
        r("vec", ("vec", "+", "vec")),
        r("vec", ("vec", "-", "vec")),
        r("vec", ("vec", "*", "scalar")),
        r("cost", ("cost", "+", "cost")),
        r("point", ("string",)),
        r("point", ("triple",)),
        r("vec", ("triple",)),
        r("cost", ("number",)),
    )


def vocabulary_to_json(vocab: Vocabulary, rules: tuple[GrammarRule, ...] = ()) -> dict:
    doc: dict = {
        "has_host_escape": vocab.has_host_escape,
        "words": [
            {
                "name": w.name,
                "params": [
                    {"name": p.name, "sort": p.sort, "required": p.required} for p in w.params
                ],
                "result_sort": w.result_sort,
                **({"alias_of": w.alias_of} if w.alias_of else {}),
            }
            for w in vocab.words
        ],
    }
    if rules:
        doc["rules"] = [{"lhs": rule.lhs, "rhs": list(rule.rhs)} for rule in rules]
    return doc


def vocabulary_from_json(doc: dict) -> tuple[Vocabulary, tuple[GrammarRule, ...]]:
    try:
        words = [
            Word(
                entry["name"],
                tuple(
                    Param(p["name"], p["sort"], bool(p.get("required", True)))
                    for p in entry.get("params", [])
                ),
                entry["result_sort"],
                entry.get("alias_of"),
            )
            for entry in doc["words"]
        ]
    except (KeyError, TypeError) as exc:
        raise VocabularyError(f"malformed vocabulary document: {exc}") from exc
    rules = tuple(
        GrammarRule(entry["lhs"], tuple(entry["rhs"])) for entry in doc.get("rules", [])
    )
    return Vocabulary(words, bool(doc.get("has_host_escape", False))), rules


def save_vocabulary(path, vocab: Vocabulary, rules: tuple[GrammarRule, ...] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(vocabulary_to_json(vocab, rules), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_vocabulary(path) -> tuple[Vocabulary, tuple[GrammarRule, ...]]:
    with open(path, encoding="utf-8") as fh:
        return vocabulary_from_json(json.load(fh))
