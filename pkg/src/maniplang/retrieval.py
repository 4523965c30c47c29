"""Phrase-keyed part database with edit-distance matching.

Each entry pairs a set of key phrases (e.g. {cup opening, cup rim, cup edge})
with opaque support-pair references. A description retrieves the entry whose
key phrase has the least Levenshtein distance; ties break by entry index,
then by the lexicographically smaller phrase, so results are reproducible.

Phrases are case-folded and whitespace-normalized before comparison; the
distance itself stays unnormalized, which favors short phrases; kept
deliberately, and documented so distances stay reproducible. The neural few-shot mask mapper is out of scope; the segmenter
port is served by an oracle that reads labeled scene parts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Protocol

from .costs import MissingPartError
from .errors import ManiplangError
from .geometry import PointCloud
from .scene import Scene

DEFAULT_MATCH_RATIO = 0.6  # of the matched phrase's length


class RetrievalError(ManiplangError):
    pass


class EmptyDatabaseError(RetrievalError):
    pass


def normalize_phrase(text: str) -> str:
    return " ".join(text.casefold().split())


def levenshtein(a: str, b: str) -> int:
    """Minimum insert/delete/substitute edits, unit costs, after folding."""
    a = normalize_phrase(a)
    b = normalize_phrase(b)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,  # delete from a
                    current[j - 1] + 1,  # insert into a
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


@dataclass(frozen=True)
class SupportPair:
    image: str
    mask: str

    def __post_init__(self):
        if not self.image or not self.mask:
            raise RetrievalError("support pair references must be non-empty strings")


@dataclass(frozen=True)
class PartEntry:
    key_phrases: tuple[str, ...]
    support_pairs: tuple[SupportPair, ...] = ()

    def __post_init__(self):
        if not self.key_phrases:
            raise RetrievalError("an entry needs at least one key phrase")

    @property
    def canonical_phrase(self) -> str:
        return self.key_phrases[0]


@dataclass(frozen=True)
class PartDatabase:
    entries: tuple[PartEntry, ...]


@dataclass(frozen=True)
class RetrievalMatch:
    entry: PartEntry
    entry_index: int
    matched_phrase: str
    distance: int


def retrieve(db: PartDatabase, desc: str) -> RetrievalMatch:
    """Entry holding the globally minimum-distance key phrase for `desc`."""
    if not db.entries:
        raise EmptyDatabaseError("cannot retrieve from an empty database")
    best: tuple[int, int, str] | None = None
    best_entry = None
    for index, entry in enumerate(db.entries):
        for phrase in entry.key_phrases:
            key = (levenshtein(desc, phrase), index, phrase)
            if best is None or key < best:
                best = key
                best_entry = entry
    assert best is not None and best_entry is not None
    distance, index, phrase = best
    return RetrievalMatch(best_entry, index, phrase, distance)


def oracle_segment(
    scene: Scene,
    part_desc: str,
    db: PartDatabase,
    match_ratio: float = DEFAULT_MATCH_RATIO,
) -> PointCloud:
    """Desk-scale segmenter: retrieval picks an entry, the entry's canonical
    phrase picks the closest-named labeled scene part.

    Raises MissingPartError when either hop lands farther than
    `match_ratio` of the respective phrase's length.
    """
    match = retrieve(db, part_desc)
    if match.distance > match_ratio * len(normalize_phrase(match.matched_phrase)):
        raise MissingPartError(part_desc)
    canonical = match.entry.canonical_phrase
    if not scene.parts:
        raise MissingPartError(part_desc)
    best_name = min(
        scene.parts, key=lambda name: (levenshtein(canonical, name), name)
    )
    best_distance = levenshtein(canonical, best_name)
    if best_distance > match_ratio * len(normalize_phrase(canonical)):
        raise MissingPartError(part_desc)
    return scene.parts[best_name]


class SegmenterPort(Protocol):
    """Contract for part segmentation; implementations must be deterministic
    given identical inputs."""

    def segment(self, scene: Scene, part_desc: str) -> PointCloud: ...


class OracleSegmenter:
    """SegmenterPort backed by labeled scene parts through the database."""

    def __init__(self, db: PartDatabase, match_ratio: float = DEFAULT_MATCH_RATIO):
        self.db = db
        self.match_ratio = match_ratio

    def segment(self, scene: Scene, part_desc: str) -> PointCloud:
        return oracle_segment(scene, part_desc, self.db, self.match_ratio)


def make_part_resolver(scene: Scene, db: PartDatabase) -> Callable[[str], PointCloud]:
    """EvalContext hook: resolve part descriptions through the database."""
    segmenter = OracleSegmenter(db)

    def resolver(name: str) -> PointCloud:
        if name in scene.parts:
            return scene.parts[name]
        return segmenter.segment(scene, name)

    return resolver


def database_to_json(db: PartDatabase) -> dict:
    return {
        "entries": [
            {
                "key_phrases": list(entry.key_phrases),
                "support_pairs": [
                    {"image": pair.image, "mask": pair.mask} for pair in entry.support_pairs
                ],
            }
            for entry in db.entries
        ]
    }


def database_from_json(doc: dict) -> PartDatabase:
    try:
        entries = tuple(
            PartEntry(
                key_phrases=tuple(entry["key_phrases"]),
                support_pairs=tuple(
                    SupportPair(pair["image"], pair["mask"])
                    for pair in entry.get("support_pairs", [])
                ),
            )
            for entry in doc["entries"]
        )
    except (KeyError, TypeError) as exc:
        raise RetrievalError(f"malformed database document: {exc}") from exc
    return PartDatabase(entries)


def save_database(path, db: PartDatabase) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(database_to_json(db), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_database(path) -> PartDatabase:
    with open(path, encoding="utf-8") as fh:
        return database_from_json(json.load(fh))
