"""Representation metrics: action-generalizability and comprehensibility.

AG = 1 - |V| / T   (|V| = unique vocabulary operations, T = task count;
                    may go negative when a vocabulary outgrows the task set)
VC = N_succ / T    (fraction of tasks whose generated representation was
                    judged executable)

A host-language escape (methods that additionally allow arbitrary code) is
carried as a flag: the core |V| excludes it and is what gets plotted; the
"+escape" count is reported alongside. Task judgments are fixture data,
never re-queried from any model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ManiplangError
from .language.vocabulary import (
    Vocabulary,
    VocabularyError,
    vocabulary_from_json,
    vocabulary_size,
)

SUCCESS_VERDICTS = frozenset({"correct", "correct and sufficient", "success"})


class MetricsError(ManiplangError):
    pass


class ZeroTasksError(MetricsError):
    pass


class ProfileSchemaError(MetricsError):
    """Schema violation; the message names the offending field path."""


@dataclass(frozen=True)
class TaskOutcome:
    task_id: int
    verdict: str
    success: bool


@dataclass(frozen=True)
class RepresentationProfile:
    name: str
    vocabulary: Vocabulary
    task_outcomes: tuple[TaskOutcome, ...] = ()
    grammar_notes: tuple[str, ...] = ()

    @property
    def has_host_escape(self) -> bool:
        return self.vocabulary.has_host_escape

    def core_size(self) -> int:
        return vocabulary_size(self.vocabulary)

    def size_with_escape(self) -> int:
        return self.core_size() + (1 if self.has_host_escape else 0)


def action_generalizability(profile: RepresentationProfile, task_count: int) -> float:
    """1 - |V|/T over the core vocabulary; negative values are reported as-is."""
    if task_count < 1:
        raise ZeroTasksError("task count must be at least 1")
    return 1.0 - profile.core_size() / task_count


def vlm_comprehensibility(profile: RepresentationProfile) -> float:
    if not profile.task_outcomes:
        raise ZeroTasksError(f"profile {profile.name!r} has no task outcomes")
    succeeded = sum(1 for outcome in profile.task_outcomes if outcome.success)
    return succeeded / len(profile.task_outcomes)


def success_count(profile: RepresentationProfile) -> int:
    return sum(1 for outcome in profile.task_outcomes if outcome.success)


def judge_verdict(verdict: str) -> bool:
    """A verdict counts as success only when judged fully correct."""
    return verdict.strip().casefold() in SUCCESS_VERDICTS


def profile_from_json(doc: dict, source: str = "profile") -> RepresentationProfile:
    if not isinstance(doc, dict):
        raise ProfileSchemaError(f"{source}: expected an object")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ProfileSchemaError(f"{source}.name: expected a non-empty string")
    if "words" not in doc:
        raise ProfileSchemaError(f"{source}.words: missing")
    try:
        vocabulary, _ = vocabulary_from_json(doc)
    except VocabularyError as exc:
        raise ProfileSchemaError(f"{source}.words: {exc}") from exc
    outcomes = []
    for i, entry in enumerate(doc.get("task_outcomes", [])):
        path = f"{source}.task_outcomes[{i}]"
        if not isinstance(entry, dict):
            raise ProfileSchemaError(f"{path}: expected an object")
        if "task_id" not in entry or "verdict" not in entry:
            raise ProfileSchemaError(f"{path}: needs task_id and verdict")
        verdict = entry["verdict"]
        if not isinstance(verdict, str):
            raise ProfileSchemaError(f"{path}.verdict: expected a string")
        success = bool(entry.get("success", judge_verdict(verdict)))
        outcomes.append(TaskOutcome(int(entry["task_id"]), verdict, success))
    notes = tuple(str(n) for n in doc.get("grammar_notes", []))
    return RepresentationProfile(name, vocabulary, tuple(outcomes), notes)


def load_profiles(path) -> list[RepresentationProfile]:
    """Load one profile file or every *.json in a directory (sorted by name)."""
    p = Path(path)
    files = sorted(p.glob("*.json")) if p.is_dir() else [p]
    if not files:
        raise ProfileSchemaError(f"{p}: no profile files found")
    profiles = []
    for file in files:
        try:
            doc = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ProfileSchemaError(f"{file.name}: not valid JSON ({exc})") from exc
        profiles.append(profile_from_json(doc, source=file.stem))
    return profiles


@dataclass(frozen=True)
class MetricsRow:
    method: str
    vocab_size: int
    vocab_size_with_escape: int
    ag: float
    n_succ: int
    vc: float


def compute_rows(profiles: list[RepresentationProfile], task_count: int) -> list[MetricsRow]:
    rows = []
    for profile in profiles:
        rows.append(
            MetricsRow(
                method=profile.name,
                vocab_size=profile.core_size(),
                vocab_size_with_escape=profile.size_with_escape(),
                ag=action_generalizability(profile, task_count),
                n_succ=success_count(profile),
                vc=vlm_comprehensibility(profile),
            )
        )
    return rows


def rows_to_csv(rows: list[MetricsRow]) -> str:
    lines = ["method,vocab_size,vocab_size_with_escape,ag,n_succ,vc"]
    for row in rows:
        lines.append(
            f"{row.method},{row.vocab_size},{row.vocab_size_with_escape},"
            f"{row.ag:.6f},{row.n_succ},{row.vc:.6f}"
        )
    return "\n".join(lines) + "\n"


_SVG_W, _SVG_H = 480, 360
_ML, _MR, _MT, _MB = 64, 16, 16, 48


def _sx(value: float) -> float:
    return _ML + value * (_SVG_W - _ML - _MR)


def _sy(value: float) -> float:
    return _SVG_H - _MB - value * (_SVG_H - _MT - _MB)


def rows_to_svg(rows: list[MetricsRow]) -> str:
    """Scatter of AG (x) against VC (y) on fixed [0, 1] axes."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<line x1="{_ML}" y1="{_sy(0):.1f}" x2="{_SVG_W - _MR}" y2="{_sy(0):.1f}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_sy(0):.1f}" x2="{_ML}" y2="{_MT}" stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        x, y = _sx(tick), _sy(tick)
        parts.append(
            f'<line x1="{x:.1f}" y1="{_sy(0):.1f}" x2="{x:.1f}" y2="{_sy(0) + 4:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{_sy(0) + 16:.1f}" font-size="10" text-anchor="middle">{tick:g}</text>'
        )
        parts.append(
            f'<line x1="{_ML - 4}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{y + 3:.1f}" font-size="10" text-anchor="end">{tick:g}</text>'
        )
    parts.append(
        f'<text x="{(_ML + _SVG_W - _MR) / 2:.1f}" y="{_SVG_H - 12}" font-size="11" '
        f'text-anchor="middle">action-generalizability</text>'
    )
    parts.append(
        f'<text x="14" y="{(_MT + _SVG_H - _MB) / 2:.1f}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 14 {(_MT + _SVG_H - _MB) / 2:.1f})">vlm-comprehensibility</text>'
    )
    for row in rows:
        x = _sx(min(max(row.ag, 0.0), 1.0))
        y = _sy(min(max(row.vc, 0.0), 1.0))
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="steelblue"/>')
        parts.append(
            f'<text x="{x + 6:.1f}" y="{y - 6:.1f}" font-size="10">{row.method}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_outputs(rows: list[MetricsRow], csv_path, svg_path) -> None:
    Path(csv_path).write_text(rows_to_csv(rows), encoding="utf-8")
    Path(svg_path).write_text(rows_to_svg(rows), encoding="utf-8")
