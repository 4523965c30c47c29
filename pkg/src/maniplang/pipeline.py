"""End-to-end task runner.

A task run asks a translation client for a candidate program (reference
prompt attached), validates it against the grammar, reprompts with the
rejection reason up to three times, then solves accepted stages one by one,
moving the grasped parts after each solve. Gripper open/close stages skip
the continuous solve and set the open fraction directly.

Runs are deterministic with the mock client and a fixed seed: the trace
serializes byte-identically across repeats.
"""

from __future__ import annotations

import json
import os
import urllib.request
from dataclasses import dataclass, replace
from typing import Mapping, Protocol

from .errors import ManiplangError
from .language.ast import TypedExpr
from .language.typecheck import Accepted, validate_program
from .scene import Scene
from .solver import SolveConfig, SolveResult, partition_moving_static, solve, transform_scene

REMOTE_URL_ENV = "MANIPLANG_REMOTE_URL"
STAGE_SEPARATOR = "---"


class PipelineError(ManiplangError):
    pass


class TranslationFailedError(PipelineError):
    """Raised after the reprompt budget is spent; carries the partial trace."""

    def __init__(self, message: str, trace: "TaskTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class AtomicAction:
    """One reference expression shown to the translation model."""

    description: str
    template: str
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class PromptTemplate:
    atomic_actions: tuple[AtomicAction, ...]


def instantiate_template(text: str, values: Mapping[str, str]) -> str:
    """Substitute `<placeholder>` markers; unknown markers are left intact so
    validation flags them."""
    for key, value in values.items():
        text = text.replace(f"<{key}>", str(value))
    return text


def scene_summary(scene: Scene) -> str:
    parts = ", ".join(sorted(scene.parts)) or "(no parts)"
    grasped = ", ".join(sorted(scene.grasped)) or "(nothing)"
    return (
        f"parts: {parts}; grasped: {grasped}; "
        f"gripper open fraction: {scene.gripper_open_fraction:g}"
    )


def build_prompt(instruction: str, scene: Scene, template: PromptTemplate) -> str:
    """Deterministic prompt: instruction, sorted part inventory, then the six
    atomic-action reference expressions with their guidance lines."""
    lines = [f"Instruction: {instruction}", "", "Scene parts:"]
    names = sorted(scene.parts)
    if names:
        lines.extend(f"- {name}" for name in names)
    else:
        lines.append("(no parts)")
    lines.append("")
    lines.append("Reference expressions for atomic actions:")
    for action in template.atomic_actions:
        lines.append("")
        lines.append(f"## {action.description}")
        lines.append(f"    {action.template}")
        lines.extend(f"    # {note}" for note in action.notes)
    return "\n".join(lines) + "\n"


class TranslationClient(Protocol):
    def translate(self, instruction: str, scene_summary: str, prompt: str) -> str: ...


class MockClient:
    """Table-driven client; responses come from a fixture map keyed by
    instruction, so replays are deterministic."""

    def __init__(self, responses: Mapping[str, str]):
        self.responses = dict(responses)

    def translate(self, instruction: str, scene_summary: str, prompt: str) -> str:
        try:
            return self.responses[instruction]
        except KeyError:
            raise PipelineError(f"mock client has no response for {instruction!r}") from None


class RemoteClient:
    """Minimal JSON-over-HTTP client: POST {instruction, scene_summary,
    prompt} and read back {"program": ...}. Endpoint comes from the
    constructor or the MANIPLANG_REMOTE_URL environment variable."""

    def __init__(self, endpoint: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint or os.environ.get(REMOTE_URL_ENV, "")
        self.timeout = timeout
        if not self.endpoint:
            raise PipelineError(
                f"remote client needs an endpoint (set {REMOTE_URL_ENV} or pass one)"
            )

    def translate(self, instruction: str, scene_summary: str, prompt: str) -> str:
        payload = json.dumps(
            {"instruction": instruction, "scene_summary": scene_summary, "prompt": prompt}
        ).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        with urllib.request.urlopen(request, timeout=self.timeout) as response:
            doc = json.loads(response.read().decode("utf-8"))
        if "program" not in doc:
            raise PipelineError("remote response is missing the 'program' field")
        return str(doc["program"])


@dataclass(frozen=True)
class PipelineConfig:
    solve: SolveConfig = SolveConfig()
    success_threshold: float = 1e-2
    max_attempts: int = 3
    template: PromptTemplate | None = None


@dataclass(frozen=True)
class AttemptRecord:
    program: str
    accepted: bool
    reason: str | None = None


@dataclass(frozen=True)
class StageRecord:
    program: str
    kind: str  # "solve" or "gripper"
    residual: float
    solve: SolveResult | None = None
    error: str | None = None


@dataclass(frozen=True)
class TaskTrace:
    instruction: str
    attempts: tuple[AttemptRecord, ...]
    stages: tuple[StageRecord, ...]
    final_state: dict
    success: bool

    def to_json(self) -> dict:
        return {
            "instruction": self.instruction,
            "attempts": [
                {"program": a.program, "verdict": "accepted" if a.accepted else "rejected",
                 "reason": a.reason}
                for a in self.attempts
            ],
            "stages": [
                {
                    "program": s.program,
                    "kind": s.kind,
                    # strict JSON has no Infinity; an errored stage has no residual
                    "residual": s.residual if s.error is None else None,
                    "solve": s.solve.to_json() if s.solve is not None else None,
                    "error": s.error,
                }
                for s in self.stages
            ],
            "final_state": self.final_state,
            "success": self.success,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def split_stages(candidate: str) -> list[str]:
    """Stage programs are separated by lines holding only `---`."""
    stages: list[str] = []
    current: list[str] = []
    for line in candidate.splitlines():
        if line.strip() == STAGE_SEPARATOR:
            if current:
                stages.append("\n".join(current).strip())
                current = []
            continue
        current.append(line)
    if current and "\n".join(current).strip():
        stages.append("\n".join(current).strip())
    return [stage for stage in stages if stage]


def _final_state(scene: Scene) -> dict:
    snap = scene.snapshot()
    return {
        "gripper": {
            "position": [scene.gripper_position.x, scene.gripper_position.y,
                         scene.gripper_position.z],
            "open_fraction": scene.gripper_open_fraction,
        },
        "part_centroids": {
            name: [c.x, c.y, c.z] for name, c in sorted(snap.part_centroids.items())
        },
        "grasped": sorted(scene.grasped),
    }


def run_task(
    instruction: str,
    scene: Scene,
    client: TranslationClient,
    cfg: PipelineConfig | None = None,
) -> TaskTrace:
    """Translate, validate (with bounded reprompting), then solve stage by
    stage; a rejected candidate never reaches the solver."""
    from .fixtures import default_prompt_template  # data-backed default

    cfg = cfg or PipelineConfig()
    template = cfg.template or default_prompt_template()
    prompt = build_prompt(instruction, scene, template)
    summary = scene_summary(scene)

    attempts: list[AttemptRecord] = []
    accepted_stages: list[tuple[str, TypedExpr]] | None = None
    for _ in range(cfg.max_attempts):
        raw = client.translate(instruction, summary, prompt)
        stage_texts = split_stages(raw)
        if not stage_texts:
            attempts.append(AttemptRecord(raw, False, "empty candidate"))
            prompt += "\nThe previous answer was empty. Reply with one cost expression.\n"
            continue
        verdicts = [(text, validate_program(text)) for text in stage_texts]
        rejection = next((v for v in verdicts if not isinstance(v[1], Accepted)), None)
        if rejection is None:
            accepted_stages = [
                (text, verdict.typed)
                for text, verdict in verdicts
                if isinstance(verdict, Accepted)
            ]
            attempts.append(AttemptRecord(raw, True))
            break
        _, verdict = rejection
        attempts.append(AttemptRecord(raw, False, verdict.reason))
        prompt += f"\nThe previous answer was rejected: {verdict.reason}\nPlease fix it.\n"

    if accepted_stages is None:
        trace = TaskTrace(
            instruction=instruction,
            attempts=tuple(attempts),
            stages=(),
            final_state=_final_state(scene),
            success=False,
        )
        raise TranslationFailedError(
            f"no valid candidate after {cfg.max_attempts} attempts", trace
        )

    stages: list[StageRecord] = []
    current = scene
    failed = False
    for text, typed in accepted_stages:
        if typed.sort == "void":
            fraction = 1.0 if typed.word == "gripper_open" else 0.0
            current = replace(current, gripper_open_fraction=fraction)
            stages.append(StageRecord(text, "gripper", 0.0))
            continue
        try:
            result = solve(typed, current, cfg.solve)
        except ManiplangError as exc:
            stages.append(StageRecord(text, "solve", float("inf"), error=str(exc)))
            failed = True
            break
        moving, _ = partition_moving_static(current)
        current = transform_scene(current, result.pose, moving)
        stages.append(StageRecord(text, "solve", result.cost_term, solve=result))

    cost_residuals = [s.residual for s in stages if s.kind == "solve"]
    success = (
        not failed
        and (not cost_residuals or cost_residuals[-1] < cfg.success_threshold)
    )
    return TaskTrace(
        instruction=instruction,
        attempts=tuple(attempts),
        stages=tuple(stages),
        final_state=_final_state(current),
        success=success,
    )
