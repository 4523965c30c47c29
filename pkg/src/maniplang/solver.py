"""Gripper pose solver.

Minimizes  cost(scene with moved parts) + alpha * |t - t0|_2
           + beta * |euler(R @ R0^-1)|_1
over the gripper end pose (R, t). Parts attached to the grasped object move
rigidly with the gripper; everything else stays put.

The optimizer is a derivative-free pattern search over the 6-vector
(EulerXYZ deltas from R0, translation deltas from t0): coordinate polls
first, seeded random poll directions when a coordinate cycle stalls (the
descent cone of a kinked objective can exclude every coordinate axis), and
an acceleration step along each cycle's net movement. Deterministic
multi-start on top: restart #0 is the initial pose, the rest are drawn
from the seed. Identical inputs (expression, scene, config including seed)
produce identical results; evaluation order is fixed and nothing depends
on wall clock.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .costs import EvalContext, EvalError, evaluate, motion_subjects
from .errors import ManiplangError
from .geometry import (
    Point3,
    PointCloud,
    PoseSE3,
    euler_from_rotation,
    rotation_xyz,
)
from .language.ast import TypedExpr
from .scene import GRIPPER_NAME, Scene

_ROT_STEP = 0.25  # initial pattern step, radians
_TRANS_STEP = 0.1  # initial pattern step, meters
_STEP_FLOOR = 1e-7


class SolverError(ManiplangError):
    pass


class NoMovingPartsError(SolverError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    alpha: float = 0.1
    beta: float = 0.05
    max_iterations: int = 2000
    restarts: int = 8
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise SolverError("regularizer weights must be non-negative")
        if self.max_iterations < 1:
            raise SolverError("max_iterations must be at least 1")
        if self.restarts < 1:
            raise SolverError("need at least the initial-pose restart")
        if self.tolerance <= 0:
            raise SolverError("tolerance must be positive")


@dataclass(frozen=True)
class SolveResult:
    pose: PoseSE3
    objective: float
    cost_term: float
    reg_translation: float
    reg_rotation: float
    iterations: int
    converged: bool
    restart_index: int
    total_evaluations: int

    def to_json(self) -> dict:
        return {
            "pose": {
                "rotation": [float(v) for v in self.pose.rotation.reshape(-1)],
                "translation": [
                    self.pose.translation.x,
                    self.pose.translation.y,
                    self.pose.translation.z,
                ],
            },
            "objective": self.objective,
            "cost_term": self.cost_term,
            "reg_translation": self.reg_translation,
            "reg_rotation": self.reg_rotation,
            "iterations": self.iterations,
            "converged": self.converged,
            "restart_index": self.restart_index,
            "total_evaluations": self.total_evaluations,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def initial_pose(scene: Scene) -> PoseSE3:
    """The gripper's starting pose; the scene stores position only, so R0 = I."""
    return PoseSE3.identity(scene.gripper_position)


def partition_moving_static(scene: Scene) -> tuple[frozenset[str], frozenset[str]]:
    """Split part names into gripper-attached and stationary.

    A part moves when it is grasped, shares an explicit object label with a
    grasped part, or (label fallback) its space-tokenized name starts with
    the grasped part's full token sequence, so "knife blade" rides with a
    grasped "knife". The gripper itself always moves and is not a part.
    """
    grasped_info = [
        (g, scene.object_of(g), tuple(g.split())) for g in sorted(scene.grasped)
    ]
    moving: set[str] = set()
    for name in scene.parts:
        if name in scene.grasped:
            moving.add(name)
            continue
        obj = scene.object_of(name)
        tokens = tuple(name.split())
        for _, g_obj, g_tokens in grasped_info:
            if obj is not None and g_obj is not None:
                if obj == g_obj:
                    moving.add(name)
                    break
            elif tokens[: len(g_tokens)] == g_tokens:
                moving.add(name)
                break
    return frozenset(moving), frozenset(scene.parts) - moving


def transform_scene(scene: Scene, pose: PoseSE3, moving: frozenset[str] | None = None) -> Scene:
    """Scene after the gripper (and attached parts) move from the initial pose
    to `pose`; the pre-move state is appended to history."""
    if moving is None:
        moving, _ = partition_moving_static(scene)
    start = initial_pose(scene)
    rel = pose.rotation @ start.rotation.T
    t0 = start.translation.as_array()
    t = pose.translation.as_array()
    parts = {
        name: PointCloud((cloud.coords - t0) @ rel.T + t) if name in moving else cloud
        for name, cloud in scene.parts.items()
    }
    gripper = Point3.from_array(rel @ (scene.gripper_position.as_array() - t0) + t)
    return Scene(
        parts=parts,
        grasped=scene.grasped,
        gripper_position=gripper,
        gripper_open_fraction=scene.gripper_open_fraction,
        history=scene.history + (scene.snapshot(),),
        objects=dict(scene.objects),
    )


def objective(expr: TypedExpr, scene: Scene, pose: PoseSE3, cfg: SolveConfig) -> float:
    """The solver's full objective at one pose."""
    return objective_terms(expr, scene, pose, cfg)[0]


def objective_terms(
    expr: TypedExpr, scene: Scene, pose: PoseSE3, cfg: SolveConfig
) -> tuple[float, float, float, float]:
    """(objective, cost term, translation regularizer, rotation regularizer)."""
    moved = transform_scene(scene, pose)
    cost = evaluate(expr, EvalContext(moved))
    start = initial_pose(scene)
    reg_t = float(np.linalg.norm(pose.translation.as_array() - start.translation.as_array()))
    euler = euler_from_rotation(pose.rotation @ start.rotation.T)
    reg_r = abs(euler.rx) + abs(euler.ry) + abs(euler.rz)
    return cost + cfg.alpha * reg_t + cfg.beta * reg_r, cost, reg_t, reg_r


def solve(expr: TypedExpr, scene: Scene, cfg: SolveConfig | None = None) -> SolveResult:
    """Find the pose minimizing the objective; deterministic in (expr, scene, cfg)."""
    cfg = cfg or SolveConfig()
    if expr.sort != "cost":
        raise EvalError(f"solve needs a cost-sorted expression, got {expr.sort!r}")
    moving, _ = partition_moving_static(scene)
    subjects = motion_subjects(expr)
    movable = set(moving) | {GRIPPER_NAME}
    if subjects and subjects.isdisjoint(movable):
        raise NoMovingPartsError(
            f"expression constrains {sorted(subjects)} but nothing grasped moves"
        )

    start = initial_pose(scene)
    t0 = start.translation.as_array()
    r0 = start.rotation
    snap = scene.snapshot()
    pre_history = scene.history + (snap,)
    moving_coords = {name: scene.parts[name].coords for name in moving}
    static_parts = {name: cloud for name, cloud in scene.parts.items() if name not in moving}

    def scene_at(x: np.ndarray) -> Scene:
        rel = rotation_xyz(x[0], x[1], x[2])
        t = t0 + x[3:6]
        parts = dict(static_parts)
        for name, coords in moving_coords.items():
            parts[name] = PointCloud((coords - t0) @ rel.T + t)
        return Scene(
            parts=parts,
            grasped=scene.grasped,
            gripper_position=Point3.from_array(rel @ (scene.gripper_position.as_array() - t0) + t),
            gripper_open_fraction=scene.gripper_open_fraction,
            history=pre_history,
            objects=dict(scene.objects),
        )

    def f(x: np.ndarray) -> float:
        cost = evaluate(expr, EvalContext(scene_at(x)))
        rel = rotation_xyz(x[0], x[1], x[2])
        euler = euler_from_rotation(rel)
        reg_r = abs(euler.rx) + abs(euler.ry) + abs(euler.rz)
        return cost + cfg.alpha * float(np.linalg.norm(x[3:6])) + cfg.beta * reg_r

    seed = cfg.seed & 0xFFFFFFFFFFFFFFFF  # SeedSequence wants unsigned 64-bit
    rng = np.random.default_rng(seed)
    starts = [np.zeros(6)]
    for _ in range(cfg.restarts - 1):
        euler = rng.uniform(-np.pi / 2, np.pi / 2, size=3)
        trans = rng.uniform(-0.2, 0.2, size=3)
        starts.append(np.concatenate([euler, trans]))

    best: tuple[float, int, np.ndarray, int, bool] | None = None
    total_evals = 0
    for index, x_start in enumerate(starts):
        poll_rng = np.random.default_rng((seed, index))
        x, fx, evals, converged = _pattern_search(f, x_start, cfg, poll_rng)
        total_evals += evals
        key = (fx, index)
        if best is None or key < (best[0], best[1]):
            best = (fx, index, x, evals, converged)

    assert best is not None
    _, restart_index, x, evals, converged = best
    pose = PoseSE3(
        rotation_xyz(x[0], x[1], x[2]) @ r0, Point3.from_array(t0 + x[3:6])
    )
    obj, cost, reg_t, reg_r = objective_terms(expr, scene, pose, cfg)
    return SolveResult(
        pose=pose,
        objective=obj,
        cost_term=cost,
        reg_translation=reg_t,
        reg_rotation=reg_r,
        iterations=evals,
        converged=converged,
        restart_index=restart_index,
        total_evaluations=total_evals,
    )


_RANDOM_POLLS = 12
_INIT_STEPS = np.array([_ROT_STEP] * 3 + [_TRANS_STEP] * 3)


def _poll(f, x, fx, scale, directions, evals, budget):
    """Greedy +/- probes along each direction; returns the improved point."""
    improved = False
    for direction in directions:
        if evals[0] >= budget:
            break
        for sign in (1.0, -1.0):
            trial = x + sign * scale * direction
            ft = f(trial)
            evals[0] += 1
            if ft < fx:
                x, fx = trial, ft
                improved = True
                break
            if evals[0] >= budget:
                break
    return x, fx, improved


def _pattern_search(
    f, x0: np.ndarray, cfg: SolveConfig, rng
) -> tuple[np.ndarray, float, int, bool]:
    """Pattern search with shrink: each cycle polls the coordinate directions,
    falls back to seeded random directions when those stall, then accelerates
    along the cycle's net movement. Steps halve when a full cycle improves by
    less than the tolerance; converged once they bottom out."""
    evals = [0]
    x = np.array(x0, dtype=float)
    fx = f(x)
    evals[0] += 1
    shrink = 1.0
    eye = np.eye(6)
    converged = False
    while evals[0] < cfg.max_iterations:
        cycle_start = fx
        scale = _INIT_STEPS * shrink
        x1, fx1, improved = _poll(f, x, fx, scale, eye, evals, cfg.max_iterations)
        if not improved and evals[0] < cfg.max_iterations:
            directions = rng.normal(size=(_RANDOM_POLLS, 6))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
            x1, fx1, improved = _poll(f, x1, fx1, scale, directions, evals, cfg.max_iterations)
        if improved:
            while evals[0] < cfg.max_iterations:
                direction = x1 - x
                if not np.any(direction):
                    break
                trial = x1 + direction
                ft = f(trial)
                evals[0] += 1
                if ft < fx1:
                    x, fx = x1, fx1
                    x1, fx1 = trial, ft
                else:
                    break
        x, fx = x1, fx1
        if cycle_start - fx < cfg.tolerance:
            if shrink * float(_INIT_STEPS.max()) <= _STEP_FLOOR:
                converged = True
                break
            shrink *= 0.5
    return x, fx, evals[0], converged
