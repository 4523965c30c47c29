"""Evaluate a typed cost expression against a scene.

Each cost word measures one geometric violation and is zero exactly when the
relation holds: distances in meters, alignment terms in [0, 1] via |cosine|
(so the principal-axis sign never matters), uprightness signed in [0, 2].
A sum evaluates to the exact sum of its terms; mixed units are added
unweighted, matching how programs are written, with optional per-word
weights for experimentation.

Evaluation is pure given an immutable context and may run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import ManiplangError
from .geometry import (
    DegenerateAxisError,
    DegenerateDirectionError,
    PointCloud,
    angle_between,
    extent,
    principal_axis,
)
from .language.ast import BinOp, Call, Literal, Neg, Triple, TypedExpr
from .scene import GRIPPER_NAME, Scene

CostValue = float

_UP = np.array([0.0, 0.0, 1.0])


class EvalError(ManiplangError):
    pass


class MissingPartError(EvalError):
    def __init__(self, name: str):
        self.part = name
        super().__init__(f"no part named {name!r} in scene")


class EmptyHistoryError(EvalError):
    pass


@dataclass(frozen=True)
class EvalContext:
    """Scene plus an optional part-name resolver hook.

    The default resolver is exact map lookup; the retrieval module can
    substitute a phrase-matching one. `term_weights` scales individual
    cost words by name (default weight 1).
    """

    scene: Scene
    part_resolver: Callable[[str], PointCloud | None] | None = None
    term_weights: Mapping[str, float] = field(default_factory=dict)

    def resolve_cloud(self, name: str) -> PointCloud:
        if name == GRIPPER_NAME:
            raise MissingPartError(name)
        if self.part_resolver is not None:
            cloud = self.part_resolver(name)
        else:
            cloud = self.scene.parts.get(name)
        if cloud is None:
            raise MissingPartError(name)
        return cloud

    def resolve_point(self, name: str) -> np.ndarray:
        if name == GRIPPER_NAME:
            return self.scene.gripper_position.as_array()
        return self.resolve_cloud(name).coords.mean(axis=0)


def evaluate(expr: TypedExpr, ctx: EvalContext) -> CostValue:
    """Evaluate a cost-sorted expression to a non-negative scalar."""
    if expr.sort != "cost":
        raise EvalError(f"can only evaluate cost expressions, got sort {expr.sort!r}")
    return _eval(expr, ctx)


def _eval(node: TypedExpr, ctx: EvalContext):
    expr = node.expr
    if isinstance(expr, Literal):
        if node.sort == "point" and isinstance(expr.value, str):
            return ctx.resolve_point(expr.value)
        return expr.value
    if isinstance(expr, Triple):
        return np.array([_eval(item, ctx) for item in node.children], dtype=float)
    if isinstance(expr, Neg):
        return -_eval(node.children[0], ctx)
    if isinstance(expr, BinOp):
        left = _eval(node.children[0], ctx)
        right = _eval(node.children[1], ctx)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        return left * right
    if isinstance(expr, Call):
        return _eval_call(node, ctx)
    raise EvalError(f"cannot evaluate node {expr!r}")


def _arg(node: TypedExpr, name: str, ctx: EvalContext):
    bound = node.binding(name)
    return None if bound is None else _eval(bound, ctx)


def _string_arg(node: TypedExpr, name: str) -> str:
    bound = node.binding(name)
    assert bound is not None and isinstance(bound.expr, Literal)
    return str(bound.expr.value)


def _eval_call(node: TypedExpr, ctx: EvalContext):
    word = node.word
    if word in _GETTERS:
        return _GETTERS[word](node, ctx)
    if word in _COST_WORDS:
        value = _COST_WORDS[word](node, ctx)
        return value * float(ctx.term_weights.get(word, 1.0))
    raise EvalError(f"word {word!r} is not evaluable (void actions run in the pipeline)")


# -- getters -----------------------------------------------------------------


def _get_centroid(node, ctx):
    return ctx.resolve_point(_string_arg(node, "part"))


def _centroid_last(node, ctx):
    name = _string_arg(node, "part")
    if not ctx.scene.history:
        raise EmptyHistoryError(f"centroid_last({name!r}) needs at least one recorded snapshot")
    snap = ctx.scene.history[-1]
    if name == GRIPPER_NAME:
        return snap.gripper_position.as_array()
    if name not in snap.part_centroids:
        raise MissingPartError(name)
    return snap.part_centroids[name].as_array()


def _get_axis(node, ctx):
    return principal_axis(ctx.resolve_cloud(_string_arg(node, "part"))).as_array()


def _get_gripper_pos(node, ctx):
    return ctx.scene.gripper_position.as_array()


def _make_extent(dimension):
    def _getter(node, ctx):
        return extent(ctx.resolve_cloud(_string_arg(node, "part")), dimension)

    return _getter


def _direction_of(node, ctx):
    start = ctx.resolve_point(_string_arg(node, "start"))
    end = ctx.resolve_point(_string_arg(node, "end"))
    delta = end - start
    norm = float(np.linalg.norm(delta))
    if norm <= 1e-9:
        raise DegenerateDirectionError("direction_of: start and end coincide")
    return delta / norm


_GETTERS = {
    "get_centroid": _get_centroid,
    "centroid_last": _centroid_last,
    "get_axis": _get_axis,
    "get_gripper_pos": _get_gripper_pos,
    "get_height": _make_extent("height"),
    "get_width": _make_extent("width"),
    "get_length": _make_extent("length"),
    "direction_of": _direction_of,
}


# -- cost words --------------------------------------------------------------


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm <= 1e-12:
        raise DegenerateAxisError("zero-length vector in alignment cost")
    return vec / norm


def _move_cost(node, ctx):
    source = _arg(node, "source", ctx)
    target = _arg(node, "target", ctx)
    offset = _arg(node, "offset", ctx)
    if offset is not None:
        target = target + offset
    return float(np.linalg.norm(source - target))


def _move_cost_with_offset(node, ctx):
    name = _string_arg(node, "part")
    offset = _arg(node, "offset", ctx)
    if not ctx.scene.history:
        raise EmptyHistoryError(
            f"move_cost_with_offset({name!r}) needs a snapshot of the part's prior position"
        )
    snap = ctx.scene.history[-1]
    if name == GRIPPER_NAME:
        anchor = snap.gripper_position.as_array()
    elif name in snap.part_centroids:
        anchor = snap.part_centroids[name].as_array()
    else:
        raise MissingPartError(name)
    return float(np.linalg.norm(ctx.resolve_point(name) - (anchor + offset)))


def _alignment(node, ctx) -> float:
    a = _unit(_arg(node, "first", ctx))
    b = _unit(_arg(node, "second", ctx))
    return float(min(abs(float(a @ b)), 1.0))


def _parallel_cost(node, ctx):
    return 1.0 - _alignment(node, ctx)


def _perpendicular_cost(node, ctx):
    return _alignment(node, ctx)


def _rotate_cost(node, ctx):
    axis = _arg(node, "axis", ctx)
    reference = _arg(node, "reference", ctx)
    target = float(_arg(node, "angle", ctx))
    return abs(angle_between(axis, reference) - target) / math.pi


def _orbit_cost(node, ctx):
    center_name = _string_arg(node, "center_part")
    center_cloud = ctx.resolve_cloud(center_name)
    axis = principal_axis(center_cloud).as_array()
    center = center_cloud.coords.mean(axis=0)
    moving = ctx.resolve_point(_string_arg(node, "moving_part"))
    radius = float(_arg(node, "radius", ctx))
    rel = moving - center
    radial = rel - (rel @ axis) * axis
    return abs(float(np.linalg.norm(radial)) - radius)


def _upright_cost(node, ctx):
    up = ctx.resolve_point(_string_arg(node, "up_part"))
    down = ctx.resolve_point(_string_arg(node, "down_part"))
    delta = up - down
    norm = float(np.linalg.norm(delta))
    if norm <= 1e-9:
        raise DegenerateDirectionError("upright_cost: part centroids coincide")
    # Signed on purpose: "up above down" is not symmetric under axis flips.
    return float(min(max(1.0 - float(delta / norm @ _UP), 0.0), 2.0))


def _gripper_open_cost(node, ctx):
    return 1.0 - ctx.scene.gripper_open_fraction


def _gripper_close_first_cost(node, ctx):
    return ctx.scene.gripper_open_fraction


_COST_WORDS = {
    "move_cost": _move_cost,
    "move_cost_with_offset": _move_cost_with_offset,
    "parallel_cost": _parallel_cost,
    "perpendicular_cost": _perpendicular_cost,
    "rotate_cost": _rotate_cost,
    "orbit_cost": _orbit_cost,
    "upright_cost": _upright_cost,
    "gripper_open_cost": _gripper_open_cost,
    "gripper_close_first_cost": _gripper_close_first_cost,
}

COST_WORD_NAMES = tuple(sorted(_COST_WORDS))


def motion_subjects(expr: TypedExpr) -> frozenset[str]:
    """Part names whose placement the expression constrains.

    Used by the solver to detect programs that demand motion when nothing
    is grasped: the subject of a move, the parts of upright/orbit words,
    and any part feeding an alignment or rotation cost through its axis.
    """
    subjects: set[str] = set()

    def visit(node: TypedExpr, collect_parts: bool):
        expr_node = node.expr
        if collect_parts and isinstance(expr_node, Literal) and node.sort in ("point", "string"):
            if isinstance(expr_node.value, str):
                subjects.add(expr_node.value)
        if isinstance(expr_node, Call):
            word = node.word
            if word == "move_cost":
                bound = node.binding("source")
                if bound is not None:
                    visit(bound, True)
                return
            if word == "move_cost_with_offset":
                subjects.add(_string_arg(node, "part"))
                return
            if word == "upright_cost":
                subjects.add(_string_arg(node, "up_part"))
                subjects.add(_string_arg(node, "down_part"))
                return
            if word == "orbit_cost":
                subjects.add(_string_arg(node, "moving_part"))
                return
            if word in ("parallel_cost", "perpendicular_cost", "rotate_cost"):
                for _, child in node.bound:
                    visit(child, True)
                return
            if word in ("get_axis", "get_centroid", "centroid_last") and collect_parts:
                subjects.add(_string_arg(node, "part"))
                return
            if word == "direction_of" and collect_parts:
                subjects.add(_string_arg(node, "start"))
                subjects.add(_string_arg(node, "end"))
                return
        for child in node.children:
            visit(child, collect_parts if not isinstance(expr_node, Call) else False)

    visit(expr, False)
    return frozenset(subjects)
