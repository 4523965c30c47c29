"""maniplang: a typed cost-expression language for robot manipulation.

An instruction becomes a small expression over a fixed vocabulary (axis and
centroid getters, alignment and distance costs, gripper actions); the
expression is grammar-checked, evaluated geometrically against a point-cloud
scene, and minimized over the gripper's SE(3) pose to produce a target
motion. Retrieval, representation metrics, and a mock-translated task
pipeline round out the desk-scale toolkit.
"""

from . import costs, fixtures, geometry, metrics, pipeline, retrieval, scene, solver
from .costs import EvalContext, evaluate
from .errors import ManiplangError
from .language import (
    default_grammar,
    default_vocabulary,
    parse,
    type_check,
    validate_program,
    vocabulary_size,
)
from .scene import Scene, load_scene, save_scene
from .solver import SolveConfig, SolveResult, solve

__version__ = "0.1.0"

__all__ = [
    "EvalContext",
    "ManiplangError",
    "Scene",
    "SolveConfig",
    "SolveResult",
    "costs",
    "default_grammar",
    "default_vocabulary",
    "evaluate",
    "fixtures",
    "geometry",
    "load_scene",
    "metrics",
    "parse",
    "pipeline",
    "retrieval",
    "save_scene",
    "scene",
    "solve",
    "solver",
    "type_check",
    "validate_program",
    "vocabulary_size",
]
