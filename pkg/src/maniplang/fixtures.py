"""Synthetic scenes and shipped data files consumed across the test suite.

Scene construction is deterministic given the seed and analytically exact
where a test needs a known optimum: after sampling, clouds are nudged (a
rigid rotation about their own centroid, a rigid shift) so the *measured*
principal axes and centroids satisfy the advertised relation to machine
precision: the knife-blade axis is exactly perpendicular to the
carrot axis at the known solved pose, and the pen axis sits exactly 30
degrees off the holder axis. Sampling noise therefore never leaks into
tolerances.

The data tree (tasks, judgment corpus, profiles, part database, mock
translations, prompt templates) regenerates byte-identically via
`maniplang fixtures regen --out DIR`; the shipped copies under
`maniplang/data` were produced by exactly that code path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ManiplangError
from .geometry import Point3, PointCloud, PoseSE3, rotation_about_axis, rotation_xyz
from .language.vocabulary import (
    Param,
    Vocabulary,
    Word,
    default_grammar,
    default_vocabulary,
    vocabulary_to_json,
)
from .pipeline import AtomicAction, PromptTemplate
from .retrieval import PartDatabase, PartEntry, SupportPair, database_to_json
from .scene import Scene, scene_to_json

DEFAULT_SEED = 7
POINTS_PER_PART = 1000

SCENE_KINDS = (
    "cube_target",
    "pen_holder",
    "carrot_knife",
    "carrot_knife_solved",
    "teapot_lid",
)

GARBAGE_INSTRUCTION = "summon the kraken"  # deliberately invalid mock program


class FixtureError(ManiplangError):
    pass


@dataclass(frozen=True)
class Task:
    task_id: int
    title: str
    instruction: str


# -- point cloud builders -----------------------------------------------------


def _box(rng, center, size, n=POINTS_PER_PART) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    size = np.asarray(size, dtype=float)
    return rng.uniform(-0.5, 0.5, size=(n, 3)) * size + center


def _cylinder(rng, center, axis, length, radius, n=POINTS_PER_PART) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    t = rng.uniform(-length / 2, length / 2, size=n)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=n))
    return (
        center
        + np.outer(t, axis)
        + np.outer(r * np.cos(theta), u)
        + np.outer(r * np.sin(theta), v)
    )


def _annulus(rng, center, inner, outer, thickness, n=POINTS_PER_PART) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    r = np.sqrt(rng.uniform(inner**2, outer**2, size=n))
    z = rng.uniform(-thickness / 2, thickness / 2, size=n)
    return center + np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=1)


def _pca_axis(coords: np.ndarray) -> np.ndarray:
    centered = coords - coords.mean(axis=0)
    cov = centered.T @ centered / coords.shape[0]
    _, vecs = np.linalg.eigh(cov)
    axis = vecs[:, -1]
    dominant = int(np.argmax(np.abs(axis)))
    return axis if axis[dominant] >= 0 else -axis


def _rotate_about(coords: np.ndarray, center, rotation: np.ndarray) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    return (coords - center) @ rotation.T + center


def _align_axis_to(coords: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate the cloud about its centroid so its measured principal axis
    lands exactly on `target` (sign chosen to minimize the rotation)."""
    axis = _pca_axis(coords)
    target = np.asarray(target, dtype=float)
    target = target / np.linalg.norm(target)
    if float(axis @ target) < 0:
        target = -target
    cross = np.cross(axis, target)
    norm = float(np.linalg.norm(cross))
    if norm < 1e-15:
        return coords
    angle = math.atan2(norm, float(axis @ target))
    rot = rotation_about_axis(cross, angle)
    return _rotate_about(coords, coords.mean(axis=0), rot)


# -- scenes -------------------------------------------------------------------


def make_scene(kind: str, seed: int = DEFAULT_SEED) -> Scene:
    """Deterministic synthetic scene; identical (kind, seed) gives an
    identical scene."""
    if kind == "cube_target":
        return _cube_target(seed)
    if kind == "pen_holder":
        return _pen_holder(seed)
    if kind == "carrot_knife":
        return _carrot_knife(seed)[0]
    if kind == "carrot_knife_solved":
        return _carrot_knife(seed)[2]
    if kind == "teapot_lid":
        return _teapot_lid(seed)
    raise FixtureError(f"unknown scene kind {kind!r}; expected one of {SCENE_KINDS}")


def known_solution(kind: str, seed: int = DEFAULT_SEED) -> PoseSE3:
    """The constructed-by-hand optimal gripper pose for fixtures that have one."""
    if kind == "carrot_knife":
        return _carrot_knife(seed)[1]
    if kind == "cube_target":
        scene = _cube_target(seed)
        target = scene.parts["target"].coords.mean(axis=0) + np.array([0.0, 0.0, 0.1])
        cube = scene.parts["cube"].coords.mean(axis=0)
        shift = target - cube
        return PoseSE3(np.eye(3), Point3.from_array(scene.gripper_position.as_array() + shift))
    raise FixtureError(f"no known solution recorded for scene kind {kind!r}")


def _cube_target(seed: int) -> Scene:
    rng = np.random.default_rng(seed)
    cube = _box(rng, (0.3, 0.0, 0.02), (0.04, 0.04, 0.04))
    target = _box(rng, (0.5, 0.2, 0.005), (0.1, 0.1, 0.01))
    return Scene(
        parts={"cube": PointCloud(cube), "target": PointCloud(target)},
        grasped=frozenset({"cube"}),
        gripper_position=Point3.from_array(cube.mean(axis=0)),
        gripper_open_fraction=0.0,
        objects={"cube": "cube", "target": "target"},
    )


def _pen_holder(seed: int) -> Scene:
    rng = np.random.default_rng(seed)
    holder = _cylinder(rng, (0.45, 0.1, 0.06), (0.0, 0.0, 1.0), 0.12, 0.02)
    tilt = rotation_xyz(math.pi / 6, 0.0, 0.0) @ np.array([0.0, 0.0, 1.0])
    pen = _cylinder(rng, (0.3, -0.05, 0.2), tilt, 0.15, 0.004)
    # Pin the measured axes exactly 30 degrees apart: target = holder axis
    # rotated by pi/6 about the mutual normal.
    holder_axis = _pca_axis(holder)
    pen_axis = _pca_axis(pen)
    normal = np.cross(holder_axis, pen_axis)
    normal /= np.linalg.norm(normal)
    pen = _align_axis_to(pen, rotation_about_axis(normal, math.pi / 6) @ holder_axis)
    return Scene(
        parts={"pen": PointCloud(pen), "pen holder": PointCloud(holder)},
        grasped=frozenset({"pen"}),
        gripper_position=Point3.from_array(pen.mean(axis=0)),
        gripper_open_fraction=0.0,
        objects={"pen": "pen", "pen holder": "pen holder"},
    )


_KNIFE_OFFSET = np.array([0.0, 0.0, 0.1])  # handle sits 0.1 m above the blade


def _carrot_knife(seed: int) -> tuple[Scene, PoseSE3, Scene]:
    """(start scene, known solution pose, solved scene).

    Solved configuration: blade axis exactly perpendicular to the carrot
    axis, handle centroid exactly 0.1 m above the blade centroid. The start
    scene is that configuration rotated rigidly about the blade centroid,
    so undoing the rotation is a certificate optimum.
    """
    rng = np.random.default_rng(seed)
    carrot = _cylinder(rng, (0.4, 0.0, 0.015), (1.0, 0.0, 0.0), 0.15, 0.012)
    carrot_axis = _pca_axis(carrot)

    blade = _box(rng, (0.4, 0.0, 0.13), (0.02, 0.12, 0.004))
    blade_axis = _pca_axis(blade)
    perp = blade_axis - float(blade_axis @ carrot_axis) * carrot_axis
    blade = _align_axis_to(blade, perp / np.linalg.norm(perp))
    blade_c = blade.mean(axis=0)

    handle = _box(rng, tuple(blade_c + _KNIFE_OFFSET), (0.022, 0.022, 0.1))
    handle += (blade_c + _KNIFE_OFFSET) - handle.mean(axis=0)

    solved = Scene(
        parts={
            "carrot": PointCloud(carrot),
            "knife": PointCloud(handle),
            "knife blade": PointCloud(blade),
        },
        grasped=frozenset({"knife"}),
        gripper_position=Point3.from_array(blade_c + _KNIFE_OFFSET),
        gripper_open_fraction=0.0,
        objects={"carrot": "carrot", "knife": "knife", "knife blade": "knife"},
    )

    offset_rot = rotation_xyz(0.0, 0.0, math.radians(35)) @ rotation_xyz(math.radians(20), 0.0, 0.0)
    start = Scene(
        parts={
            "carrot": PointCloud(carrot),
            "knife": PointCloud(_rotate_about(handle, blade_c, offset_rot)),
            "knife blade": PointCloud(_rotate_about(blade, blade_c, offset_rot)),
        },
        grasped=frozenset({"knife"}),
        gripper_position=Point3.from_array(blade_c + offset_rot @ _KNIFE_OFFSET),
        gripper_open_fraction=0.0,
        objects={"carrot": "carrot", "knife": "knife", "knife blade": "knife"},
    )
    solution = PoseSE3(offset_rot.T, Point3.from_array(blade_c + _KNIFE_OFFSET))
    return start, solution, solved


def _teapot_lid(seed: int) -> Scene:
    rng = np.random.default_rng(seed)
    body = _cylinder(rng, (0.5, 0.0, 0.06), (0.0, 0.0, 1.0), 0.12, 0.05)
    opening = _annulus(rng, (0.5, 0.0, 0.125), 0.038, 0.046, 0.004)
    spout = _cylinder(rng, (0.56, 0.0, 0.09), (0.95, 0.0, 0.3), 0.06, 0.008)
    lid = _cylinder(rng, (0.3, 0.2, 0.01), (0.0, 0.0, 1.0), 0.015, 0.045)
    return Scene(
        parts={
            "teapot": PointCloud(body),
            "teapot opening": PointCloud(opening),
            "teapot spout": PointCloud(spout),
            "lid": PointCloud(lid),
        },
        grasped=frozenset({"lid"}),
        gripper_position=Point3.from_array(lid.mean(axis=0)),
        gripper_open_fraction=0.0,
        objects={
            "teapot": "teapot",
            "teapot opening": "teapot",
            "teapot spout": "teapot",
            "lid": "lid",
        },
    )


# -- task corpus and judgment fixtures ----------------------------------------

_TASKS: tuple[tuple[str, str], ...] = (
    ("Sort the Red Cube", "Pick the red cube from a group and place it inside the red circle."),
    ("Bin the Blue Cylinder", "Pick the blue cylinder and drop it into the bin marked with a blue square."),
    ("Stack Cube on Cube", "Pick the green cube and stack it on top of the yellow cube."),
    ("Move the Soda Can", "Pick the soda can from the left table and place it on the right table."),
    ("Fill the Tray", "Pick the AA battery and place it into the empty slot in the plastic tray."),
    ("Insert the USB Drive", "Pick the USB drive from the table and insert it into the laptop's USB port."),
    ("Assemble the LEGO", "Pick the 2x4 LEGO brick and attach it to the red baseplate, connecting it to two other bricks."),
    ("Place the Ring", "Pick the wooden ring and place it onto the vertical post."),
    ("Put the Lid on the Jar", "Pick the plastic jar lid and place it on top of the jar."),
    ("Hang the Key", "Pick the key and hang it on the keyhook by its hole."),
    ("Push the Dice", "Push the white dice across the table until it crosses the black line."),
    ("Flip the Pancake", "Use the spatula to flip the pancake in the frying pan."),
    ("Close the Drawer", "Push the kitchen drawer closed using the flat of the gripper."),
    ("Press the Doorbell", "Press the round, lit doorbell button on the wall."),
    ("Align the Block", "Push the wooden block until it is flush against the corner of the table."),
    ("Scoop the Rice", "Use the metal spoon to scoop rice from the pot into the bowl."),
    ("Stir the Soup", "Use the spoon to stir the liquid in the pot three times clockwise."),
    ("Hammer the Nail", "Use the toy hammer to tap the nail until its head is flush with the board."),
    ("Screw in the Lightbulb", "Pick the lightbulb and screw it into the empty lamp socket."),
    ("Pour the Water", "Pick the pitcher and pour water into the empty glass until it is half-full."),
    ("Uncoil the Rope", "Manipulate the coiled rope until it forms a straight line from start to end."),
    ("Fold the Washcloth", "Fold the small, square washcloth in half."),
    ("Open the Bag", "Use two grippers to pull the handles of the plastic bag apart."),
    ("Drape the Towel", "Drape the hand towel over the horizontal bar."),
    ("Route the Cable", "Route the USB cable around the two posts in an S-shape."),
    ("Grasp the Marble", "Pick the glass marble from a flat surface."),
    ("Grasp the Coin", "Pick the single coin from the table."),
    ("Re-grip the Screwdriver", "Pick the screwdriver by its handle, then place it down and re-grip it by its shaft."),
    ("Pick the Book", "Pick the paperback book from the shelf by its spine."),
    ("Hook the Mug", "Hook a gripper finger through the handle of the coffee mug and lift it."),
    ("Place the T-Block", "Pick the T-shaped block and insert it into the matching T-shaped slot on the board."),
    ("Assemble the Stack", "Pick the large square block and place it on the table, then place the medium block on it, and finally the small block on top."),
    ("Plug in the Lamp", "Pick the power plug from the floor and insert it into the wall outlet."),
)

# One verdict code per task, in task order. Codes map to the judge's wording
# per method below; only fully-correct verdicts count as success.
_JUDGMENT_CODES = {
    "seam": "ccccccicccciccciiiiiiiccicccccccc",
    "omnimanip": "cccccppccccxcccxpxxpxxxcpcccccpcp",
    "instruct2act": "ccccccccccicicixciccccccicccccccc",
    "rekep": "sssssppsspssssspspsspssspssssspsp",
}

_VERDICT_TEXT = {
    "seam": {"c": "correct", "i": "insufficient"},
    "omnimanip": {
        "c": "correct and sufficient",
        "p": "partially correct but insufficient",
        "x": "incorrect and insufficient",
    },
    "instruct2act": {"c": "correct and sufficient", "i": "insufficient", "x": "incorrect"},
    "rekep": {"s": "success", "p": "partial success"},
}

_SUCCESS_CODES = frozenset({"c", "s"})


def tasks() -> list[Task]:
    return [Task(i + 1, title, text) for i, (title, text) in enumerate(_TASKS)]


def judgments(method: str) -> list[dict]:
    codes = _JUDGMENT_CODES[method]
    text = _VERDICT_TEXT[method]
    return [
        {"task_id": i + 1, "verdict": text[code], "success": code in _SUCCESS_CODES}
        for i, code in enumerate(codes)
    ]


# -- representation profiles ---------------------------------------------------

_CORE_TABLE_WORDS = (
    "get_axis",
    "get_centroid",
    "get_height",
    "move_cost",
    "parallel_cost",
    "get_gripper_pos",
    "perpendicular_cost",
    "rotate_cost",
    "orbit_cost",
    "gripper_close",
    "gripper_open",
)


def _core_vocabulary() -> Vocabulary:
    """The 11-word core table, borrowing the full vocabulary's signatures."""
    full = {w.name: w for w in default_vocabulary().words}
    return Vocabulary([full[name] for name in _CORE_TABLE_WORDS])


def _simple_word(name, arity_sorts, result):
    params = tuple(Param(f"arg{i}" if n is None else n, s) for i, (n, s) in enumerate(arity_sorts))
    return Word(name, params, result)


def _rekep_vocabulary() -> Vocabulary:
    s, p = "string", "point"
    return Vocabulary(
        [
            _simple_word("get_keypoint", [("part", s)], p),
            _simple_word("gripper_close", [], "void"),
            _simple_word("gripper_open", [], "void"),
            _simple_word("move_to", [("target", p)], "void"),
            _simple_word("get_gripper_pos", [], p),
            _simple_word("get_gripper_pose", [], "vec"),
        ],
        has_host_escape=True,
    )


def _omnimanip_vocabulary() -> Vocabulary:
    s, p = "string", "point"
    return Vocabulary(
        [
            _simple_word("gripper_close", [], "void"),
            _simple_word("gripper_open", [], "void"),
            _simple_word("move_to", [("target", p)], "void"),
            _simple_word("get_gripper_pos", [], p),
            _simple_word("get_gripper_pose", [], "vec"),
            _simple_word("get_keypoint", [("part", s)], p),
            _simple_word("get_axis", [("part", s)], "vec"),
        ]
    )


def _instruct2act_vocabulary() -> Vocabulary:
    s = "string"
    unary = [
        "pick",
        "place",
        "pick_place",
        "push",
        "press",
        "flip",
        "tap",
    ]
    binary = [
        "insert",
        "move_parallel",
        "move_perpendicular",
        "scoop",
        "stir",
        "screw_rotation",
        "controlled_pour",
        "route_around",
        "pull_apart",
        "fold",
        "straighten",
    ]
    words = [
        _simple_word("gripper_close", [], "void"),
        _simple_word("gripper_open", [], "void"),
        _simple_word("get_gripper_pos", [], "point"),
        _simple_word("get_gripper_pose", [], "vec"),
        _simple_word("find", [("part", s)], "point"),
        _simple_word("move_above", [("part", s), ("target", s), ("offset", "scalar")], "void"),
    ]
    words += [_simple_word(name, [("part", s)], "void") for name in unary]
    words += [_simple_word(name, [("first", s), ("second", s)], "void") for name in binary]
    return Vocabulary(words, has_host_escape=True)


def build_profiles() -> dict[str, dict]:
    """Profile documents keyed by file stem; judgment corpus embedded."""
    seam_doc = vocabulary_to_json(default_vocabulary(), default_grammar())
    seam_doc["name"] = "seam"
    seam_doc["task_outcomes"] = judgments("seam")

    seam_core_doc = vocabulary_to_json(_core_vocabulary(), default_grammar())
    seam_core_doc["name"] = "seam_core"
    seam_core_doc["task_outcomes"] = judgments("seam")

    rekep_doc = vocabulary_to_json(_rekep_vocabulary())
    rekep_doc["name"] = "rekep"
    rekep_doc["task_outcomes"] = judgments("rekep")
    rekep_doc["grammar_notes"] = [
        "cost -> cost + cost",
        "cost -> cost_fns, kpts",
        "kpts -> kpts, keypoint",
        "kpts -> get_keypoint",
        "kpts -> get_end_effector",
        "plus the host-language grammar",
    ]

    omnimanip_doc = vocabulary_to_json(_omnimanip_vocabulary())
    omnimanip_doc["name"] = "omnimanip"
    omnimanip_doc["task_outcomes"] = judgments("omnimanip")
    omnimanip_doc["grammar_notes"] = [
        "cost -> cost + cost",
        "cost -> angular constraint, p, p",
        "start -> distance constraint, p, p",
        "p -> get_keypoint",
        "p -> get_axis",
    ]

    instruct2act_doc = vocabulary_to_json(_instruct2act_vocabulary())
    instruct2act_doc["name"] = "instruct2act"
    instruct2act_doc["task_outcomes"] = judgments("instruct2act")
    instruct2act_doc["grammar_notes"] = [
        "action -> action + action",
        "action -> verb, segment",
        "segment -> find, object",
        "plus the host-language grammar",
    ]

    return {
        "seam": seam_doc,
        "seam_core": seam_core_doc,
        "rekep": rekep_doc,
        "omnimanip": omnimanip_doc,
        "instruct2act": instruct2act_doc,
    }


# -- part database --------------------------------------------------------------


def _entry(phrases, stem, pairs=1) -> PartEntry:
    return PartEntry(
        key_phrases=tuple(phrases),
        support_pairs=tuple(
            SupportPair(f"support/{stem}_{i:02d}.rgb.png", f"support/{stem}_{i:02d}.mask.png")
            for i in range(1, pairs + 1)
        ),
    )


def build_part_database() -> PartDatabase:
    return PartDatabase(
        entries=(
            _entry(["cup opening", "cup rim", "cup edge"], "cup_opening", 3),
            _entry(["teapot opening", "teapot top rim"], "teapot_opening", 2),
            _entry(["teapot spout", "teapot nozzle"], "teapot_spout", 2),
            _entry(["pen cap", "cap of the pen"], "pen_cap"),
            _entry(["drawer handle", "drawer pull"], "drawer_handle", 2),
            _entry(["button", "push button", "doorbell button"], "button", 2),
            _entry(["microwave hinge", "microwave door hinge"], "microwave_hinge"),
            _entry(["flower stem", "plant stem"], "flower_stem"),
            _entry(["bowl rim", "bowl edge"], "bowl_rim"),
            _entry(["knife blade", "blade of the knife"], "knife_blade"),
        )
    )


# -- mock translations -----------------------------------------------------------


def build_mock_translations() -> dict[str, str]:
    """Instruction -> candidate program text (stages separated by ---).

    Every entry validates against the grammar except the one keyed by
    GARBAGE_INSTRUCTION, which exists to exercise the reject/reprompt path.
    """
    return {
        "put the pen into the penholder": (
            "parallel_cost(get_axis('pen'), get_axis('pen holder')) + "
            "move_cost(get_centroid('pen'), get_centroid('pen holder'), offset=[0, 0, 0.12])"
        ),
        "cut the carrot with the knife": (
            "perpendicular_cost(get_axis('carrot'), get_axis('knife blade')) + "
            "move_cost(get_centroid('knife'), get_centroid('knife blade'), offset=[0, 0, 0.1])"
        ),
        "move the cube above the target": (
            "move_cost(get_centroid('cube'), get_centroid('target'), offset=[0, 0, 0.1])"
        ),
        "lift the cube and release it": (
            "move_cost_with_offset('cube', offset=[0, 0, get_height('cube') + 0.1])\n"
            "---\n"
            "gripper_open()"
        ),
        GARBAGE_INSTRUCTION: "fly_to('moon')",
    }


# -- prompt templates ------------------------------------------------------------


def build_prompt_template() -> PromptTemplate:
    return PromptTemplate(
        atomic_actions=(
            AtomicAction(
                "move something to something with an offset",
                "move_cost('<source object part>', centroid('<target object part>') + "
                "np.array([<x>, <y>, <z>])) + "
                "parallel_cost(get_axis('<source object part>'), <vector>) + "
                "upright_cost(up_part='<up object part>', down_part='<down object part>')",
                (
                    "get_height('<object part>'), get_width('<object part>'), "
                    "get_length('<object part>') give part dimensions for sizing the offset",
                    "[<x>, <y>, <z>] is the extra displacement from the target part to the source part",
                    "to hover above the target use [0, 0, get_height('<target object part>') + a margin above 0.1]",
                    "to contact the target from the front use [0, 0, 0]",
                    "keep parallel_cost only when the source part must align with a direction; "
                    "use get_axis('<target object part>') or [0, 0, -1]",
                    "keep upright_cost only when the source object must stay upright; "
                    "up_part and down_part must belong to the same object",
                    "part names follow the form 'part of the object'",
                ),
            ),
            AtomicAction(
                "pick something up or put something down when grasped",
                "move_cost_with_offset('<source object part>', offset=[0, 0, <z>])",
                (
                    "to lift: z = get_height('<source object part>') + a positive margin",
                    "to place: z = -get_height('<source object part>') - a margin",
                ),
            ),
            AtomicAction(
                "press something after aligned",
                "gripper_close_first_cost() + move_cost('gripper', '<target object part>')",
                (),
            ),
            AtomicAction(
                "pull to open something after grasped",
                "move_cost('gripper', centroid_last('gripper') + "
                "direction_of(start='<part to pull away from>', end='gripper') * <offset distance>)",
                ("offset distance is in meters and should exceed 0.1",),
            ),
            AtomicAction(
                "push to close something after grasped",
                "gripper_open_cost()",
                ("opens the gripper and releases the grasped item",),
            ),
            AtomicAction(
                "release something only",
                "gripper_open_cost()",
                ("opens the gripper and releases the grasped item",),
            ),
        )
    )


# -- data files -------------------------------------------------------------------


def _data_root():
    return resources.files("maniplang").joinpath("data")


def _read_json(relative: str):
    return json.loads(_data_root().joinpath(relative).read_text(encoding="utf-8"))


def load_tasks() -> list[Task]:
    return [Task(t["task_id"], t["title"], t["instruction"]) for t in _read_json("tasks_33.json")["tasks"]]


def load_mock_translations() -> dict[str, str]:
    return _read_json("mock_translations.json")


def default_prompt_template() -> PromptTemplate:
    doc = _read_json("prompt_templates.json")
    return PromptTemplate(
        atomic_actions=tuple(
            AtomicAction(a["description"], a["template"], tuple(a.get("notes", ())))
            for a in doc["atomic_actions"]
        )
    )


def shipped_part_database_path() -> Path:
    return Path(str(_data_root().joinpath("part_database.json")))


def shipped_profiles_dir() -> Path:
    return Path(str(_data_root().joinpath("profiles")))


def shipped_tasks_path() -> Path:
    return Path(str(_data_root().joinpath("tasks_33.json")))


def shipped_scene_path(kind: str) -> Path:
    return Path(str(_data_root().joinpath("scenes", f"{kind}.json")))


def _dump(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def regen(out_dir, seed: int = DEFAULT_SEED) -> list[Path]:
    """Write the whole fixture tree; byte-stable for a given seed."""
    out = Path(out_dir)
    (out / "profiles").mkdir(parents=True, exist_ok=True)
    (out / "scenes").mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(relative: str, doc) -> None:
        path = out / relative
        _dump(path, doc)
        written.append(path)

    emit("tasks_33.json", {"tasks": [
        {"task_id": t.task_id, "title": t.title, "instruction": t.instruction} for t in tasks()
    ]})
    emit("part_database.json", database_to_json(build_part_database()))
    emit("mock_translations.json", build_mock_translations())
    template = build_prompt_template()
    emit("prompt_templates.json", {
        "atomic_actions": [
            {"description": a.description, "template": a.template, "notes": list(a.notes)}
            for a in template.atomic_actions
        ]
    })
    emit("vocabulary.json", vocabulary_to_json(default_vocabulary(), default_grammar()))
    for stem, doc in build_profiles().items():
        emit(f"profiles/{stem}.json", doc)
    for kind in SCENE_KINDS:
        emit(f"scenes/{kind}.json", scene_to_json(make_scene(kind, seed)))
    return written
