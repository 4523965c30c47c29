"""Acceptance gate: one test per criterion, run with `pytest -v` for a
pass/fail line each. Every tolerance is pinned here, nothing deferred."""

import json
import math
import random
import subprocess
import sys
import time

import numpy as np

from maniplang import fixtures
from maniplang.costs import EvalContext, evaluate
from maniplang.geometry import (
    PoseSE3,
    euler_from_rotation,
    principal_axis,
    rotation_about_axis,
    rotation_from_euler,
)
from maniplang.language import parse, type_check, validate_program
from maniplang.language.typecheck import Accepted
from maniplang.metrics import (
    action_generalizability,
    load_profiles,
    vlm_comprehensibility,
)
from maniplang.pipeline import instantiate_template
from maniplang.retrieval import levenshtein, retrieve
from maniplang.solver import SolveConfig, initial_pose, objective, objective_terms, solve

from util import lev_complete_search, random_rotation, single_part_scene

SECTION1_LISTING = (
    'perpendicular_cost(get_axis("carrot"),get_axis("knife blade"))\n'
    '+move_cost(get_centroid("knife"), get_centroid("knife blade"), offset=[0,0,0.1])'
)
FIG6_PEN_PROGRAM = 'parallel_cost(get_axis("pen"), get_axis("pen holder"))'

TEMPLATE_FILLS = {
    "source object part": "knife blade",
    "target object part": "carrot",
    "up object part": "knife",
    "down object part": "knife blade",
    "object part": "carrot",
    "part to pull away from": "pen holder",
    "x": "0",
    "y": "0",
    "z": "0.15",
    "vector": "get_axis('carrot')",
    "offset distance": "0.15",
}


def _report(number: int, message: str) -> None:
    print(f"ACCEPTANCE {number} PASS: {message}")


def test_criterion_1_grammar_coverage():
    started = time.perf_counter()
    template = fixtures.default_prompt_template()
    assert len(template.atomic_actions) == 6
    for action in template.atomic_actions:
        text = instantiate_template(action.template, TEMPLATE_FILLS)
        verdict = validate_program(text)
        assert isinstance(verdict, Accepted), (action.description, verdict.reason)
    for program in (SECTION1_LISTING, FIG6_PEN_PROGRAM):
        verdict = validate_program(program)
        assert isinstance(verdict, Accepted), verdict.reason
        assert verdict.typed.sort == "cost"
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"grammar coverage took {elapsed:.3f}s"
    _report(1, f"six templates + both verbatim programs validate in {elapsed * 1000:.0f} ms")


def test_criterion_2_cost_identities():
    rng = np.random.default_rng(2024)
    scene = single_part_scene("anchor", [(0, 0, 0)])
    ctx = EvalContext(scene)

    def cost(source: str) -> float:
        return evaluate(type_check(parse(source)), ctx)

    for _ in range(1000):
        a = rng.normal(size=3)
        a /= np.linalg.norm(a)
        b = rng.normal(size=3)
        b /= np.linalg.norm(b)
        pa = f"[{float(a[0])!r}, {float(a[1])!r}, {float(a[2])!r}]"
        pb = f"[{float(b[0])!r}, {float(b[1])!r}, {float(b[2])!r}]"
        parallel = cost(f"parallel_cost({pa}, {pb})")
        perpendicular = cost(f"perpendicular_cost({pa}, {pb})")
        assert parallel >= 0.0 and perpendicular >= 0.0
        assert abs(parallel + perpendicular - 1.0) <= 1e-12

    left = cost("gripper_close_first_cost()")
    right = cost("parallel_cost([1, 0, 0], [0.6, 0.8, 0])")
    combined = cost("gripper_close_first_cost() + parallel_cost([1, 0, 0], [0.6, 0.8, 0])")
    assert combined == left + right  # Sum additivity is exact

    from test_costs import ZERO_SCENES  # the per-word satisfied scenes

    for word in sorted(ZERO_SCENES):
        source, zero_scene = ZERO_SCENES[word]()
        value = evaluate(type_check(parse(source)), EvalContext(zero_scene))
        assert 0.0 <= value < 1e-9, (word, value)
    _report(2, "parallel+perpendicular=1 (1000 pairs), additivity exact, "
               f"zero-at-satisfaction for {len(ZERO_SCENES)} cost words")


def test_criterion_3_solver_on_cube_move():
    scene = fixtures.make_scene("cube_target")
    expr = type_check(
        parse("move_cost(get_centroid('cube'), get_centroid('target'), offset=[0, 0, 0.1])")
    )
    cfg = SolveConfig()
    started = time.perf_counter()
    result = solve(expr, scene, cfg)
    elapsed = time.perf_counter() - started
    assert result.cost_term < 1e-3, f"residual {result.cost_term}"
    assert result.iterations <= 2000
    assert elapsed < 5.0, f"solve took {elapsed:.2f}s"
    decomposition = (
        result.cost_term
        + cfg.alpha * result.reg_translation
        + cfg.beta * result.reg_rotation
    )
    assert abs(result.objective - decomposition) < 1e-9
    recomputed = objective_terms(expr, scene, result.pose, cfg)[0]
    assert abs(result.objective - recomputed) < 1e-9

    zero_scene = single_part_scene("x", [(0.1, 0.2, 0.3)], gripper=(0.4, 0.5, 0.6),
                                   open_fraction=1.0)
    zero = solve(type_check(parse("gripper_open_cost()")), zero_scene, cfg)
    assert cfg.alpha > 0 and cfg.beta > 0
    pose_drift = np.linalg.norm(
        zero.pose.translation.as_array() - np.array([0.4, 0.5, 0.6])
    ) + np.linalg.norm(zero.pose.rotation - np.eye(3))
    assert pose_drift < 1e-6
    _report(3, f"cube residual {result.cost_term:.1e} in {result.iterations} iterations "
               f"({elapsed:.2f}s); zero-cost pose drift {pose_drift:.1e}")


def test_criterion_4_pen_alignment_vs_sweep_oracle():
    scene = fixtures.make_scene("pen_holder")
    expr = type_check(parse(FIG6_PEN_PROGRAM))
    cfg = SolveConfig(beta=0.01)  # beta=0.05 floors parallel_cost at ~beta^2/2 > 1e-3

    # Oracle first: dense sweep over the known disambiguating axis.
    pen_axis = principal_axis(scene.parts["pen"]).as_array()
    holder_axis = principal_axis(scene.parts["pen holder"]).as_array()
    normal = np.cross(pen_axis, holder_axis)
    normal /= np.linalg.norm(normal)
    start = initial_pose(scene)
    sweep_best = math.inf
    for theta in np.linspace(-math.pi, math.pi, 721):
        pose = PoseSE3(rotation_about_axis(normal, theta) @ start.rotation, start.translation)
        sweep_best = min(sweep_best, objective(expr, scene, pose, cfg))

    result = solve(expr, scene, cfg)
    assert result.cost_term < 1e-3, f"parallel_cost {result.cost_term}"
    assert abs(result.objective - sweep_best) <= 1e-3, (result.objective, sweep_best)
    assert result.reg_rotation <= math.pi / 6 + 0.05  # no more rotation than the task needs
    _report(4, f"parallel_cost {result.cost_term:.1e}; solver objective "
               f"{result.objective:.6f} vs 721-point sweep {sweep_best:.6f}")


def test_criterion_5_levenshtein_against_complete_search():
    assert levenshtein("kitten", "sitting") == 3
    rng = random.Random(816)
    for _ in range(10_000):
        a = "".join(rng.choice("abc") for _ in range(rng.randrange(9)))
        b = "".join(rng.choice("abc") for _ in range(rng.randrange(9)))
        assert levenshtein(a, b) == lev_complete_search(a, b)
    for _ in range(1000):
        a, b, c = ("".join(rng.choice("abc") for _ in range(rng.randrange(8)))
                   for _ in range(3))
        assert levenshtein(a, b) == levenshtein(b, a)
        assert (levenshtein(a, b) == 0) == (a == b)
        assert levenshtein(a, b) <= levenshtein(a, c) + levenshtein(c, b)
    _report(5, "10,000 sampled pairs match complete-search oracle; metric axioms hold")


def test_criterion_6_retrieval_cup_example():
    db = fixtures.build_part_database()
    outcomes = set()
    for _ in range(100):
        match = retrieve(db, "cup opening")
        outcomes.add((match.entry_index, match.matched_phrase, match.distance))
    assert outcomes == {(0, "cup opening", 0)}
    match = retrieve(db, "cup opening")
    assert set(match.entry.key_phrases) == {"cup opening", "cup rim", "cup edge"}
    _report(6, "cup-opening query hits its entry at distance 0, stable over 100 runs")


def test_criterion_7_metrics(tmp_path):
    profiles = {p.name: p for p in load_profiles(fixtures.shipped_profiles_dir())}
    boundary = action_generalizability(profiles["seam"], 33) + 20 / 33
    assert boundary == 1.0
    full = profiles["seam_core"]
    assert full.core_size() == 11
    assert abs(action_generalizability(full, 33) - 22 / 33) <= 1e-12

    exact = {"seam": 23, "seam_core": 23, "rekep": 24, "omnimanip": 19, "instruct2act": 27}
    for name, count in exact.items():
        hand_count = sum(1 for o in profiles[name].task_outcomes if o.success)
        assert hand_count == count
        assert vlm_comprehensibility(profiles[name]) == count / 33

    synthetic = profiles["seam_core"]
    assert action_generalizability(
        type(synthetic)(synthetic.name, _n_word_vocabulary(33), synthetic.task_outcomes),
        33,
    ) == 0.0

    outputs = []
    for run in ("one", "two"):
        out = tmp_path / run
        out.mkdir()
        result = subprocess.run(
            [sys.executable, "-m", "maniplang", "metrics",
             "--profiles", str(fixtures.shipped_profiles_dir()),
             "--tasks", str(fixtures.shipped_tasks_path()),
             "--csv", str(out / "metrics.csv"), "--svg", str(out / "metrics.svg")],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        outputs.append(((out / "metrics.csv").read_bytes(), (out / "metrics.svg").read_bytes()))
    assert outputs[0] == outputs[1], "CSV/SVG regeneration is not byte-identical"
    _report(7, "AG boundary and 22/33 exact; VC matches hand counts; outputs byte-identical")


def _n_word_vocabulary(n):
    from maniplang.language.vocabulary import Vocabulary, Word

    return Vocabulary([Word(f"w{i}", (), "void") for i in range(n)])


def test_criterion_8_pipeline_determinism(tmp_path):
    scene_path = fixtures.shipped_scene_path("cube_target")
    traces = []
    for run in range(3):
        out = tmp_path / f"trace{run}.json"
        result = subprocess.run(
            [sys.executable, "-m", "maniplang", "run",
             "--scene", str(scene_path),
             "--instruction", "move the cube above the target",
             "--client", "mock", "--seed", "0", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        traces.append(out.read_bytes())
    assert traces[0] == traces[1] == traces[2], "TaskTrace JSON is not byte-identical"

    garbage_out = tmp_path / "garbage.json"
    result = subprocess.run(
        [sys.executable, "-m", "maniplang", "run",
         "--scene", str(scene_path),
         "--instruction", fixtures.GARBAGE_INSTRUCTION,
         "--client", "mock", "--out", str(garbage_out)],
        capture_output=True, text=True,
    )
    assert result.returncode == 2
    doc = json.loads(garbage_out.read_text())
    assert len(doc["attempts"]) == 3
    assert all(a["verdict"] == "rejected" for a in doc["attempts"])
    _report(8, "three identical trace bytes; garbage path exits 2 with 3 rejections")


def test_criterion_9_geometry():
    rng = np.random.default_rng(99)
    cloud = rng.normal(size=(2000, 3)) * np.array([1.0, 0.01, 0.01])
    from maniplang.geometry import PointCloud

    axis = principal_axis(PointCloud(cloud)).as_array()
    deviation = math.degrees(math.acos(min(abs(float(axis @ [1, 0, 0])), 1.0)))
    assert deviation < 2.0, f"PCA axis off by {deviation:.3f} degrees"

    checked = 0
    while checked < 1000:
        rot = random_rotation(rng)
        e = euler_from_rotation(rot)
        if abs(abs(e.ry) - math.pi / 2) < 1e-3:
            continue
        assert np.linalg.norm(rotation_from_euler(e) - rot) < 1e-6
        checked += 1
    _report(9, f"PCA axis within {deviation:.3f} degrees; 1000 euler round-trips < 1e-6")
