"""Scene model: named part clouds, gripper state, and history snapshots.

The JSON schema is fixed field-for-field:

    {
      "parts": {name: {"points": [[x, y, z], ...],
                       "grasped": bool,
                       "object": str          # optional object label
                      }},
      "gripper": {"position": [x, y, z], "open_fraction": f},
      "history": [{"gripper": [x, y, z], "parts": {name: [x, y, z]}}, ...]
    }

History entries record where the gripper and each part centroid were before
earlier stages; `centroid_last` and the offset-move cost read them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ManiplangError
from .geometry import Point3, PointCloud, centroid

GRIPPER_NAME = "gripper"


class SceneError(ManiplangError):
    pass


@dataclass(frozen=True)
class SceneSnapshot:
    gripper_position: Point3
    part_centroids: dict[str, Point3]


@dataclass(frozen=True)
class Scene:
    parts: dict[str, PointCloud]
    grasped: frozenset[str]
    gripper_position: Point3
    gripper_open_fraction: float
    history: tuple[SceneSnapshot, ...] = ()
    objects: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if GRIPPER_NAME in self.parts:
            raise SceneError(f"{GRIPPER_NAME!r} is reserved and cannot name a part")
        unknown = self.grasped - set(self.parts)
        if unknown:
            raise SceneError(f"grasped names not in parts: {sorted(unknown)}")
        if not 0.0 <= self.gripper_open_fraction <= 1.0:
            raise SceneError(f"open fraction {self.gripper_open_fraction} outside [0, 1]")
        stray = set(self.objects) - set(self.parts)
        if stray:
            raise SceneError(f"object labels for unknown parts: {sorted(stray)}")

    def snapshot(self) -> SceneSnapshot:
        return SceneSnapshot(
            gripper_position=self.gripper_position,
            part_centroids={name: centroid(cloud) for name, cloud in self.parts.items()},
        )

    def object_of(self, part: str) -> str | None:
        return self.objects.get(part)


def scene_to_json(scene: Scene, precision: int | None = 9) -> dict:
    def _triple(p: Point3) -> list[float]:
        vals = [p.x, p.y, p.z]
        return [round(v, precision) for v in vals] if precision is not None else vals

    parts = {}
    for name in scene.parts:
        coords = scene.parts[name].coords
        rows = coords.round(precision).tolist() if precision is not None else coords.tolist()
        entry = {"points": rows, "grasped": name in scene.grasped}
        if name in scene.objects:
            entry["object"] = scene.objects[name]
        parts[name] = entry
    return {
        "parts": parts,
        "gripper": {
            "position": _triple(scene.gripper_position),
            "open_fraction": scene.gripper_open_fraction,
        },
        "history": [
            {
                "gripper": _triple(snap.gripper_position),
                "parts": {name: _triple(c) for name, c in snap.part_centroids.items()},
            }
            for snap in scene.history
        ],
    }


def scene_from_json(doc: dict) -> Scene:
    try:
        parts = {}
        grasped = set()
        objects = {}
        for name, entry in doc["parts"].items():
            parts[name] = PointCloud(entry["points"])
            if entry.get("grasped", False):
                grasped.add(name)
            if "object" in entry:
                objects[name] = entry["object"]
        gripper = doc["gripper"]
        history = tuple(
            SceneSnapshot(
                gripper_position=Point3(*snap["gripper"]),
                part_centroids={n: Point3(*c) for n, c in snap.get("parts", {}).items()},
            )
            for snap in doc.get("history", [])
        )
        return Scene(
            parts=parts,
            grasped=frozenset(grasped),
            gripper_position=Point3(*gripper["position"]),
            gripper_open_fraction=float(gripper["open_fraction"]),
            history=history,
            objects=objects,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"malformed scene document: {exc}") from exc


def save_scene(path, scene: Scene) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_json(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return scene_from_json(json.load(fh))
