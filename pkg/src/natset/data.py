"""Trajectory recordings: CSV ingestion, task filtering, per-time slices.

A recording is a set of per-actor tracks sampled at a fixed frame rate.
Filtering keeps the tracks that perform one specific task: start inside a
start region, end inside an end region, and actually move.  Kept tracks
are re-indexed so t = 0 is the first frame inside the start region, which
puts every track in the same task phase before hulls are built.
"""

import csv
import json
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import ConvexPolygon, contains, quickhull, to_halfspaces

log = logging.getLogger(__name__)

# containment tolerance for region membership, meters
REGION_TOL = 1e-9

REQUIRED_COLUMNS = (
    "trackId",
    "frame",
    "xCenter",
    "yCenter",
    "xVelocity",
    "yVelocity",
    "xAcceleration",
    "yAcceleration",
    "heading",
)


class ParseError(ValueError):
    """Malformed recording file: bad header, non-numeric field, bad frame."""


class GapError(ValueError):
    """An actor's frame numbers are not contiguous."""


class EmptyTask(ValueError):
    """No trajectory satisfies the task predicate."""


@dataclass(frozen=True)
class RawActorState:
    """One recorded sample: position (m), velocity (m/s), acceleration
    (m/s^2), heading (rad)."""

    position: tuple
    velocity: tuple
    acceleration: tuple
    heading: float

    def __post_init__(self):
        pos = (float(self.position[0]), float(self.position[1]))
        vel = (float(self.velocity[0]), float(self.velocity[1]))
        acc = (float(self.acceleration[0]), float(self.acceleration[1]))
        head = float(self.heading)
        values = (*pos, *vel, *acc, head)
        if not all(np.isfinite(v) for v in values):
            raise ValueError("actor state contains non-finite entries")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "velocity", vel)
        object.__setattr__(self, "acceleration", acc)
        object.__setattr__(self, "heading", head)

    @property
    def speed(self):
        return float(np.hypot(self.velocity[0], self.velocity[1]))


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered states of one actor, sampled at frame_rate Hz."""

    actor_id: str
    frame_rate: float
    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 2:
            raise ValueError(f"trajectory {self.actor_id!r} has fewer than 2 states")
        if not self.frame_rate > 0:
            raise ValueError("frame_rate must be positive")

    def __len__(self):
        return len(self.states)

    @property
    def horizon(self):
        """Index of the last state (number of steps)."""
        return len(self.states) - 1

    @property
    def dt(self):
        return 1.0 / self.frame_rate

    @cached_property
    def positions(self):
        out = np.array([s.position for s in self.states])
        out.setflags(write=False)
        return out

    @cached_property
    def speeds(self):
        out = np.array([s.speed for s in self.states])
        out.setflags(write=False)
        return out

    @cached_property
    def dyn_states(self):
        """(H+1, 4) array of (p_x, v_x, p_y, v_y) rows."""
        out = np.array(
            [
                (s.position[0], s.velocity[0], s.position[1], s.velocity[1])
                for s in self.states
            ]
        )
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class Region:
    polygon: ConvexPolygon

    @cached_property
    def halfspaces(self):
        return to_halfspaces(self.polygon)

    def covers(self, point, tol=REGION_TOL):
        return contains(self.halfspaces, point, tol)


@dataclass(frozen=True)
class Task:
    start: Region
    end: Region
    min_speed: float


@dataclass(frozen=True)
class TaskDataset:
    trajectories: tuple
    task: Task

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(self.trajectories))
        if not self.trajectories:
            raise EmptyTask("dataset has no trajectories")

    def __len__(self):
        return len(self.trajectories)

    @property
    def max_horizon(self):
        return max(tr.horizon for tr in self.trajectories)


@dataclass(frozen=True)
class HullTransform:
    """Selector matrix picking hull coordinates out of the dynamics state."""

    selector: np.ndarray

    def __post_init__(self):
        sel = np.array(self.selector, dtype=float)
        if sel.ndim != 2 or sel.shape[0] < 1:
            raise ValueError("selector must be a 2-d matrix")
        for row in sel:
            ones = np.flatnonzero(row == 1.0)
            if len(ones) != 1 or np.any(row[np.arange(len(row)) != ones[0]] != 0.0):
                raise ValueError("each selector row must be a unit basis vector")
        sel.setflags(write=False)
        object.__setattr__(self, "selector", sel)


# hull states are planar positions unless a caller says otherwise
POSITION_TRANSFORM = HullTransform([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])


@dataclass(frozen=True)
class TimeSlice:
    t: int
    hull_states: np.ndarray

    def __post_init__(self):
        pts = np.array(self.hull_states, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "hull_states", pts)
        if self.t < 0:
            raise ValueError("time index must be non-negative")

    def __len__(self):
        return self.hull_states.shape[0]


def _parse_float(row_num, name, value):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ParseError(f"row {row_num}: column {name!r} is not numeric: {value!r}") from None
    return out


def load_trajectories(path, frame_rate=25.0):
    """Read a tracks CSV into one Trajectory per actor.

    The file must carry at least the REQUIRED_COLUMNS header names; extra
    columns (as in full inD tracks exports) are ignored.  Frames for each
    actor must form a contiguous range once sorted.
    """
    per_actor = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file, expected a CSV header")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ParseError(f"{path}: header is missing columns {missing}")
        for row_num, row in enumerate(reader, start=2):
            actor = row["trackId"]
            if actor is None or actor == "":
                raise ParseError(f"row {row_num}: empty trackId")
            try:
                frame = int(row["frame"])
            except (TypeError, ValueError):
                raise ParseError(
                    f"row {row_num}: frame is not an integer: {row['frame']!r}"
                ) from None
            if frame < 0:
                raise ParseError(f"row {row_num}: negative frame {frame}")
            state = RawActorState(
                position=(
                    _parse_float(row_num, "xCenter", row["xCenter"]),
                    _parse_float(row_num, "yCenter", row["yCenter"]),
                ),
                velocity=(
                    _parse_float(row_num, "xVelocity", row["xVelocity"]),
                    _parse_float(row_num, "yVelocity", row["yVelocity"]),
                ),
                acceleration=(
                    _parse_float(row_num, "xAcceleration", row["xAcceleration"]),
                    _parse_float(row_num, "yAcceleration", row["yAcceleration"]),
                ),
                heading=_parse_float(row_num, "heading", row["heading"]),
            )
            per_actor.setdefault(actor, []).append((frame, state))

    def sort_key(actor):
        try:
            return (0, int(actor), actor)
        except ValueError:
            return (1, 0, actor)

    out = []
    for actor in sorted(per_actor, key=sort_key):
        rows = sorted(per_actor[actor], key=lambda fs: fs[0])
        frames = [f for f, _ in rows]
        for prev, nxt in zip(frames, frames[1:]):
            if nxt == prev:
                raise ParseError(f"actor {actor}: duplicate frame {nxt}")
            if nxt != prev + 1:
                raise GapError(f"actor {actor}: missing frame {prev + 1}")
        out.append(Trajectory(actor, frame_rate, tuple(s for _, s in rows)))
    return out


def filter_task(trajectories, start, end, min_speed=0.5):
    """Keep the trajectories performing the (start, end) task.

    A trajectory survives when some frame lies inside the start region,
    its final frame lies inside the end region, and its maximum speed from
    the start-region entry onward reaches min_speed.  Survivors are
    trimmed so t = 0 is the entry frame; applying the filter again is a
    no-op.
    """
    start = start if isinstance(start, Region) else Region(start)
    end = end if isinstance(end, Region) else Region(end)
    kept = []
    for tr in trajectories:
        inside = [i for i, s in enumerate(tr.states) if start.covers(s.position)]
        if not inside:
            continue
        first = inside[0]
        segment = tr.states[first:]
        if len(segment) < 2:
            log.warning(
                "actor %s: only %d state(s) after start-region entry; dropped",
                tr.actor_id,
                len(segment),
            )
            continue
        if not end.covers(segment[-1].position):
            continue
        if max(s.speed for s in segment) < min_speed:
            continue
        kept.append(
            tr
            if first == 0
            else Trajectory(tr.actor_id, tr.frame_rate, segment)
        )
    if not kept:
        raise EmptyTask("no trajectory satisfies the task predicate")
    return TaskDataset(tuple(kept), Task(start, end, float(min_speed)))


def slice_at(dataset, t, transform=POSITION_TRANSFORM):
    """Hull states of every trajectory still alive at time t."""
    if t < 0:
        raise ValueError("time index must be non-negative")
    points = [
        transform.selector @ tr.dyn_states[t]
        for tr in dataset.trajectories
        if tr.horizon >= t
    ]
    return TimeSlice(t, np.array(points) if points else np.zeros((0, 2)))


def load_task(path):
    """Read a task config JSON: regions, speed floor, frame rate."""
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    try:
        start_pts = np.array(cfg["start_polygon"], dtype=float)
        end_pts = np.array(cfg["end_polygon"], dtype=float)
        min_speed = float(cfg.get("min_speed", 0.5))
        frame_rate = float(cfg.get("frame_rate", 25.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad task config: {exc}") from None
    start = Region(quickhull(start_pts))
    end = Region(quickhull(end_pts))
    return start, end, min_speed, frame_rate
