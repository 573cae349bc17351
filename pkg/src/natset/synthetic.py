"""Synthetic driving scenarios for exercising the full pipeline.

Two scene kinds, both sampled on a fixed step grid so every trajectory
spans the whole horizon:

* curved_road: constant-speed circular arcs through a radius band, with
  per-trajectory radius and speed draws plus Gaussian position noise.
  Speed spread fans the arcs out along the lane over time.
* straight_road_with_stop: one family cruises through, the other brakes
  to a stop, dwells, and pulls away again, which stretches the hulls
  along the lane far more than the curved scene does.

Velocities are forward differences of the emitted positions divided by
dt, so every generated trajectory is feasible for the point-mass model
up to floating-point error.  All draws come from one seed.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import REQUIRED_COLUMNS, RawActorState, Trajectory

KINDS = ("curved_road", "straight_road_with_stop")


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    count: int = 40
    horizon: int = 60
    dt: float = 0.04
    arc_center: tuple = (0.0, 0.0)
    radii: tuple = (19.0, 21.0)
    lane_width: float = 4.0
    speed_range: tuple = (5.0, 9.0)
    noise_std: float = 0.02
    seed: int = 7

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; pick one of {KINDS}")
        if self.count < 3:
            raise ValueError("count must be at least 3 (hulls need 3 points)")
        if self.horizon < 2:
            raise ValueError("horizon must be at least 2 steps")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.radii[0] < self.radii[1]:
            raise ValueError("radius band must be a nonempty interval")
        if not 0 < self.speed_range[0] <= self.speed_range[1]:
            raise ValueError("speeds must be positive and ordered")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        if self.lane_width <= 0:
            raise ValueError("lane_width must be positive")


def default_spec(kind, count=40, seed=7, **overrides):
    """Per-kind parameter defaults; the stop scene needs a longer clock."""
    if kind == "straight_road_with_stop":
        base = dict(kind=kind, count=count, seed=seed, horizon=100, dt=0.1)
    else:
        base = dict(kind=kind, count=count, seed=seed)
    base.update(overrides)
    return ScenarioSpec(**base)


def _derive_trajectory(actor_id, positions, dt):
    """Positions -> full states with forward-difference velocities."""
    vel = np.diff(positions, axis=0) / dt
    vel = np.vstack([vel, vel[-1]])
    acc = np.diff(vel, axis=0) / dt
    acc = np.vstack([acc, acc[-1]])
    states = [
        RawActorState(
            position=tuple(positions[t]),
            velocity=tuple(vel[t]),
            acceleration=tuple(acc[t]),
            heading=float(np.arctan2(vel[t, 1], vel[t, 0])),
        )
        for t in range(positions.shape[0])
    ]
    return Trajectory(str(actor_id), 1.0 / dt, states)


# the reference start bearing of the curved lane (dimensionless choice)
_THETA0 = np.pi


def _arc_point(center, r, theta):
    return np.array([center[0] + r * np.cos(theta), center[1] + r * np.sin(theta)])


def _sector_polygon(center, r_lo, r_hi, th_lo, th_hi, samples=24):
    thetas = np.linspace(th_lo, th_hi, samples)
    pts = [_arc_point(center, r_lo, th) for th in thetas]
    pts += [_arc_point(center, r_hi, th) for th in thetas]
    return [[float(x), float(y)] for x, y in pts]


def _curved_road(spec, rng):
    h = spec.horizon
    r_lo, r_hi = spec.radii
    radii = rng.uniform(r_lo, r_hi, size=spec.count)
    speeds = rng.uniform(*spec.speed_range, size=spec.count)
    noise = rng.normal(0.0, spec.noise_std, size=(spec.count, h + 1, 2))

    trajs = []
    for i in range(spec.count):
        omega = speeds[i] / radii[i]
        thetas = _THETA0 - omega * spec.dt * np.arange(h + 1)
        arc = np.stack(
            [
                spec.arc_center[0] + radii[i] * np.cos(thetas),
                spec.arc_center[1] + radii[i] * np.sin(thetas),
            ],
            axis=1,
        )
        trajs.append(_derive_trajectory(i, arc + noise[i], spec.dt))

    margin = 0.3
    w_lo, w_hi = (
        spec.speed_range[0] / r_hi,
        spec.speed_range[1] / r_lo,
    )
    start_poly = _sector_polygon(
        spec.arc_center, r_lo - margin, r_hi + margin, _THETA0 - 0.02, _THETA0 + 0.02, 4
    )
    span = spec.dt * h
    end_poly = _sector_polygon(
        spec.arc_center,
        r_lo - margin,
        r_hi + margin,
        _THETA0 - w_hi * span - 0.03,
        _THETA0 - w_lo * span + 0.03,
    )
    task = {
        "start_polygon": start_poly,
        "end_polygon": end_poly,
        "min_speed": 0.5,
        "frame_rate": 1.0 / spec.dt,
    }
    return trajs, task


def _stop_profile(h, cruise):
    """Per-step speeds for brake, dwell, pull away; length h."""
    t_cruise = max(1, int(0.25 * h))
    t_ramp = max(1, int(0.15 * h))
    t_dwell = max(1, int(0.30 * h))
    prof = [cruise] * t_cruise
    prof += list(np.linspace(cruise, 0.0, t_ramp, endpoint=False))
    prof += [0.0] * t_dwell
    prof += list(np.linspace(0.0, cruise, t_ramp, endpoint=False))
    prof += [cruise] * max(0, h - len(prof))
    return np.array(prof[:h])


def _straight_road_with_stop(spec, rng):
    h = spec.horizon
    half = spec.lane_width / 2.0
    x0 = rng.uniform(0.0, 1.0, size=spec.count)
    y0 = rng.uniform(-half / 2.0, half / 2.0, size=spec.count)
    speeds = rng.uniform(*spec.speed_range, size=spec.count)
    noise = rng.normal(0.0, spec.noise_std, size=(spec.count, h + 1, 2))

    passers = (spec.count + 1) // 2
    trajs = []
    ends = []
    for i in range(spec.count):
        if i < passers:
            prof = np.full(h, speeds[i])
        else:
            prof = _stop_profile(h, speeds[i])
        x = x0[i] + spec.dt * np.concatenate([[0.0], np.cumsum(prof)])
        pos = np.stack([x, np.full(h + 1, y0[i])], axis=1) + noise[i]
        ends.append(pos[-1, 0])
        trajs.append(_derive_trajectory(i, pos, spec.dt))

    band_lo, band_hi = -half - 0.5, half + 0.5
    start_poly = [[-0.5, band_lo], [1.5, band_lo], [1.5, band_hi], [-0.5, band_hi]]
    e_lo, e_hi = min(ends) - 0.5, max(ends) + 0.5
    end_poly = [[e_lo, band_lo], [e_hi, band_lo], [e_hi, band_hi], [e_lo, band_hi]]
    task = {
        "start_polygon": start_poly,
        "end_polygon": end_poly,
        "min_speed": 0.5,
        "frame_rate": 1.0 / spec.dt,
    }
    return trajs, task


def generate_scenario(spec):
    """Deterministic (trajectories, task config) for the given spec."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "curved_road":
        return _curved_road(spec, rng)
    return _straight_road_with_stop(spec, rng)


def straight_candidate(spec):
    """Constant-velocity chord across the curved lane.

    Re-draws the same radius and rate samples the scenario uses and aims
    the chord at the median arc, so its start (and its first step, which
    no control input can influence) sit strictly inside the sampled
    spread.  Dynamically feasible by construction, but cuts inside the
    radius band near the apex.
    """
    if spec.kind != "curved_road":
        raise ValueError("the chord candidate only makes sense on curved_road")
    rng = np.random.default_rng(spec.seed)
    radii = rng.uniform(spec.radii[0], spec.radii[1], size=spec.count)
    speeds = rng.uniform(*spec.speed_range, size=spec.count)
    r_mid = float(np.median(radii))
    span = float(np.median(speeds / radii)) * spec.dt * spec.horizon
    a = _arc_point(spec.arc_center, r_mid, _THETA0)
    b = _arc_point(spec.arc_center, r_mid, _THETA0 - span)
    steps = np.arange(spec.horizon + 1)[:, None] / spec.horizon
    positions = a[None, :] * (1.0 - steps) + b[None, :] * steps
    return _derive_trajectory("candidate", positions, spec.dt)


def write_tracks_csv(trajectories, path):
    """Emit the standard tracks schema; floats keep full precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS)
        for tr in trajectories:
            for frame, s in enumerate(tr.states):
                writer.writerow(
                    [
                        tr.actor_id,
                        frame,
                        repr(s.position[0]),
                        repr(s.position[1]),
                        repr(s.velocity[0]),
                        repr(s.velocity[1]),
                        repr(s.acceleration[0]),
                        repr(s.acceleration[1]),
                        repr(s.heading),
                    ]
                )


def write_scenario(spec, out_dir):
    """Write tracks.csv and task.json (plus candidate.csv on curved_road)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trajs, task = generate_scenario(spec)
    paths = {"tracks": out / "tracks.csv", "task": out / "task.json"}
    write_tracks_csv(trajs, paths["tracks"])
    with open(paths["task"], "w", encoding="utf-8") as fh:
        json.dump(task, fh, indent=2)
        fh.write("\n")
    if spec.kind == "curved_road":
        paths["candidate"] = out / "candidate.csv"
        write_tracks_csv([straight_candidate(spec)], paths["candidate"])
    return paths
