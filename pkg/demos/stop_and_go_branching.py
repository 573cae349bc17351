"""
Stop-and-go traffic stretches the tube along the lane
=====================================================

Half the vehicles cruise through; half brake, wait, and pull away.  The
position hulls must cover both behaviors at once, so they stretch far
along the lane at late times. A straight pass-through candidate stays
inside the tube precisely because the hulls over-approximate the two
branching behaviors.
"""

from pathlib import Path

import numpy as np

from natset import (
    Region,
    build_natset,
    default_spec,
    extent_along,
    filter_task,
    generate_scenario,
    quickhull,
    trajectory_membership,
)

spec = default_spec("straight_road_with_stop", count=40, seed=7)
trajectories, task_cfg = generate_scenario(spec)
start = Region(quickhull(np.asarray(task_cfg["start_polygon"])))
end = Region(quickhull(np.asarray(task_cfg["end_polygon"])))
dataset = filter_task(trajectories, start, end, task_cfg["min_speed"])
natset = build_natset(dataset)

lane = (1.0, 0.0)
print("along-lane hull extent over time:")
for t in range(0, natset.horizon + 1, max(1, natset.horizon // 10)):
    length = extent_along(natset.hulls[t].polygon, lane)
    print(f"  t={t:3d}  extent={length:7.2f} m  {'#' * int(length / 2)}")

stretch = extent_along(natset.hulls[-1].polygon, lane) / extent_along(
    natset.hulls[1].polygon, lane
)
print(f"stretch factor, late vs early: {stretch:.0f}x")

# a cruising dataset member stays inside the tube the whole way
member = dataset.trajectories[0]
flags = trajectory_membership(natset, member)
print(f"pass-through member inside tube at all steps: {all(flags)}")

# so does a vehicle that never stops, even though half the data stopped:
# the hulls cover the union of both behaviors
mid_speed = 0.5 * sum(spec.speed_range)
steps = np.arange(natset.horizon + 1)
states = np.zeros((natset.horizon + 1, 4))
states[:, 0] = 0.5 + mid_speed * spec.dt * steps
states[:, 1] = mid_speed
flags = trajectory_membership(natset, states)
print(f"synthetic non-stopping driver inside tube: {all(flags)}")
