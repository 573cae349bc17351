"""Projecting a candidate trajectory into a hull tube.

The candidate is replaced by the closest dynamically feasible trajectory
(squared Euclidean distance over stacked states) whose positions stay
inside the tube cross-sections wherever tube and candidate overlap in
time.  With the dynamics eliminated by condensation this is a convex QP
in the control sequence; the initial state is pinned, never optimized.
"""

import json
from dataclasses import dataclass

import numpy as np

from .data import HullTransform, ParseError, Trajectory
from .dynamics import condense, rollout
from .natset import _round12, _round12_nested
from .geometry import signed_violation
from .qpsolver import (
    QPSolution,
    QuadraticProgram,
    SolverStatus,
    solve,
)

# membership tolerance for the initial state and the output certificate
FEAS_TOL = 1e-6
# constraint rows unaffected by any control: below this norm they are
# constants, checked once and dropped
ZERO_ROW_TOL = 1e-14
ACTIVE_TOL = 1e-6


class InitialStateOutsideTube(ValueError):
    """transform @ x_init misses the t = 0 hull; carries the violation."""

    def __init__(self, violation):
        super().__init__(
            f"initial position lies {violation:.6g} m outside the t=0 hull "
            f"(tolerance {FEAS_TOL:g}); pass relax_initial to drop this check"
        )
        self.violation = float(violation)


class SolverFailure(RuntimeError):
    """The projection QP did not come back Optimal, or cannot be satisfied."""


@dataclass(frozen=True)
class CandidateTrajectory:
    """States to be naturalized, sampled every dt seconds."""

    states: np.ndarray
    dt: float

    def __post_init__(self):
        arr = np.array(self.states, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ValueError(f"states must be (T+1, 4), got {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("candidate needs at least one state")
        if not np.all(np.isfinite(arr)):
            raise ValueError("candidate contains non-finite states")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "states", arr)

    @classmethod
    def from_trajectory(cls, traj: Trajectory):
        return cls(traj.dyn_states, traj.dt)

    @property
    def horizon(self):
        return self.states.shape[0] - 1


@dataclass(frozen=True)
class ProjectionResult:
    states: np.ndarray
    controls: np.ndarray
    objective: float
    status: SolverStatus
    active_constraints: tuple
    violation_report: tuple

    def __post_init__(self):
        st = np.array(self.states, dtype=float)
        ct = np.array(self.controls, dtype=float)
        st.setflags(write=False)
        ct.setflags(write=False)
        object.__setattr__(self, "states", st)
        object.__setattr__(self, "controls", ct)
        object.__setattr__(self, "active_constraints", tuple(map(tuple, self.active_constraints)))
        object.__setattr__(self, "violation_report", tuple(self.violation_report))


def horizon_align(candidate_len, natset_len):
    """Indices carrying hull constraints: the time overlap of both."""
    if candidate_len < 1 or natset_len < 1:
        raise ValueError("lengths must be at least 1")
    return range(min(candidate_len, natset_len))


def naturalism_report(candidate, natset):
    """Signed hull violation of the candidate at each of its time steps.

    Entries beyond the tube horizon are None: there is no hull to violate.
    """
    sel = natset.transform.selector
    out = []
    for t in range(candidate.horizon + 1):
        if t <= natset.horizon:
            y = sel @ candidate.states[t]
            out.append(signed_violation(natset.hulls[t].halfspaces, y))
        else:
            out.append(None)
    return out


def _stack_weight(weight, length):
    if weight is None:
        return None
    w = np.asarray(weight, dtype=float)
    if w.shape != (4,) or np.any(w <= 0):
        raise ValueError("weight must be 4 positive per-component entries")
    return np.tile(w, length)


def project(candidate, natset, dyn, weight=None, relax_initial=False, settings=None):
    """Solve the tube-constrained least-squares projection.

    weight optionally scales the four state components in the objective
    (positions and velocities mix meters with meters per second).
    relax_initial skips the t = 0 membership pre-check.
    """
    if candidate.horizon < 1:
        raise ValueError("candidate must have at least 2 states")
    if abs(candidate.dt - natset.dt) > 1e-12:
        raise ValueError(
            f"candidate dt {candidate.dt!r} does not match tube dt {natset.dt!r}"
        )
    if abs(dyn.dt - natset.dt) > 1e-12:
        raise ValueError(f"dynamics dt {dyn.dt!r} does not match tube dt {natset.dt!r}")

    sel = natset.transform.selector
    x_init = candidate.states[0]
    H_a = candidate.horizon
    constrained = horizon_align(H_a + 1, natset.horizon + 1)

    if not relax_initial:
        v0 = signed_violation(natset.hulls[0].halfspaces, sel @ x_init)
        if v0 > FEAS_TOL:
            raise InitialStateOutsideTube(v0)

    cm = condense(dyn, H_a)
    free = cm.Phi @ x_init  # trajectory under zero control
    target = candidate.states.ravel()
    w = _stack_weight(weight, H_a + 1)
    if w is None:
        P = 2.0 * cm.Gamma.T @ cm.Gamma
        q = 2.0 * cm.Gamma.T @ (free - target)
    else:
        wg = w[:, None] * cm.Gamma
        P = 2.0 * cm.Gamma.T @ wg
        q = 2.0 * wg.T @ (free - target)
    P = 0.5 * (P + P.T)  # scrub float asymmetry from the triple product
    # the decision-independent part of the squared distance
    resid0 = free - target
    const = float(resid0 @ (resid0 if w is None else w * resid0))

    rows, rhs = [], []
    for t in constrained:
        if t == 0:
            continue  # x_init is pinned; its membership was the pre-check
        hs = natset.hulls[t].halfspaces
        sel_t = sel @ cm.Phi[4 * t : 4 * t + 4]
        gamma_t = sel @ cm.Gamma[4 * t : 4 * t + 4]
        coeff = hs.G @ gamma_t
        limit = hs.h - hs.G @ (sel @ free[4 * t : 4 * t + 4])
        for i in range(coeff.shape[0]):
            if np.max(np.abs(coeff[i])) < ZERO_ROW_TOL:
                # no control influences this row; it is a fact, not a constraint
                if limit[i] < -1e-9:
                    raise SolverFailure(
                        f"hull row {i} at t={t} is violated by {-limit[i]:.6g} m "
                        "and no control input can change it"
                    )
                continue
            rows.append(coeff[i])
            rhs.append(limit[i])

    n = 2 * H_a
    A = np.array(rows) if rows else np.zeros((0, n))
    b = np.array(rhs)
    qp = QuadraticProgram(P, q, A, b)

    # warm start at the unconstrained optimum: exact when nothing is active
    z_uc = np.linalg.solve(P, -q)
    warm = QPSolution(z_uc, 0.0, SolverStatus.OPTIMAL, 0, 0.0, 0.0, np.zeros(len(b)))
    sol = solve(qp, settings=settings, warm_start=warm)
    if sol.status is not SolverStatus.OPTIMAL:
        raise SolverFailure(f"solver returned {sol.status.value}")

    controls = sol.z.reshape(H_a, 2)
    states = rollout(dyn, x_init, controls)
    diff = states.ravel() - target
    objective = float(diff @ (diff if w is None else w * diff))

    active = []
    for t in constrained:
        hs = natset.hulls[t].halfspaces
        margins = hs.G @ (sel @ states[t]) - hs.h
        active.append(tuple(np.flatnonzero(np.abs(margins) <= ACTIVE_TOL)))

    return ProjectionResult(
        states=states,
        controls=controls,
        objective=objective,
        status=sol.status,
        active_constraints=tuple(active),
        violation_report=tuple(naturalism_report(candidate, natset)),
    )


def write_projection(result, candidate, path):
    """Projection output JSON; candidate states ride along for plotting."""
    doc = {
        "status": result.status.value,
        "objective": _round12(result.objective),
        "states": _round12_nested(result.states),
        "controls": _round12_nested(result.controls),
        "violations_before": [
            None if v is None else _round12(v) for v in result.violation_report
        ],
        "active_constraints": [list(map(int, rows)) for rows in result.active_constraints],
        "candidate_states": _round12_nested(candidate.states),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_projection(path):
    """Load a projection JSON into a plain dict with array values."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        doc["states"] = np.array(doc["states"], dtype=float).reshape(-1, 4)
        doc["controls"] = np.array(doc["controls"], dtype=float).reshape(-1, 2)
        if "candidate_states" in doc:
            doc["candidate_states"] = np.array(
                doc["candidate_states"], dtype=float
            ).reshape(-1, 4)
        doc["objective"] = float(doc["objective"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad projection file: {exc}") from None
    return doc
