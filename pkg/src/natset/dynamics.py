"""Planar double-integrator dynamics and its condensed control-to-state map.

The state vector ordering is fixed package-wide to ``(p_x, v_x, p_y, v_y)``
and controls are planar forces ``(F_x, F_y)`` on a point of mass M:

    p_{x,t+1} = p_x,t + dt * v_x,t        v_{x,t+1} = v_x,t + dt * F_x,t / M
    p_{y,t+1} = p_y,t + dt * v_y,t        v_{y,t+1} = v_y,t + dt * F_y,t / M

``condense`` stacks the recursion into one affine map so a horizon-T rollout
becomes ``xi = Phi @ x0 + Gamma @ U`` with U the flattened control sequence;
the projection module builds its quadratic program directly on that map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NX = 4  # state dimension
NU = 2  # control dimension

# Selector extracting planar position (the hull state) from a state vector.
POSITION_SELECTOR = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
POSITION_SELECTOR.flags.writeable = False


class NonPositiveParameter(ValueError):
    """dt and mass must both be strictly positive."""


@dataclass(frozen=True)
class LinearDynamics:
    A: np.ndarray
    B: np.ndarray
    dt: float
    mass: float

    def step(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return self.A @ x + self.B @ u


@dataclass(frozen=True)
class CondensedMap:
    """Stacked-state map: block t of Phi is A^t, block (t, k) of Gamma is
    A^(t-1-k) B for k < t and zero otherwise."""

    Phi: np.ndarray
    Gamma: np.ndarray
    horizon: int


def double_integrator(dt: float, mass: float = 1.0) -> LinearDynamics:
    """Discrete planar double integrator with force controls."""
    if dt <= 0.0 or mass <= 0.0:
        raise NonPositiveParameter(f"dt and mass must be > 0, got dt={dt}, mass={mass}")
    A = np.array(
        [
            [1.0, dt, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, dt],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    B = np.array(
        [
            [0.0, 0.0],
            [dt / mass, 0.0],
            [0.0, 0.0],
            [0.0, dt / mass],
        ]
    )
    A.flags.writeable = False
    B.flags.writeable = False
    return LinearDynamics(A=A, B=B, dt=float(dt), mass=float(mass))


def rollout(dyn: LinearDynamics, x_init, controls) -> np.ndarray:
    """Simulate the recursion; returns states of shape (len(controls)+1, 4)."""
    x = np.asarray(x_init, dtype=float).ravel()
    U = np.asarray(controls, dtype=float).reshape(-1, NU)
    states = np.empty((len(U) + 1, NX))
    states[0] = x
    for t, u in enumerate(U):
        x = dyn.step(x, u)
        states[t + 1] = x
    return states


def condense(dyn: LinearDynamics, horizon: int) -> CondensedMap:
    """Affine control-to-state map over ``horizon`` steps.

    For any x0 and control stack U (shape horizon*2), the stacked trajectory
    of horizon+1 states equals ``Phi @ x0 + Gamma @ U``.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = (horizon + 1) * NX
    Phi = np.empty((n, NX))
    powers = [np.eye(NX)]
    for _ in range(horizon):
        powers.append(dyn.A @ powers[-1])
    for t in range(horizon + 1):
        Phi[t * NX : (t + 1) * NX] = powers[t]
    Gamma = np.zeros((n, horizon * NU))
    for t in range(1, horizon + 1):
        for k in range(t):
            Gamma[t * NX : (t + 1) * NX, k * NU : (k + 1) * NU] = powers[t - 1 - k] @ dyn.B
    Phi.flags.writeable = False
    Gamma.flags.writeable = False
    return CondensedMap(Phi=Phi, Gamma=Gamma, horizon=horizon)
