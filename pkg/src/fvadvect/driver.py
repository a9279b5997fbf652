"""Time integration loop shared by the CLI, tests, and demo scripts."""

from dataclasses import dataclass, field

import numpy as np

from .fct import fct_advance
from .grid import conserved_sum
from .schemes import default_product_order, scheme_coefficients
from .velocity import cell_average_velocity, face_average_velocity, max_speed


class NumericsError(RuntimeError):
    """Raised when the solution stops being finite."""

    def __init__(self, step, message="solution became non-finite"):
        super().__init__(f"{message} at step {step}")
        self.step = step


@dataclass
class RunResult:
    field: object
    steps: int
    dt: float
    conserved_initial: float
    conserved_final: float
    eta_stats: list = field(default_factory=list)

    @property
    def conservation_drift(self):
        denom = abs(self.conserved_initial)
        delta = abs(self.conserved_final - self.conserved_initial)
        return delta / denom if denom > 0.0 else delta

    @property
    def solution_min(self):
        return float(np.min(self.field.interior))

    @property
    def solution_max(self):
        return float(np.max(self.field.interior))


def integrate(
    q0,
    velocity,
    grid,
    scheme,
    sigma,
    t_final,
    limiter="on",
    order=None,
    preconstraint=True,
    force_eta=None,
    collect_eta_stats=False,
    on_step=None,
):
    """Advance ``q0`` to ``t_final`` at the given CFL number.

    The step size is sigma * h / max_speed, with the last step shrunk to
    land exactly on ``t_final`` (the effective CFL only decreases).  When
    ``collect_eta_stats`` is set, each step appends
    (min eta, mean eta, fraction of faces with eta < 1).  ``on_step`` is
    called as ``on_step(step_index, time, field)`` after every step.
    """
    if isinstance(scheme, str):
        scheme = scheme_coefficients(scheme)
    if order is None:
        order = default_product_order(scheme)
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if t_final < 0.0:
        raise ValueError("t_final must be non-negative")

    u_faces = face_average_velocity(velocity, grid)
    u_cell = cell_average_velocity(velocity, grid)
    speed = max_speed(velocity, grid)
    dt = sigma * grid.h / speed

    q = q0.copy()
    result = RunResult(
        field=q,
        steps=0,
        dt=dt,
        conserved_initial=conserved_sum(q0),
        conserved_final=conserved_sum(q0),
    )
    if t_final == 0.0:
        return result

    n_steps = max(1, int(np.ceil(t_final / dt - 1e-9)))
    t = 0.0
    for step in range(1, n_steps + 1):
        step_dt = dt if step < n_steps else t_final - t
        step_sigma = speed * step_dt / grid.h
        q, etas = fct_advance(
            q, u_faces, u_cell, step_dt, step_sigma, scheme, order,
            limiter=limiter, preconstraint=preconstraint, force_eta=force_eta,
        )
        if not np.all(np.isfinite(q.interior)):
            raise NumericsError(step)
        if collect_eta_stats and etas is not None:
            flat = np.concatenate([e.ravel() for e in etas])
            result.eta_stats.append(
                (float(flat.min()), float(flat.mean()), float(np.mean(flat < 1.0)))
            )
        t += step_dt
        if on_step is not None:
            on_step(step, t, q)
    result.field = q
    result.steps = n_steps
    result.conserved_final = conserved_sum(q)
    return result
