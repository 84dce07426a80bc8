"""Power-flow solvers: Newton-Raphson, Gauss-Seidel, and a lossless balance.

The AC problem is the standard injection form.  With Y = G + jB and
theta_ik = theta_i - theta_k, the bus injections are

    P_i = sum_k |V_i||V_k| (G_ik cos theta_ik + B_ik sin theta_ik)
    Q_i = sum_k |V_i||V_k| (G_ik sin theta_ik - B_ik cos theta_ik)

One slack bus holds |V| = 1 pu, theta = 0; every other bus is PQ with a
specified injection (generation positive, consumption negative).  Both
solvers start flat and stop when the worst injection mismatch drops to
the tolerance, so their results are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import AdmittanceMatrix, Network, PerUnitBase

NR_MAX_ITERATIONS = 50
GS_MAX_ITERATIONS = 5000

METHOD_NEWTON_RAPHSON = "newton_raphson"
METHOD_GAUSS_SEIDEL = "gauss_seidel"


class SingularMatrixError(RuntimeError):
    """Linear system (or GS diagonal) is singular to working precision."""


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls; max_iterations of None picks the method default."""

    tolerance: float = 1e-8
    max_iterations: int | None = None
    method: str = METHOD_NEWTON_RAPHSON

    def __post_init__(self) -> None:
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True, eq=False)
class PowerFlowProblem:
    """Per-unit injection problem on an admittance matrix.

    p_injection/q_injection hold one entry per non-slack bus, in
    ascending bus-index order with the slack skipped.
    """

    admittance: AdmittanceMatrix
    slack_index: int
    p_injection: np.ndarray
    q_injection: np.ndarray

    def __post_init__(self) -> None:
        n = self.admittance.n
        if not 0 <= self.slack_index < n:
            raise ValueError(f"slack index {self.slack_index} out of range for {n} buses")
        p = np.array(self.p_injection, dtype=float)
        q = np.array(self.q_injection, dtype=float)
        if p.shape != (n - 1,) or q.shape != (n - 1,):
            raise ValueError(f"injection vectors must have length {n - 1}")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p_injection", p)
        object.__setattr__(self, "q_injection", q)

    @property
    def pq_indices(self) -> list[int]:
        return [i for i in range(self.admittance.n) if i != self.slack_index]


@dataclass(frozen=True, eq=False)
class PowerFlowSolution:
    """Voltage state plus convergence bookkeeping; slack stays (1.0, 0.0)."""

    v_mag: np.ndarray
    v_angle: np.ndarray
    iterations: int
    max_mismatch: float
    slack_injection: tuple[float, float]
    converged: bool

    def __post_init__(self) -> None:
        for name in ("v_mag", "v_angle"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def compute_injections(
    v_mag: np.ndarray, v_angle: np.ndarray, admittance: AdmittanceMatrix
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate (P, Q) at every bus for the given voltage state, in pu."""
    v = np.asarray(v_mag, dtype=float) * np.exp(1j * np.asarray(v_angle, dtype=float))
    s = v * np.conj(admittance.y @ v)
    return s.real, s.imag


def newton_jacobian(
    v_mag: np.ndarray,
    v_angle: np.ndarray,
    admittance: AdmittanceMatrix,
    pq_indices: Sequence[int],
) -> np.ndarray:
    """Analytic power-flow Jacobian restricted to the PQ buses.

    Block layout [[dP/dtheta, dP/d|V|], [dQ/dtheta, dQ/d|V|]], each block
    m x m for m PQ buses, evaluated at the given state.
    """
    g = admittance.conductance
    b = admittance.susceptance
    p, q = compute_injections(v_mag, v_angle, admittance)
    m = len(pq_indices)
    jac = np.zeros((2 * m, 2 * m))
    for a, i in enumerate(pq_indices):
        for c, k in enumerate(pq_indices):
            if i == k:
                jac[a, c] = -q[i] - b[i, i] * v_mag[i] ** 2
                jac[a, m + c] = p[i] / v_mag[i] + g[i, i] * v_mag[i]
                jac[m + a, c] = p[i] - g[i, i] * v_mag[i] ** 2
                jac[m + a, m + c] = q[i] / v_mag[i] - b[i, i] * v_mag[i]
            else:
                t = v_angle[i] - v_angle[k]
                cos_t, sin_t = np.cos(t), np.sin(t)
                vv = v_mag[i] * v_mag[k]
                jac[a, c] = vv * (g[i, k] * sin_t - b[i, k] * cos_t)
                jac[a, m + c] = v_mag[i] * (g[i, k] * cos_t + b[i, k] * sin_t)
                jac[m + a, c] = -vv * (g[i, k] * cos_t + b[i, k] * sin_t)
                jac[m + a, m + c] = v_mag[i] * (g[i, k] * sin_t - b[i, k] * cos_t)
    return jac


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a dense real system by Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when the best available pivot falls below
    1e-12 in magnitude.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if b.shape != (n,):
        raise ValueError(f"right-hand side must have length {n}")
    for k in range(n):
        pivot_row = int(np.argmax(np.abs(a[k:, k]))) + k
        if abs(a[pivot_row, k]) < 1e-12:
            raise SingularMatrixError(f"pivot {k} below 1e-12")
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        b[k + 1 :] -= factors * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def _mismatch(
    problem: PowerFlowProblem,
    v_mag: np.ndarray,
    v_angle: np.ndarray,
    pq: Sequence[int],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p_calc, q_calc = compute_injections(v_mag, v_angle, problem.admittance)
    mismatch = np.concatenate(
        [problem.p_injection - p_calc[pq], problem.q_injection - q_calc[pq]]
    )
    return mismatch, p_calc, q_calc


def _finish(
    v_mag: np.ndarray,
    v_angle: np.ndarray,
    iterations: int,
    max_mismatch: float,
    p_calc: np.ndarray,
    q_calc: np.ndarray,
    slack: int,
    converged: bool,
) -> PowerFlowSolution:
    return PowerFlowSolution(
        v_mag=v_mag,
        v_angle=v_angle,
        iterations=iterations,
        max_mismatch=max_mismatch,
        slack_injection=(float(p_calc[slack]), float(q_calc[slack])),
        converged=converged,
    )


def solve_newton_raphson(
    problem: PowerFlowProblem, options: SolverOptions | None = None
) -> PowerFlowSolution:
    """Full Newton-Raphson power flow from a flat start.

    Each iteration solves J dx = mismatch for the angle and magnitude
    corrections of the PQ buses.  A singular Jacobian raises
    SingularMatrixError; hitting the iteration cap returns the last state
    with converged=False so callers can inspect it.
    """
    opts = options or SolverOptions()
    max_iter = opts.max_iterations if opts.max_iterations is not None else NR_MAX_ITERATIONS
    n = problem.admittance.n
    pq = problem.pq_indices
    m = len(pq)
    v_mag = np.ones(n)
    v_angle = np.zeros(n)
    it = 0
    while True:
        mismatch, p_calc, q_calc = _mismatch(problem, v_mag, v_angle, pq)
        max_mismatch = float(np.max(np.abs(mismatch))) if m else 0.0
        if max_mismatch <= opts.tolerance:
            return _finish(
                v_mag, v_angle, it, max_mismatch, p_calc, q_calc,
                problem.slack_index, True,
            )
        if it >= max_iter:
            return _finish(
                v_mag, v_angle, it, max_mismatch, p_calc, q_calc,
                problem.slack_index, False,
            )
        jac = newton_jacobian(v_mag, v_angle, problem.admittance, pq)
        dx = solve_linear(jac, mismatch)
        v_angle[pq] += dx[:m]
        v_mag[pq] += dx[m:]
        it += 1


def solve_gauss_seidel(
    problem: PowerFlowProblem, options: SolverOptions | None = None
) -> PowerFlowSolution:
    """Gauss-Seidel power flow with in-place complex voltage sweeps.

    Update per PQ bus: V_i <- (S_i*/V_i* - sum_{k != i} Y_ik V_k) / Y_ii.
    Convergence is judged on the same injection mismatch as
    Newton-Raphson so the two solvers are cross-comparable.
    """
    opts = options or SolverOptions()
    max_iter = opts.max_iterations if opts.max_iterations is not None else GS_MAX_ITERATIONS
    y = problem.admittance.y
    n = problem.admittance.n
    pq = problem.pq_indices
    for i in pq:
        if y[i, i] == 0:
            raise SingularMatrixError(f"zero admittance diagonal at bus index {i}")
    s_spec = np.zeros(n, dtype=complex)
    s_spec[pq] = problem.p_injection + 1j * problem.q_injection
    v = np.ones(n, dtype=complex)
    it = 0
    while True:
        v_mag = np.abs(v)
        v_angle = np.angle(v)
        mismatch, p_calc, q_calc = _mismatch(problem, v_mag, v_angle, pq)
        max_mismatch = float(np.max(np.abs(mismatch))) if pq else 0.0
        if max_mismatch <= opts.tolerance:
            return _finish(
                v_mag, v_angle, it, max_mismatch, p_calc, q_calc,
                problem.slack_index, True,
            )
        if it >= max_iter:
            return _finish(
                v_mag, v_angle, it, max_mismatch, p_calc, q_calc,
                problem.slack_index, False,
            )
        for i in pq:
            row_sum = y[i, :] @ v - y[i, i] * v[i]
            v[i] = (np.conj(s_spec[i]) / np.conj(v[i]) - row_sum) / y[i, i]
        it += 1


def solve(problem: PowerFlowProblem, options: SolverOptions | None = None) -> PowerFlowSolution:
    """Dispatch to the solver named by options.method."""
    opts = options or SolverOptions()
    if opts.method == METHOD_NEWTON_RAPHSON:
        return solve_newton_raphson(problem, opts)
    if opts.method == METHOD_GAUSS_SEIDEL:
        return solve_gauss_seidel(problem, opts)
    raise ValueError(f"unknown solver method {opts.method!r}")


@dataclass(frozen=True)
class Dispatch:
    """Lossless dispatch result; grid_power > 0 imports, < 0 exports.

    grid_power is computed as total_demand - sum(production values), with
    plain left-to-right summation, so that identity holds bit-exactly on
    the stored fields.
    """

    produced: tuple[tuple[str, float], ...]
    total_demand: float
    grid_power: float


def simple_power_distribution(
    demands: Sequence[float], productions: Sequence[tuple[str, float]]
) -> Dispatch:
    """Lossless energy balance: renewables dispatch fully, the grid covers the rest."""
    total_demand = sum(demands)
    total_production = sum(p for _, p in productions)
    return Dispatch(
        produced=tuple(productions),
        total_demand=total_demand,
        grid_power=total_demand - total_production,
    )


def total_line_losses(
    network: Network,
    base: PerUnitBase,
    v_mag: np.ndarray,
    v_angle: np.ndarray,
) -> float:
    """Sum of R |I|^2 over all lines, in pu, for a solved voltage state."""
    index = {bus.id: i for i, bus in enumerate(network.buses)}
    v = np.asarray(v_mag, dtype=float) * np.exp(1j * np.asarray(v_angle, dtype=float))
    total = 0.0
    for line in network.lines:
        z = complex(line.resistance, line.reactance) / base.z_base
        i, k = index[line.from_bus], index[line.to_bus]
        current = (v[i] - v[k]) / z
        total += (line.resistance / base.z_base) * abs(current) ** 2
    return total
