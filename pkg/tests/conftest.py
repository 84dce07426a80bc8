"""Shared builders for randomized networks, problems, and scenarios."""

from __future__ import annotations

import random

import numpy as np

from microgridsim import (
    Bus,
    BusKind,
    GridConnection,
    Line,
    LoadDevice,
    Network,
    PerUnitBase,
    PowerFlowProblem,
    Scenario,
    SimulationConfig,
    SolarPanel,
    WeatherParams,
    WindTurbine,
    build_admittance,
    compute_injections,
)

BASE = PerUnitBase(s_base=10_000.0, v_base=230.0)


def make_radial_network(
    rng: random.Random,
    n_buses: int,
    load_pu_range: tuple[float, float] = (0.05, 0.4),
    r_pu_range: tuple[float, float] = (0.001, 0.01),
) -> Network:
    """Random radial 230 V network: bus 0 slack, every other bus hangs off an
    earlier one, with a constant load on most non-slack buses."""
    buses = [Bus("bus0", BusKind.SLACK, 230.0)]
    lines = []
    loads = []
    for i in range(1, n_buses):
        parent = rng.randrange(i)
        buses.append(Bus(f"bus{i}", BusKind.PQ, 230.0))
        r_ohm = rng.uniform(*r_pu_range) * BASE.z_base
        lines.append(Line(f"line{i}", f"bus{parent}", f"bus{i}", r_ohm))
        if rng.random() < 0.8:
            p_w = rng.uniform(*load_pu_range) * BASE.s_base
            loads.append(LoadDevice(f"load{i}", f"bus{i}", p_w))
    return Network(buses=tuple(buses), lines=tuple(lines), loads=tuple(loads))


def problem_for(network: Network, base: PerUnitBase = BASE) -> PowerFlowProblem:
    """Injection problem for a network of constant loads and PV/wind watts.

    Rebuilt here from first principles (loads negative, generation
    positive, divided by s_base) rather than reusing the engine's
    assembly, so solver tests do not depend on engine code.
    """
    n = len(network.buses)
    index = {bus.id: i for i, bus in enumerate(network.buses)}
    p = np.zeros(n)
    q = np.zeros(n)
    for load in network.loads:
        p[index[load.bus]] -= load.active_power
        q[index[load.bus]] -= load.reactive_power
    slack = network.slack_index()
    pq = [i for i in range(n) if i != slack]
    return PowerFlowProblem(
        admittance=build_admittance(network, base),
        slack_index=slack,
        p_injection=p[pq] / base.s_base,
        q_injection=q[pq] / base.s_base,
    )


def finite_difference_jacobian(
    v_mag: np.ndarray,
    v_angle: np.ndarray,
    admittance,
    pq: list[int],
    step: float = 1e-6,
) -> np.ndarray:
    """Central-difference Jacobian of the computed PQ injections.

    Independent oracle for the analytic Jacobian: perturbs each angle and
    magnitude of the PQ buses by +-step and differences compute_injections.
    """
    m = len(pq)
    jac = np.zeros((2 * m, 2 * m))

    def stacked(vm, va):
        p, q = compute_injections(vm, va, admittance)
        return np.concatenate([p[pq], q[pq]])

    for col in range(2 * m):
        vm_hi, va_hi = v_mag.copy(), v_angle.copy()
        vm_lo, va_lo = v_mag.copy(), v_angle.copy()
        if col < m:
            va_hi[pq[col]] += step
            va_lo[pq[col]] -= step
        else:
            vm_hi[pq[col - m]] += step
            vm_lo[pq[col - m]] -= step
        jac[:, col] = (stacked(vm_hi, va_hi) - stacked(vm_lo, va_lo)) / (2.0 * step)
    return jac


def make_random_scenario(rng: random.Random) -> Scenario:
    """Random valid scenario for parser round-trip property tests."""
    n_buses = rng.randint(2, 7)
    network = make_radial_network(rng, n_buses)
    buses, lines, loads = list(network.buses), list(network.lines), list(network.loads)

    pvs = []
    winds = []
    for i in range(rng.randint(0, 2)):
        bus = rng.choice(buses).id
        pvs.append(
            SolarPanel(f"pv{i}", bus, rng.uniform(100.0, 9000.0), rng.uniform(0.0, 1.0))
        )
    for i in range(rng.randint(0, 2)):
        bus = rng.choice(buses).id
        cut_in = rng.uniform(0.0, 4.0)
        rated = cut_in + rng.uniform(1.0, 12.0)
        cut_out = rated + rng.uniform(1.0, 15.0)
        winds.append(
            WindTurbine(f"wind{i}", bus, rng.uniform(200.0, 5000.0), cut_in, rated, cut_out)
        )
    grid = GridConnection("util", "bus0") if rng.random() < 0.7 else None
    network = Network(
        buses=tuple(buses), lines=tuple(lines), loads=tuple(loads),
        pvs=tuple(pvs), winds=tuple(winds), grid=grid,
    )

    config = SimulationConfig(
        steps=rng.randint(1, 200),
        start_hour=rng.randint(0, 23),
        solver=rng.choice(["acpf", "gs", "simple"]),
        seed=rng.getrandbits(64),
        s_base_va=rng.uniform(1000.0, 100_000.0),
        v_base_v=rng.uniform(100.0, 1000.0),
    )
    if rng.random() < 0.15:
        return Scenario(
            network=network, config=config, weather=None, weather_trace="trace.csv"
        )
    weather = WeatherParams(
        weibull_shape=rng.uniform(0.5, 4.0),
        weibull_scale=rng.uniform(1.0, 15.0),
        cloud_step=rng.uniform(0.0, 0.5),
        cloud_initial=rng.uniform(0.0, 1.0),
        temp_mean=rng.uniform(-10.0, 30.0),
        temp_amplitude=rng.uniform(0.0, 12.0),
        seed=config.seed,
    )
    return Scenario(network=network, config=config, weather=weather, weather_trace=None)


def scenarios_close(a: Scenario, b: Scenario, rel: float = 1e-8) -> bool:
    """Field-by-field equality with floats compared at 9-digit precision."""

    def close(x, y) -> bool:
        if isinstance(x, float) or isinstance(y, float):
            return x == y or abs(x - y) <= rel * max(1.0, abs(x), abs(y))
        if isinstance(x, tuple) and isinstance(y, tuple):
            return len(x) == len(y) and all(close(i, j) for i, j in zip(x, y))
        if hasattr(x, "__dataclass_fields__"):
            return type(x) is type(y) and all(
                close(getattr(x, f), getattr(y, f)) for f in x.__dataclass_fields__
            )
        return x == y

    return close(a, b)
