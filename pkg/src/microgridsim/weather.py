"""Deterministic stochastic weather synthesis and weather-trace CSV I/O.

Wind speed is drawn per hour from a Weibull distribution via inverse-CDF
sampling, cloud cover evolves as a bounded random walk on [0, 1], and
temperature follows a fixed daily cosine profile.  All randomness comes
from an explicit SplitMix64 state, so a (seed, params, n_steps) triple
fully determines the generated trace on every platform.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MUL_1 = 0xBF58476D1CE4E5B9
_MIX_MUL_2 = 0x94D049BB133111EB

TRACE_COLUMNS = ("step", "hour", "cloud_factor", "wind_speed_mps", "temperature_c")


@dataclass(frozen=True)
class RngState:
    """SplitMix64 generator state; advance with :func:`rng_next_uniform`."""

    state: int = 0


def rng_next_uniform(rng: RngState) -> tuple[RngState, float]:
    """Advance the SplitMix64 state and return (new state, uniform in [0, 1)).

    The update is bit-exact 64-bit arithmetic: add the golden-ratio
    increment, then apply the two xor-shift-multiply mixing rounds.  The
    uniform keeps the top 53 bits, so 0 <= u < 1 always holds.
    """
    state = (rng.state + _GOLDEN_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX_MUL_1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL_2) & _MASK64
    z = z ^ (z >> 31)
    return RngState(state), (z >> 11) * 2.0**-53


def uniform_stream(seed: int, n: int) -> np.ndarray:
    """Vectorized SplitMix64: the first n uniforms for the given seed.

    Bit-identical to calling :func:`rng_next_uniform` n times starting
    from ``RngState(seed)``.  SplitMix64 state i is just
    ``seed + i * gamma`` mod 2**64, which makes the whole stream a single
    vector expression.
    """
    steps = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK64) + steps * np.uint64(_GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_MUL_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_MUL_2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def sample_wind(u: float, shape: float, scale: float) -> float:
    """Weibull inverse-CDF sample: scale * (-ln(1 - u)) ** (1 / shape).

    u = 0 maps to calm (0 m/s); u = 1 would be infinite and is rejected.
    """
    if shape <= 0.0 or scale <= 0.0:
        raise ValueError("Weibull shape and scale must be positive")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"uniform draw must lie in [0, 1), got {u!r}")
    if u == 0.0:
        return 0.0
    return scale * (-math.log1p(-u)) ** (1.0 / shape)


def step_cloud(prev: float, u: float, sigma: float) -> float:
    """One random-walk step of the cloud factor, clamped to [0, 1]."""
    if sigma < 0.0:
        raise ValueError("cloud step size must be non-negative")
    return min(1.0, max(0.0, prev + sigma * (2.0 * u - 1.0)))


@dataclass(frozen=True)
class WeatherSample:
    """Weather at one simulation step: cloud cover, wind speed, temperature."""

    step: int
    hour_of_day: int
    cloud_factor: float
    wind_speed: float
    temperature: float


@dataclass(frozen=True)
class WeatherParams:
    """Parameters of the synthetic weather model.

    weibull_shape/weibull_scale control the hourly wind-speed draw,
    cloud_step is the half-width of the cloud random-walk increment,
    and the temperature trace is
    temp_mean + temp_amplitude * cos(2*pi*(hour - 15)/24).
    """

    weibull_shape: float = 2.0
    weibull_scale: float = 6.0
    cloud_step: float = 0.15
    cloud_initial: float = 0.5
    temp_mean: float = 15.0
    temp_amplitude: float = 5.0
    seed: int = 0


def weather_series(
    params: WeatherParams, n_steps: int, start_hour: int = 0
) -> list[WeatherSample]:
    """Generate n_steps hourly weather samples.

    Each step consumes exactly two uniforms, wind first and cloud second,
    so traces stay reproducible even if a future model change stops using
    one of the draws.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if not 0 <= start_hour <= 23:
        raise ValueError("start_hour must be in 0..23")
    rng = RngState(params.seed & _MASK64)
    cloud = min(1.0, max(0.0, params.cloud_initial))
    samples = []
    for step in range(n_steps):
        hour = (start_hour + step) % 24
        rng, u_wind = rng_next_uniform(rng)
        wind = sample_wind(u_wind, params.weibull_shape, params.weibull_scale)
        rng, u_cloud = rng_next_uniform(rng)
        cloud = step_cloud(cloud, u_cloud, params.cloud_step)
        temp = params.temp_mean + params.temp_amplitude * math.cos(
            2.0 * math.pi * (hour - 15) / 24.0
        )
        samples.append(WeatherSample(step, hour, cloud, wind, temp))
    return samples


class WeatherTraceError(ValueError):
    """Raised for malformed weather-trace CSV files; row is 1-based data row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


def load_weather_csv(path: str | Path) -> list[WeatherSample]:
    """Read a weather trace written by :func:`write_weather_csv`.

    Expects the exact column set step, hour, cloud_factor, wind_speed_mps,
    temperature_c; accepts LF or CRLF line endings.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise WeatherTraceError("empty file, expected header") from None
        missing = [c for c in TRACE_COLUMNS if c not in header]
        if missing:
            raise WeatherTraceError(f"missing column(s): {', '.join(missing)}")
        extra = [c for c in header if c not in TRACE_COLUMNS]
        if extra:
            raise WeatherTraceError(f"unknown column(s): {', '.join(extra)}")
        col = {name: header.index(name) for name in TRACE_COLUMNS}

        samples = []
        for row_no, cells in enumerate(reader, start=1):
            if not cells or (len(cells) == 1 and cells[0].strip() == ""):
                continue
            if len(cells) != len(TRACE_COLUMNS):
                raise WeatherTraceError(
                    f"expected {len(TRACE_COLUMNS)} cells, got {len(cells)}", row_no
                )
            try:
                step = int(cells[col["step"]])
                hour = int(cells[col["hour"]])
                cloud = float(cells[col["cloud_factor"]])
                wind = float(cells[col["wind_speed_mps"]])
                temp = float(cells[col["temperature_c"]])
            except ValueError:
                raise WeatherTraceError("non-numeric cell", row_no) from None
            if step < 0:
                raise WeatherTraceError(f"step must be >= 0, got {step}", row_no)
            if not 0 <= hour <= 23:
                raise WeatherTraceError(f"hour must be in 0..23, got {hour}", row_no)
            if not 0.0 <= cloud <= 1.0:
                raise WeatherTraceError(
                    f"cloud_factor outside [0, 1]: {cloud}", row_no
                )
            if wind < 0.0:
                raise WeatherTraceError(f"negative wind speed: {wind}", row_no)
            samples.append(WeatherSample(step, hour, cloud, wind, temp))
    if not samples:
        raise WeatherTraceError("no samples")
    return samples


def write_weather_csv(samples: Sequence[WeatherSample], path: str | Path) -> None:
    """Write a weather trace as UTF-8 CSV with LF line endings."""
    lines = [",".join(TRACE_COLUMNS)]
    for s in samples:
        lines.append(
            f"{s.step},{s.hour_of_day},{s.cloud_factor:.9g},"
            f"{s.wind_speed:.9g},{s.temperature:.9g}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
