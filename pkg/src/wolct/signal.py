"""Uniform grids, sampled signals, and time-frequency maps.

Everything here is immutable after construction and safe to share across
threads. Norms and inner products use the plain rectangle rule so the
discrete energy identities used elsewhere close exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import OlctParams


@dataclass(frozen=True)
class Grid:
    """Uniform sample grid: point(k) = start + k*step, 0 <= k < count."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not (isinstance(self.start, (int, float)) and math.isfinite(self.start)):
            raise ValueError(f"grid start must be finite, got {self.start!r}")
        if not (isinstance(self.step, (int, float)) and math.isfinite(self.step)) or self.step <= 0:
            raise ValueError(f"grid step must be positive and finite, got {self.step!r}")
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {self.count!r}")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))

    def point(self, k: int) -> float:
        return self.start + k * self.step

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def span(self) -> float:
        """Total covered length count*step."""
        return self.count * self.step

    @classmethod
    def centered(cls, step: float, count: int) -> "Grid":
        """Grid symmetric about 0 with the DFT-style offset (includes 0 for even count)."""
        return cls(-step * (count // 2), step, count)


def _as_complex_readonly(values, expected_len: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != expected_len:
        raise ValueError(f"{what} length {arr.shape[0]} does not match grid count {expected_len}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} contains non-finite samples")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples on a uniform grid (time axis unless noted)."""

    grid: Grid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "samples", _as_complex_readonly(self.samples, self.grid.count, "samples")
        )

    @property
    def dt(self) -> float:
        return self.grid.step

    @property
    def times(self) -> np.ndarray:
        return self.grid.points


@dataclass(frozen=True)
class TimeFreqMap:
    """2D transform values V[u index, w index] plus the producing parameters."""

    u_grid: Grid
    w_grid: Grid
    values: np.ndarray = field(repr=False)
    params: OlctParams = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.shape != (self.u_grid.count, self.w_grid.count):
            raise ValueError(
                f"values shape {arr.shape} does not match grids "
                f"({self.u_grid.count}, {self.w_grid.count})"
            )
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("map contains non-finite values")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def du(self) -> float:
        return self.u_grid.step

    @property
    def dw(self) -> float:
        return self.w_grid.step

    def energy(self) -> float:
        """Discrete energy du*dw*sum|V|^2."""
        return float(self.du * self.dw * np.sum(np.abs(self.values) ** 2))

    def slice_at(self, w: float, tol: float = 1e-9) -> SampledSignal:
        """The u-indexed column at window position w (must lie on the w grid)."""
        j = (w - self.w_grid.start) / self.w_grid.step
        ji = int(round(j))
        if not (0 <= ji < self.w_grid.count) or abs(j - ji) > tol:
            raise ValueError(f"w = {w!r} is not a point of the w grid")
        return SampledSignal(self.u_grid, self.values[:, ji])


def norm_l2(s: SampledSignal) -> float:
    """Rectangle-rule L2 norm (dt * sum |s|^2)^(1/2)."""
    return float(np.sqrt(s.dt * np.sum(np.abs(s.samples) ** 2)))


def inner_product(f: SampledSignal, g: SampledSignal) -> complex:
    """Rectangle-rule inner product dt * sum f * conj(g); grids must match."""
    if f.grid != g.grid:
        raise ValueError("inner product requires identical grids")
    return complex(f.dt * np.sum(f.samples * np.conj(g.samples)))


def second_moment(s: SampledSignal) -> float:
    """dt * sum t^2 |s|^2, the quadratic spread about the origin."""
    t = s.grid.points
    return float(s.dt * np.sum(t * t * np.abs(s.samples) ** 2))
