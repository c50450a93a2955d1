"""Offset canonical transforms: quadrature oracle, chirp-DFT fast path,
inverses, and the windowed variants.

Conventions, fixed once here and relied on everywhere:

* sqrt(i*2*pi*b) uses the principal branch (argument in (-pi, pi]), so for
  b > 0 the kernel prefactor is exp(-i*pi/4)/sqrt(2*pi*b).
* Quadrature is the plain rectangle rule, matching the norm conventions in
  signal.py, so discrete energy identities close exactly on the canonical
  output grid.
* The canonical output grid has step 2*pi*|b|/(N*dt). Written with |b| so
  the grid ascends for either sign of b; for b < 0 the demodulated sum is
  an inverse-convention DFT instead (same evaluation points up to the
  half-grid endpoint).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np

from .params import OlctParams, invert_params
from .signal import Grid, SampledSignal, TimeFreqMap

_CHUNK = 64  # fixed batch width so parallel and serial runs are bit-identical
_LATTICE_TOL = 1e-9


class TransformMethod(str, Enum):
    DIRECT = "direct"
    FAST = "fast"


def _require_integral(p: OlctParams):
    if p.b == 0.0:
        raise ValueError("b = 0: use the chirp-scaling branch (olct_chirp_scaling)")


def kernel(p: OlctParams, t, u):
    """Integral-branch kernel K(t, u); t and u broadcast.

    Unimodular complex exponential scaled by 1/sqrt(i*2*pi*b), so
    |kernel| = 1/sqrt(2*pi*|b|) everywhere.
    """
    _require_integral(p)
    t = np.asarray(t, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    pref = 1.0 / np.sqrt(1j * 2.0 * np.pi * p.b)
    phase = (
        (p.a / (2.0 * p.b)) * t * t
        - t * (u - p.u0) / p.b
        - u * (p.d * p.u0 - p.b * p.w0) / p.b
        + (p.d / (2.0 * p.b)) * (u * u + p.u0 * p.u0)
    )
    return pref * np.exp(1j * phase)


def olct_direct(f: SampledSignal, p: OlctParams, u_grid: Grid) -> SampledSignal:
    """O(N*M) quadrature sum; evaluates at arbitrary output points.

    This is the oracle the fast path is validated against.
    """
    _require_integral(p)
    t = f.grid.points
    out = np.empty(u_grid.count, dtype=np.complex128)
    u = u_grid.points
    # chunk output rows to bound the kernel matrix at _CHUNK x N
    for lo in range(0, u_grid.count, _CHUNK):
        hi = min(lo + _CHUNK, u_grid.count)
        K = kernel(p, t[None, :], u[lo:hi, None])
        out[lo:hi] = f.dt * (K @ f.samples)
    return SampledSignal(u_grid, out)


def olct_chirp_scaling(f: SampledSignal, p: OlctParams, u_grid: Grid) -> SampledSignal:
    """b = 0 branch: sqrt(d) * chirp * f(d*(u - u0)), linear interpolation
    with zero extension off the sample range."""
    if p.b != 0.0:
        raise ValueError("b != 0: use the integral branch")
    u = u_grid.points
    x = p.d * (u - p.u0)
    t = f.grid.points
    re = np.interp(x, t, f.samples.real, left=0.0, right=0.0)
    im = np.interp(x, t, f.samples.imag, left=0.0, right=0.0)
    chirp = np.exp(1j * ((p.c * p.d / 2.0) * (u - p.u0) ** 2 + u * p.w0))
    vals = np.sqrt(complex(p.d)) * chirp * (re + 1j * im)
    return SampledSignal(u_grid, vals)


def canonical_u_grid(time_grid: Grid, p: OlctParams) -> Grid:
    """Output grid on which the chirp-demodulated sum is an exact DFT:
    u_m = u0 + 2*pi*|b|*(m - N//2)/(N*dt)."""
    _require_integral(p)
    n = time_grid.count
    du = 2.0 * np.pi * abs(p.b) / (n * time_grid.step)
    return Grid(p.u0 - (n // 2) * du, du, n)


def _grids_equal(g1: Grid, g2: Grid) -> bool:
    return (
        g1.count == g2.count
        and math.isclose(g1.step, g2.step, rel_tol=1e-12, abs_tol=0.0)
        and math.isclose(g1.start, g2.start, rel_tol=1e-12, abs_tol=1e-12 * g1.step)
    )


def _fast_stage(time_grid: Grid, p: OlctParams):
    """Precompute the per-sample and per-bin factors of the fast path."""
    n = time_grid.count
    dt = time_grid.step
    t = time_grid.points
    h = n // 2
    s = 1.0 if p.b > 0 else -1.0
    k = np.arange(n)
    # chirp demodulation plus the half-grid DFT offset exp(i*s*2*pi*k*h/n)
    pre = np.exp(1j * ((p.a / (2.0 * p.b)) * t * t + s * 2.0 * np.pi * k * h / n))
    # phase ramp for a time grid not starting at 0
    m = np.arange(n)
    ramp = dt * np.exp(-1j * s * 2.0 * np.pi * time_grid.start * (m - h) / (n * dt))
    u = canonical_u_grid(time_grid, p).points
    post = (1.0 / np.sqrt(1j * 2.0 * np.pi * p.b)) * np.exp(
        1j * (-(u / p.b) * (p.d * p.u0 - p.b * p.w0) + (p.d / (2.0 * p.b)) * (u * u + p.u0 * p.u0))
    )
    return pre, ramp, post, s


def _fast_apply(batch: np.ndarray, pre, ramp, post, s) -> np.ndarray:
    """Chirp-multiply / DFT / chirp-multiply on columns of `batch`."""
    y = batch * pre[:, None]
    if s > 0:
        Y = np.fft.fft(y, axis=0)
    else:
        Y = np.fft.ifft(y, axis=0) * y.shape[0]
    return post[:, None] * (ramp[:, None] * Y)


def fast_olct(f: SampledSignal, p: OlctParams) -> SampledSignal:
    """O(N log N) transform on the canonical output grid.

    Agrees with olct_direct on the same grid to roundoff: both sum the
    same N terms, this path just factors the sum through a DFT.
    """
    _require_integral(p)
    pre, ramp, post, s = _fast_stage(f.grid, p)
    vals = _fast_apply(f.samples[:, None], pre, ramp, post, s)[:, 0]
    return SampledSignal(canonical_u_grid(f.grid, p), vals)


def inverse_phase(p: OlctParams) -> complex:
    """Scalar phase of the inverse transform.

    The last exponent term is quadratic in w0; the resolution of this
    constant was pinned numerically from round-trip ratios over several
    parameter sets (see tests) and agrees with an analytic evaluation of
    the composed kernels.
    """
    return complex(
        np.exp(
            1j
            * (
                (p.c * p.d / 2.0) * p.u0 * p.u0
                - p.a * p.d * p.u0 * p.w0
                + (p.a * p.b / 2.0) * p.w0 * p.w0
            )
        )
    )


def inverse_olct(F: SampledSignal, p: OlctParams, t_grid: Grid) -> SampledSignal:
    """Reconstruct the time signal from u-indexed transform values.

    f(t) = phase * du * sum_m F(u_m) K_inv(u_m, t) with K_inv the kernel of
    the inverted parameters. Exact (to roundoff) when F lives on the
    canonical grid and t_grid is the original time grid.
    """
    _require_integral(p)
    pinv = invert_params(p)
    phase = inverse_phase(p)
    u = F.grid.points
    t = t_grid.points
    out = np.empty(t_grid.count, dtype=np.complex128)
    for lo in range(0, t_grid.count, _CHUNK):
        hi = min(lo + _CHUNK, t_grid.count)
        K = kernel(pinv, u[None, :], t[lo:hi, None])
        out[lo:hi] = phase * F.dt * (K @ F.samples)
    return SampledSignal(t_grid, out)


def window_shift_index(f_grid: Grid, phi_grid: Grid, w: float) -> int:
    """Integer lattice offset such that phi(t_k - w) = phi.samples[k - offset].

    Raises if w is off the shared sample lattice.
    """
    lam = (w - f_grid.start + phi_grid.start) / f_grid.step
    lam_i = int(round(lam))
    if abs(lam - lam_i) > _LATTICE_TOL:
        raise ValueError(f"window position w = {w!r} is off the sample lattice")
    return lam_i


def shifted_window(phi: SampledSignal, f_grid: Grid, w: float) -> np.ndarray:
    """Samples of phi(t - w) on f_grid, zero extension outside phi's support."""
    return _shifted_from_index(phi, f_grid.count, window_shift_index(f_grid, phi.grid, w))


def _shifted_from_index(phi: SampledSignal, count: int, lam_i: int) -> np.ndarray:
    out = np.zeros(count, dtype=np.complex128)
    lo = max(0, lam_i)
    hi = min(count, phi.grid.count + lam_i)
    if hi > lo:
        out[lo:hi] = phi.samples[lo - lam_i : hi - lam_i]
    return out


def _windowed(f, phi, p_kernel, u_grid, w_grid, method, jobs):
    if phi.grid.step != f.grid.step:
        raise ValueError("signal and window must share the sample step")
    method = TransformMethod(method)
    _require_integral(p_kernel)

    n = f.grid.count
    shifts = [window_shift_index(f.grid, phi.grid, w) for w in w_grid.points]

    if method is TransformMethod.FAST:
        if not _grids_equal(u_grid, canonical_u_grid(f.grid, p_kernel)):
            raise ValueError("fast method requires the canonical u grid")
        stage = _fast_stage(f.grid, p_kernel)
    else:
        t = f.grid.points
        u = u_grid.points
        K = kernel(p_kernel, t[None, :], u[:, None])

    values = np.empty((u_grid.count, w_grid.count), dtype=np.complex128)

    def run_chunk(lo):
        hi = min(lo + _CHUNK, w_grid.count)
        prod = np.empty((n, hi - lo), dtype=np.complex128)
        for j in range(lo, hi):
            prod[:, j - lo] = f.samples * np.conj(_shifted_from_index(phi, n, shifts[j]))
        if method is TransformMethod.FAST:
            values[:, lo:hi] = _fast_apply(prod, *stage)
        else:
            values[:, lo:hi] = f.dt * (K @ prod)

    starts = range(0, w_grid.count, _CHUNK)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run_chunk, starts))
    else:
        for lo in starts:
            run_chunk(lo)
    return TimeFreqMap(u_grid, w_grid, values, p_kernel)


def wlct(f, phi, p, u_grid, w_grid, method=TransformMethod.FAST, jobs=1) -> TimeFreqMap:
    """Windowed transform with the offset-free kernel (offsets of `p` are
    ignored; only the unimodular block enters)."""
    stripped = OlctParams.lct(p.a, p.b, p.c, p.d)
    return _windowed(f, phi, stripped, u_grid, w_grid, method, jobs)


def wolct(f, phi, p, u_grid, w_grid, method=TransformMethod.FAST, jobs=1) -> TimeFreqMap:
    """Windowed offset transform: column j is the transform of
    f * conj(phi(. - w_j)) under the full parameter set."""
    return _windowed(f, phi, p, u_grid, w_grid, method, jobs)


def inverse_wolct_slice(V: TimeFreqMap, w: float, t_grid: Grid) -> SampledSignal:
    """Reconstruct the product f(t)*conj(phi(t - w)) from one w column."""
    return inverse_olct(V.slice_at(w), V.params, t_grid)
