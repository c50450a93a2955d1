"""Six-parameter transform matrices and their algebra.

A parameter set (a, b, c, d, u0, w0) describes one offset canonical
transform: (a, b, c, d) is the unimodular 2x2 block (ad - bc = 1), u0 is
the output-domain shift and w0 the modulation. b != 0 selects the
integral branch of the transform; b == 0 selects the chirp-scaling
branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class OlctParams:
    """Immutable parameter matrix for the offset canonical transform."""

    a: float
    b: float
    c: float
    d: float
    u0: float = 0.0
    w0: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "u0", "w0"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"parameter {name!r} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        defect = abs(self.a * self.d - self.b * self.c - 1.0)
        if defect > UNIMODULAR_TOL:
            raise ValueError(
                f"parameters violate unimodularity: a*d - b*c = "
                f"{self.a * self.d - self.b * self.c!r} (defect {defect:.3e})"
            )

    @property
    def is_integral(self) -> bool:
        """True for the b != 0 (integral kernel) regime."""
        return self.b != 0.0

    @property
    def is_chirp_scaling(self) -> bool:
        """True for the b == 0 (scaled chirp multiplication) regime."""
        return self.b == 0.0

    @classmethod
    def projected(cls, a, b, c, d, u0=0.0, w0=0.0) -> "OlctParams":
        """Construct with d projected to (1 + b*c)/a to restore unimodularity.

        Opt-in repair for parameter sets that drifted off the constraint
        surface; requires |a| > 1e-8 so the projection is well conditioned.
        """
        if abs(a) <= 1e-8:
            raise ValueError("projection requires |a| > 1e-8; construct directly instead")
        return cls(a, b, c, (1.0 + b * c) / a, u0, w0)

    @classmethod
    def identity(cls) -> "OlctParams":
        return cls(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)

    @classmethod
    def fourier(cls) -> "OlctParams":
        """The plain Fourier rotation (0, 1, -1, 0, 0, 0)."""
        return cls(0.0, 1.0, -1.0, 0.0, 0.0, 0.0)

    @classmethod
    def fractional_fourier(cls, angle: float) -> "OlctParams":
        """Rotation by `angle`; rejects multiples of pi (degenerate b = 0)."""
        if abs(math.sin(angle)) < 1e-12:
            raise ValueError("fractional angle must not be a multiple of pi (b would vanish)")
        return cls(math.cos(angle), math.sin(angle), -math.sin(angle), math.cos(angle))

    @classmethod
    def fresnel(cls, distance: float, wavelength: float) -> "OlctParams":
        """Free-space propagation: shear (1, wavelength*distance/(2*pi), 0, 1)."""
        if distance <= 0 or wavelength <= 0:
            raise ValueError("fresnel distance and wavelength must be positive")
        return cls(1.0, wavelength * distance / (2.0 * math.pi), 0.0, 1.0)

    @classmethod
    def lct(cls, a: float, b: float, c: float, d: float) -> "OlctParams":
        """Four-parameter special case with zero offsets."""
        return cls(a, b, c, d, 0.0, 0.0)


def invert_params(p: OlctParams) -> OlctParams:
    """Parameters of the inverse transform.

    (a, b, c, d, u0, w0) maps to (d, -b, -c, a, b*w0 - d*u0, c*u0 - a*w0).
    Applying twice returns the original parameters.
    """
    return OlctParams(
        p.d,
        -p.b,
        -p.c,
        p.a,
        p.b * p.w0 - p.d * p.u0,
        p.c * p.u0 - p.a * p.w0,
    )


def special_case(kind: str, **kwargs) -> OlctParams:
    """Named constructor dispatch: fourier, fractional_fourier(angle),
    fresnel(distance, wavelength), lct(a, b, c, d), identity."""
    table = {
        "fourier": OlctParams.fourier,
        "fractional_fourier": OlctParams.fractional_fourier,
        "fresnel": OlctParams.fresnel,
        "lct": OlctParams.lct,
        "identity": OlctParams.identity,
    }
    if kind not in table:
        raise ValueError(f"unknown special case {kind!r}; expected one of {sorted(table)}")
    return table[kind](**kwargs)
