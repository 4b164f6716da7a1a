"""Branch-aware scalar functions shared by every other module.

All powers use the principal determination with the cut along (-infty, 0],
positive on the positive real axis.  The "lower sector" is the wedge
-pi/3 < arg(zeta) < 0 where the small-field Airy asymptotics hold and where
resonance trajectories are tracked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

# Inputs this close to the cut are rejected instead of silently resolved:
# downstream continuation formulas are branch-sensitive.
CUT_GUARD = 1e-300

LOWER_SECTOR_MIN_ARG = -math.pi / 3.0


class BranchCutError(ValueError):
    """Argument lies on (or within the guard band of) the cut (-infty, 0]."""


class SectorError(ValueError):
    """Argument lies outside the required sector of the complex plane."""


def on_cut(zeta: complex) -> bool:
    """True if zeta is on the branch cut (-infty, 0], up to the guard band."""
    z = complex(zeta)
    return z.real <= 0.0 and abs(z.imag) <= CUT_GUARD


def _require_off_cut(zeta: complex) -> complex:
    z = complex(zeta)
    if on_cut(z):
        raise BranchCutError(f"zeta={z!r} lies on the branch cut (-infty, 0]")
    return z


def principal_sqrt(zeta: complex) -> complex:
    """Principal square root: Re(result) > 0, positive on (0, infty)."""
    return cmath.sqrt(_require_off_cut(zeta))


def quarter_root(zeta: complex) -> complex:
    """Principal fourth root: arg(result) in (-pi/4, pi/4)."""
    z = _require_off_cut(zeta)
    return cmath.exp(0.25 * cmath.log(z))


def in_lower_sector(zeta: complex, *, include_real_axis: bool = False) -> bool:
    """Membership test for the sector -pi/3 < arg(zeta) < 0.

    With include_real_axis=True the closure at arg(zeta) = 0 (positive real
    axis) is admitted; the bottom edge is always excluded.
    """
    z = complex(zeta)
    if z == 0:
        return False
    a = cmath.phase(z)
    if include_real_axis:
        return LOWER_SECTOR_MIN_ARG < a <= 0.0
    return LOWER_SECTOR_MIN_ARG < a < 0.0


def require_lower_sector(zeta: complex, *, include_real_axis: bool = False) -> complex:
    z = complex(zeta)
    if not in_lower_sector(z, include_real_axis=include_real_axis):
        raise SectorError(
            f"zeta={z!r} is outside the sector -pi/3 < arg(zeta) < 0"
        )
    return z


def rho_three_halves(zeta: complex) -> complex:
    """(-zeta)**(3/2) with the principal branch, for zeta in the lower sector.

    For -pi/3 < arg(zeta) < 0 one has 2pi/3 < arg(-zeta) < pi, hence
    Re(result) < 0; this sign is what makes exp(2*rho^{3/2}/(3 eps)) a
    decaying factor along resonance trajectories.
    """
    z = require_lower_sector(zeta)
    rho = -z
    return rho ** 1.5


@dataclass(frozen=True)
class SectorPoint:
    """A spectral parameter together with its sector classification."""

    zeta: complex
    sector: str  # "upper-half" | "lower-sector" | "real-positive"

    _ALLOWED = ("upper-half", "lower-sector", "real-positive")

    def __post_init__(self) -> None:
        if self.sector not in self._ALLOWED:
            raise ValueError(f"unknown sector tag {self.sector!r}")
        z = complex(self.zeta)
        if self.sector == "upper-half" and not z.imag > 0.0:
            raise SectorError(f"{z!r} is not in the open upper half-plane")
        if self.sector == "lower-sector" and not in_lower_sector(z):
            raise SectorError(f"{z!r} is not in the lower sector")
        if self.sector == "real-positive" and not (z.imag == 0.0 and z.real > 0.0):
            raise SectorError(f"{z!r} is not on the positive real axis")


def classify(zeta: complex) -> SectorPoint:
    """Tag zeta with the sector used by the continuation formulas."""
    z = complex(zeta)
    if z.imag > 0.0:
        return SectorPoint(z, "upper-half")
    if z.imag == 0.0 and z.real > 0.0:
        return SectorPoint(z, "real-positive")
    if in_lower_sector(z):
        return SectorPoint(z, "lower-sector")
    raise SectorError(f"zeta={z!r} is in none of the supported sectors")
