"""Zero localization and eps-continuation for the resonance indicator.

Zeros of an analytic function are counted in axis-aligned boxes by the
argument principle with adaptively refined boundary sampling, isolated by
recursive quadrisection, polished by derivative-free Muller iteration, and
then tracked along a decreasing field-strength schedule.  The verdict logic
of limit_analysis turns the instability theorems into a falsifiable check:
a trajectory that converges inside the sector must land where every profile
transform (nearly) vanishes and the eps = 0 indicator does not.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .branches import in_lower_sector
from .model import PerturbationSpec, fourier_hat
from .quadrature import QuadratureConfig
from .scattering import det_gtilde_plus, principal_sqrt, s_inverse

__all__ = [
    "BoundaryZeroError",
    "BudgetExhaustedError",
    "ComplexBox",
    "LimitConfig",
    "Resonance",
    "Trajectory",
    "TrajectoryPoint",
    "Verdict",
    "find_zeros",
    "limit_analysis",
    "track_trajectory",
    "winding_number",
]

STATUS_CONVERGED = "converged-interior"
STATUS_ESCAPED = "escaped-box"
STATUS_REAL_AXIS = "approached-real-axis"
STATUS_STEP_FAILURE = "step-failure"

VERDICT_CONSISTENT = "converged-interior; consistent with instability theorem"
VERDICT_VIOLATING = "theorem-violating (would falsify paper)"
VERDICT_VACUOUS = "no interior limit; theorem vacuously satisfied"
VERDICT_INCONCLUSIVE = "inconclusive (extrapolation error above threshold)"


class BoundaryZeroError(RuntimeError):
    """|D| fell below the boundary threshold while sampling a box edge."""


class WindingRefinementError(RuntimeError):
    """Boundary phase increments failed to settle below pi/2."""


class BudgetExhaustedError(RuntimeError):
    """Evaluation budget ran out; .partial carries the zeros found so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = list(partial)


@dataclass(frozen=True)
class ComplexBox:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("box must satisfy re_min < re_max and im_min < im_max")

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.re_min + margin <= z.real <= self.re_max - margin
                and self.im_min + margin <= z.imag <= self.im_max - margin)

    def in_lower_sector(self) -> bool:
        corners = [complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                   complex(self.re_min, self.im_max), complex(self.re_max, self.im_max)]
        return all(in_lower_sector(c) for c in corners)

    def quadrants(self):
        rm = 0.5 * (self.re_min + self.re_max)
        im = 0.5 * (self.im_min + self.im_max)
        return (
            ComplexBox(self.re_min, rm, self.im_min, im),
            ComplexBox(rm, self.re_max, self.im_min, im),
            ComplexBox(self.re_min, rm, im, self.im_max),
            ComplexBox(rm, self.re_max, im, self.im_max),
        )

    def around(self, z: complex, radius: float) -> "ComplexBox":
        return ComplexBox(z.real - radius, z.real + radius,
                          z.imag - radius, z.imag + radius)

    def as_tuple(self):
        return (self.re_min, self.re_max, self.im_min, self.im_max)


@dataclass(frozen=True)
class Resonance:
    epsilon: float
    zeta: complex
    residual: float
    multiplicity: int
    condition: float


@dataclass(frozen=True)
class TrajectoryPoint:
    epsilon: float
    resonance: Resonance


@dataclass(frozen=True)
class Trajectory:
    points: tuple
    status: str

    @property
    def zetas(self):
        return [p.resonance.zeta for p in self.points]

    @property
    def epsilons(self):
        return [p.epsilon for p in self.points]


class _CachedFunction:
    """Memoizing wrapper with an evaluation budget."""

    def __init__(self, f, budget):
        self.f = f
        self.budget = budget
        self.evals = 0
        self.cache = {}

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if z in self.cache:
            return self.cache[z]
        if self.budget is not None and self.evals >= self.budget:
            raise _BudgetSignal()
        self.evals += 1
        v = complex(self.f(z))
        self.cache[z] = v
        return v


class _BudgetSignal(Exception):
    pass


def _boundary_loop(box: ComplexBox, per_edge: int):
    """Counterclockwise boundary samples, starting at the lower-left corner."""
    c = [complex(box.re_min, box.im_min), complex(box.re_max, box.im_min),
         complex(box.re_max, box.im_max), complex(box.re_min, box.im_max)]
    pts = []
    for a, b in zip(c, c[1:] + c[:1]):
        for t in np.linspace(0.0, 1.0, per_edge, endpoint=False):
            pts.append(a + t * (b - a))
    return pts


def winding_number(D, box: ComplexBox, *, per_edge: int = 16,
                   max_points: int = 8192, boundary_rel_tol: float = 1e-9) -> int:
    """Number of zeros of D inside the box, by the argument principle.

    Boundary sampling is refined until consecutive phase increments stay
    below pi/2.  A sample with |D| below boundary_rel_tol times the boundary
    maximum raises BoundaryZeroError (zero on or next to the contour).
    """
    f = D if isinstance(D, _CachedFunction) else _CachedFunction(D, None)
    pts = _boundary_loop(box, per_edge)
    vals = [f(z) for z in pts]

    def check_small(vs):
        scale = max(abs(v) for v in vs)
        if scale == 0.0 or min(abs(v) for v in vs) < boundary_rel_tol * scale:
            raise BoundaryZeroError(
                f"|D| below {boundary_rel_tol:.0e} of boundary scale on {box}"
            )

    check_small(vals)
    # refine segments until each phase increment is < pi/2
    work = list(zip(pts, pts[1:] + pts[:1]))
    total = 0.0
    n_pts = len(pts)
    while work:
        a, b = work.pop()
        va, vb = f(a), f(b)
        dphi = cmath.phase(vb / va)
        if abs(dphi) < 0.5 * math.pi:
            total += dphi
            continue
        if n_pts >= max_points:
            raise WindingRefinementError(
                f"boundary refinement exceeded {max_points} points on {box}"
            )
        m = 0.5 * (a + b)
        vm = f(m)
        check_small([va, vm, vb])
        n_pts += 1
        work.append((a, m))
        work.append((m, b))
    w = total / (2.0 * math.pi)
    n = round(w)
    if abs(w - n) > 0.25:
        raise WindingRefinementError(f"non-integer winding {w:.3f} on {box}")
    return int(n)


def _muller(f, seeds, tol, max_iter=80, step_limit=None):
    """Derivative-free Muller iteration; returns (z, |f(z)|, |f'| estimate)."""
    x0, x1, x2 = (complex(s) for s in seeds)
    f0, f1, f2 = f(x0), f(x1), f(x2)
    start = x2
    deriv = abs(f2 - f1) / max(abs(x2 - x1), 1e-300)
    for _ in range(max_iter):
        if abs(f2) <= tol:
            break
        q = (x2 - x1) / (x1 - x0)
        a = q * f2 - q * (1 + q) * f1 + q * q * f0
        b = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
        c = (1 + q) * f2
        disc = cmath.sqrt(b * b - 4 * a * c)
        den = b + disc if abs(b + disc) > abs(b - disc) else b - disc
        if den == 0:
            break
        x3 = x2 - (x2 - x1) * 2 * c / den
        if step_limit is not None and abs(x3 - start) > step_limit:
            x3 = start + step_limit * (x3 - start) / abs(x3 - start)
        f3 = f(x3)
        deriv = abs(f3 - f2) / max(abs(x3 - x2), 1e-300)
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f3
    return x2, abs(f2), deriv


def find_zeros(D, box: ComplexBox, tol: float = 1e-9, *, epsilon: float = 0.0,
               coarse_diameter: float | None = None, budget: int | None = 60000,
               per_edge: int = 16) -> list:
    """Locate all zeros of the analytic D in the box.

    Quadrisects until each sub-box holds winding <= 1 and has diameter below
    the coarse threshold, then refines each zero with Muller to |D| <= tol.
    Returned zeros are pairwise distinct by more than 10*tol.  Exhausting the
    evaluation budget raises BudgetExhaustedError carrying partial results.
    """
    f = _CachedFunction(D, budget)
    coarse = coarse_diameter if coarse_diameter is not None else max(
        40.0 * tol, 0.08 * box.diameter
    )
    results = []
    try:
        stack = [(box, winding_number(f, box, per_edge=per_edge))]
        while stack:
            b, w = stack.pop()
            if w == 0:
                continue
            if w > 1 or b.diameter > coarse:
                for q in b.quadrants():
                    try:
                        wq = winding_number(f, q, per_edge=max(8, per_edge // 2))
                    except BoundaryZeroError:
                        # nudge the split: zero sits on a cut line; enlarge
                        # the quadrant slightly to capture it cleanly
                        qq = ComplexBox(
                            q.re_min - 1e-4 * b.diameter, q.re_max + 1e-4 * b.diameter,
                            q.im_min - 1e-4 * b.diameter, q.im_max + 1e-4 * b.diameter,
                        )
                        wq = winding_number(f, qq, per_edge=max(8, per_edge // 2))
                        q = qq
                    if wq:
                        stack.append((q, wq))
                continue
            # isolated simple candidate: polish from the box center
            h = 0.2 * b.diameter
            z, resid, deriv = _muller(
                f, (b.center, b.center + h, b.center + 1j * h), tol,
                step_limit=2.0 * b.diameter,
            )
            if resid > tol:
                # retry from a rotated seed triple before giving up
                z, resid, deriv = _muller(
                    f, (b.center - h, b.center + 0.5j * h, b.center), tol,
                    step_limit=4.0 * b.diameter,
                )
            if resid <= tol:
                results.append(Resonance(epsilon, z, resid, max(w, 1), deriv))
    except _BudgetSignal:
        raise BudgetExhaustedError(
            f"evaluation budget {budget} exhausted", _dedupe(results, 10 * tol)
        ) from None
    return _dedupe(results, 10 * tol)


def _dedupe(resonances, min_dist):
    out = []
    for r in sorted(resonances, key=lambda r: (r.zeta.real, r.zeta.imag)):
        if all(abs(r.zeta - o.zeta) > min_dist for o in out):
            out.append(r)
    return out


@dataclass(frozen=True)
class TrackingConfig:
    step_cap_factor: float = 0.2     # of box diameter
    max_retries: int = 8
    refine_tol: float = 1e-9
    verify_winding: bool = True
    verify_per_edge: int = 8


def track_trajectory(spec: PerturbationSpec, seed: Resonance,
                     schedule, box: ComplexBox,
                     config: QuadratureConfig | None = None,
                     tracking: TrackingConfig | None = None) -> Trajectory:
    """Continue a resonance of the field-strength family down a schedule.

    schedule is (eps_start, eps_end, ratio) with 0 < ratio < 1.  Each step
    predicts by linear extrapolation in eps, refines with Muller on the new
    indicator, and accepts only moves within the step cap; a rejected step
    retried with the square root of the ratio (half the log-step).  The
    winding check around each accepted point guards against silently jumping
    between distinct zeros.
    """
    eps_start, eps_end, ratio = schedule
    if not (0 < ratio < 1):
        raise ValueError("schedule ratio must be in (0, 1)")
    if not (0 < eps_end < eps_start):
        raise ValueError("need 0 < eps_end < eps_start")
    trk = tracking or TrackingConfig()
    if spec.rank == 0:
        raise ValueError("V = 0 has no resonances to track")

    def indicator_at(eps):
        return lambda z: det_gtilde_plus(eps, z, spec, config)

    d0 = indicator_at(eps_start)(seed.zeta)
    if abs(d0) > 100 * trk.refine_tol:
        raise ValueError(
            f"seed is not a verified zero at eps_start: |D| = {abs(d0):.3e}"
        )
    step_cap = trk.step_cap_factor * box.diameter
    points = [TrajectoryPoint(eps_start, seed)]
    status = STATUS_CONVERGED
    eps = eps_start
    r = ratio
    while eps > eps_end * (1 + 1e-12):
        eps_next = max(eps * r, eps_end)
        retries = 0
        accepted = None
        while True:
            # linear extrapolation from the last two accepted points
            if len(points) >= 2:
                (e1, z1) = points[-2].epsilon, points[-2].resonance.zeta
                (e2, z2) = points[-1].epsilon, points[-1].resonance.zeta
                pred = z2 + (z2 - z1) * (eps_next - e2) / (e2 - e1)
            else:
                pred = points[-1].resonance.zeta
            d = indicator_at(eps_next)
            h = max(0.02 * step_cap, 100 * trk.refine_tol)
            z, resid, deriv = _muller(
                d, (pred, pred + h, pred + 1j * h), trk.refine_tol,
                step_limit=2 * step_cap,
            )
            jump = abs(z - points[-1].resonance.zeta)
            if resid <= trk.refine_tol and jump <= step_cap:
                accepted = (eps_next, z, resid, deriv)
                break
            retries += 1
            if retries > trk.max_retries:
                return Trajectory(tuple(points), STATUS_STEP_FAILURE)
            # halve the log-step of the geometric schedule and retry
            r = math.sqrt(r)
            eps_next = max(eps * r, eps_end)

        eps_next, z, resid, deriv = accepted
        mult = 1
        if trk.verify_winding:
            radius = max(4 * abs(z - points[-1].resonance.zeta),
                         1e3 * trk.refine_tol)
            try:
                mult = winding_number(
                    indicator_at(eps_next), box.around(z, radius),
                    per_edge=trk.verify_per_edge,
                )
            except (BoundaryZeroError, WindingRefinementError):
                mult = 1
            if mult < 1:
                return Trajectory(tuple(points), STATUS_STEP_FAILURE)
        res = Resonance(eps_next, z, resid, mult, deriv)
        points.append(TrajectoryPoint(eps_next, res))
        eps = eps_next
        if z.imag >= box.im_max:
            return Trajectory(tuple(points), STATUS_REAL_AXIS)
        if not box.contains(z):
            return Trajectory(tuple(points), STATUS_ESCAPED)
    return Trajectory(tuple(points), status)


@dataclass(frozen=True)
class LimitConfig:
    cauchy_factor: float = 0.7
    tail_steps: int = 4
    sector_margin: float = 0.02   # radians
    hat_tol: float = 1e-3
    res_margin: float = 1e-3
    extrapolation_tol: float = 2e-2


@dataclass(frozen=True)
class Verdict:
    converged: bool
    status: str
    consistent_with_theorem: bool
    zeta0: complex | None = None
    extrapolation_error: float | None = None
    hats: tuple = ()
    hats_small: bool | None = None
    det_gtilde0: complex | None = None
    zeta0_not_resonance: bool | None = None
    s0inv_offdiag: float | None = None
    trajectory_status: str = ""


def limit_analysis(trajectory: Trajectory, spec: PerturbationSpec,
                   config: QuadratureConfig | None = None,
                   limits: LimitConfig | None = None) -> Verdict:
    """Classify a trajectory's eps -> 0 limit against the instability theorems.

    A convergent-interior verdict requires Cauchy-decreasing tail increments
    and a sector-interior extrapolated limit; it is theorem-consistent when
    every |psihat_k(sqrt zeta0)| is below hat_tol and |det G_plus^0(zeta0)|
    stays above res_margin (the limit is not an eps = 0 resonance).
    """
    lim = limits or LimitConfig()
    if len(trajectory.points) < 3:
        return Verdict(False, VERDICT_INCONCLUSIVE, True,
                       trajectory_status=trajectory.status)
    if trajectory.status != STATUS_CONVERGED:
        return Verdict(False, VERDICT_VACUOUS, True,
                       trajectory_status=trajectory.status)

    zs = trajectory.zetas
    tail = zs[-(lim.tail_steps + 1):]
    incs = [abs(b - a) for a, b in zip(tail, tail[1:])]
    cauchy = all(d2 <= lim.cauchy_factor * d1 + 1e-15
                 for d1, d2 in zip(incs, incs[1:])) and len(incs) >= 2

    # Aitken extrapolation of the tail
    z1, z2, z3 = zs[-3], zs[-2], zs[-1]
    den = (z3 - z2) - (z2 - z1)
    if abs(den) > 1e-14:
        zeta0 = z3 - (z3 - z2) ** 2 / den
    else:
        zeta0 = z3
    err_est = abs(zeta0 - z3) + (incs[-1] if incs else 0.0)

    arg0 = cmath.phase(zeta0) if zeta0 != 0 else 0.0
    interior = (-math.pi / 3 + lim.sector_margin) < arg0 < -lim.sector_margin

    if not (cauchy and interior):
        return Verdict(False, VERDICT_VACUOUS, True, zeta0=zeta0,
                       extrapolation_error=err_est,
                       trajectory_status=trajectory.status)
    if err_est > lim.extrapolation_tol:
        return Verdict(False, VERDICT_INCONCLUSIVE, True, zeta0=zeta0,
                       extrapolation_error=err_est,
                       trajectory_status=trajectory.status)

    k0 = principal_sqrt(zeta0)
    hats = tuple(abs(fourier_hat(p, k0)) for p in spec.profiles)
    hats_small = all(h <= lim.hat_tol for h in hats)
    det0 = det_gtilde_plus(0.0, zeta0, spec, config)
    not_resonance = abs(det0) >= lim.res_margin
    offdiag = None
    try:
        s0 = s_inverse(0.0, zeta0, spec, config).dense()
        offdiag = float(abs(s0[0, 1]))
    except Exception:
        offdiag = None
    consistent = hats_small and not_resonance
    return Verdict(
        converged=True,
        status=VERDICT_CONSISTENT if consistent else VERDICT_VIOLATING,
        consistent_with_theorem=consistent,
        zeta0=zeta0,
        extrapolation_error=err_est,
        hats=hats,
        hats_small=hats_small,
        det_gtilde0=det0,
        zeta0_not_resonance=not_resonance,
        s0inv_offdiag=offdiag,
        trajectory_status=trajectory.status,
    )
