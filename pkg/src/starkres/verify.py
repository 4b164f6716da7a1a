"""Named verification suites behind the `verify` command.

Each check returns {name, measured, bound, pass}; a suite passes when every
check does.  The suites exercise library invariants on canonical built-in
perturbations, independent of any user configuration.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import airy
from .branches import rho_three_halves
from .model import PerturbationSpec, indicator, polybump
from .resolvents import free_kernel, q_matrix, stark_kernel
from .scattering import adjoint_trace_matrix, trace_matrix

__all__ = ["SUITES", "run_suite"]

_SPEC1 = PerturbationSpec((-2.0,), (indicator(0.0, 1.0),))
_SPEC2 = PerturbationSpec((-2.0, 1.5), (indicator(0.0, 1.0), polybump(0.0, 1.0, 1)))


def _check(name, measured, bound):
    measured = float(measured)
    return {"name": name, "measured": measured, "bound": float(bound),
            "pass": bool(measured <= bound)}


def _sector_grid(n_side=5):
    # interior grid of the sector -pi/3 < arg zeta < 0, 0.5 <= |zeta| <= 4
    out = []
    for r in np.linspace(0.7, 3.5, n_side):
        for th in np.linspace(-0.9 * math.pi / 3, -0.08, n_side):
            out.append(r * cmath.exp(1j * th))
    return out


def suite_airy():
    checks = []
    worst = 0.0
    for r in (0.5, 2.0, 5.0, 8.0, 10.0):
        for th in np.linspace(-math.pi, math.pi, 41)[:-1]:
            worst = max(worst, airy.wronskian_defect(r * cmath.exp(1j * th)))
    checks.append(_check("wronskian_200pts_disk10", worst, 1e-10))
    ai0 = airy.ai(0.0)
    checks.append(_check("ai_at_zero_vs_series_oracle",
                         abs(ai0 - 0.3550280538878172), 1e-12))
    # defining ODE y'' = omega y by central differences
    worst = 0.0
    h = 1e-3
    for w in (-5.0, 1.5, 2 + 1j, -1 - 2j):
        vals = [airy.ai(w + i * h) for i in (-2, -1, 0, 1, 2)]
        d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
        scale = abs(d2) + abs(w * vals[2]) + 1e-30
        worst = max(worst, abs(d2 - w * vals[2]) / scale)
    checks.append(_check("airy_ode_fd_residual", worst, 1e-6))
    return checks


def suite_kernels():
    checks = []
    # Lemma-style conjugation symmetry of the Stark eigenfunction kernel
    worst = 0.0
    for eps in (0.1, 0.5, 1.0):
        for zeta in (1 - 0.4j, 2 - 0.5j, 0.9 + 0.3j):
            for x in (-1.0, 0.3, 0.7):
                a = airy.g_kernel(eps, zeta.conjugate(), x)
                b = airy.g_kernel(eps, zeta, x)
                worst = max(worst, abs(a.conjugate() - b))
    checks.append(_check("g_kernel_conjugation", worst, 1e-12))

    # Stark ODE residual over the stated grid, five-point stencil
    worst = 0.0
    h = 1e-3
    for eps in (0.1, 0.5, 1.0):
        for zeta in _sector_grid(5):
            for x in np.linspace(-2, 2, 5):
                vals = [airy.g_kernel(eps, zeta, x + i * h) for i in (-2, -1, 0, 1, 2)]
                d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2]
                      + 16 * vals[3] - vals[4]) / (12 * h * h)
                lhs = -d2 + (eps * x - zeta) * vals[2]
                scale = abs(d2) + abs((eps * x - zeta) * vals[2]) + 1e-30
                worst = max(worst, abs(lhs) / scale)
    checks.append(_check("stark_ode_fd_residual", worst, 1e-6))

    # kernel-level jump: K+ - K- = 2 pi i G(x) G(y)
    eps, zeta, x, y = 0.5, 1 - 0.3j, 0.2, -0.4
    kp = stark_kernel(eps, zeta, "plus", x, y)
    km = stark_kernel(eps, zeta, "minus", x, y)
    g = 2j * math.pi * airy.g_kernel(eps, zeta, x) * airy.g_kernel(eps, zeta, y)
    checks.append(_check("stark_kernel_jump", abs(kp - km - g), 1e-12))

    # eps = 0 rank-one Q against the closed-form split integral
    zeta = 1 + 1j
    k = cmath.sqrt(zeta)
    closed = -2.0 * (0.5j / k) * (-2.0 * (cmath.exp(2j * k) - 1 - 2j * k) / k ** 2)
    q = q_matrix(0.0, zeta, "plus", _SPEC1).entries[0, 0]
    checks.append(_check("free_q_closed_form", abs(q - closed), 1e-9))
    return checks


def suite_jump():
    checks = []
    for eps in (0.0, 0.5):
        for zeta in (0.9 - 0.1j, 1.5 + 0.2j, 2 - 0.4j):
            for spec, nm in ((_SPEC1, "rank1"), (_SPEC2, "rank2")):
                qp = q_matrix(eps, zeta, "plus", spec).entries
                qm = q_matrix(eps, zeta, "minus", spec).entries
                rhs = 2j * math.pi * (
                    adjoint_trace_matrix(eps, zeta, "B", spec).dense()
                    @ trace_matrix(eps, zeta, "A", spec).dense()
                )
                resid = np.linalg.norm(qp - qm - rhs)
                checks.append(_check(
                    f"jump_eps{eps}_zeta{zeta.real:+.1f}{zeta.imag:+.1f}_{nm}",
                    resid, 1e-8,
                ))
    return checks


def suite_asymptotics():
    checks = []
    zeta = cmath.exp(-1j * math.pi / 6)
    r32 = rho_three_halves(zeta)
    eps_grid = np.logspace(-3, -1, 9)
    for x in (-1.0, 0.0, 1.0):
        target = airy.g_asymptotic_target(zeta, x)
        errs = []
        for eps in eps_grid:
            g = airy.g_kernel_scaled(eps, zeta, x)
            ratio = g.times_exp(2 * r32 / (3 * eps)).to_complex() / target
            errs.append(abs(ratio - 1.0))
        slope = np.polyfit(np.log(eps_grid), np.log(errs), 1)[0]
        checks.append(_check(f"lemma33_slope_x{x:+.0f}", abs(slope - 1.0), 0.1))
        # Richardson estimate of the O(eps) coefficient
        c_formula = airy.g_first_order_coeff(zeta, x)
        ests = []
        for eps in (2e-3, 1e-3):
            g = airy.g_kernel_scaled(eps, zeta, x)
            ratio = g.times_exp(2 * r32 / (3 * eps)).to_complex() / target
            ests.append((ratio - 1.0) / eps)
        rich = 2.0 * ests[1] - ests[0]
        checks.append(_check(
            f"first_order_coeff_x{x:+.0f}",
            abs(rich - c_formula) / abs(c_formula), 0.05,
        ))
    return checks


def suite_convergence():
    zeta = 1.5 - 0.5j
    q0 = q_matrix(0.0, zeta, "minus", _SPEC1).entries
    diffs = []
    for eps in (1e-1, 1e-2, 1e-3):
        qe = q_matrix(eps, zeta, "minus", _SPEC1).entries
        diffs.append(np.linalg.norm(qe - q0))
    checks = [
        _check("lemma41_monotone",
               0.0 if diffs[0] > diffs[1] > diffs[2] else 1.0, 0.5),
        _check("lemma41_final_ratio", diffs[2] / np.linalg.norm(q0), 1e-2),
    ]
    return checks


SUITES = {
    "airy": suite_airy,
    "kernels": suite_kernels,
    "jump": suite_jump,
    "asymptotics": suite_asymptotics,
    "convergence": suite_convergence,
}


def run_suite(name: str, overrides: dict | None = None) -> dict:
    """Run one named suite (or 'all'); returns the report payload."""
    if name == "all":
        checks = []
        for fn in SUITES.values():
            checks.extend(fn())
    elif name in SUITES:
        checks = SUITES[name]()
    else:
        raise KeyError(name)
    for ch in checks:
        bound = None
        if overrides:
            if ch["name"] in overrides:
                bound = overrides[ch["name"]]
            elif "*" in overrides:
                bound = overrides["*"]
        if bound is not None:
            ch["bound"] = float(bound)
            ch["pass"] = bool(ch["measured"] <= ch["bound"])
    return {"suite": name, "checks": checks}
