"""Trace operators, scattering matrices, and the resonance indicator.

The spectral multiplicity is 2 for eps = 0 and 1 for eps > 0, so the trace
matrices are 2 x N and 1 x N respectively; one type carries both with a
runtime dimension.  For eps > 0 the entries Phi_k(zeta) blow up like
exp(2|Re rho^{3/2}|/(3 eps)) in the lower sector, so they are stored as
(mantissa, decimal exponent) pairs and all matrix products are assembled in
that scaled arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import airy
from .airy import ScaledComplex
from .branches import principal_sqrt, quarter_root, require_lower_sector, rho_three_halves
from .model import PerturbationSpec, ProfileFunction, fourier_hat, eval_profile
from .quadrature import QuadratureConfig, integrate_1d
from .resolvents import SingularMatrixError, g_tilde, inverse_with_condition, q_matrix

__all__ = [
    "SMatrixInv",
    "TraceMatrix",
    "det_gtilde_minus",
    "det_gtilde_plus",
    "rank_one_diagnostic_limit",
    "rank_one_sinv_components",
    "resonance_indicator",
    "s_inverse",
    "s_matrix",
    "scaled_sinv_diagnostic",
    "trace_matrix",
    "adjoint_trace_matrix",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TraceMatrix:
    """T(zeta; A) or T(zeta; B) as scaled entries: value = m * 10**e.

    Shape (2, N) at eps = 0 and (1, N) at eps > 0.
    """

    epsilon: float
    zeta: complex
    which: str
    entries: np.ndarray   # mantissas
    exp10: np.ndarray     # integer decimal exponents

    def dense(self) -> np.ndarray:
        """Collapse to plain complex; only valid for moderate exponents."""
        if self.exp10.size and np.max(np.abs(self.exp10)) > 280:
            raise OverflowError("trace matrix exponents exceed the double range")
        return self.entries * 10.0 ** self.exp10.astype(float)


@dataclass(frozen=True)
class SMatrixInv:
    """S(zeta) or S(zeta)^{-1}: 2x2 at eps = 0, 1x1 at eps > 0, scaled."""

    epsilon: float
    zeta: complex
    kind: str  # "direct" | "inverse"
    entries: np.ndarray
    exp10: np.ndarray
    condition: float

    def dense(self) -> np.ndarray:
        if self.exp10.size and np.max(np.abs(self.exp10)) > 280:
            raise OverflowError("scattering matrix exponents exceed the double range")
        return self.entries * 10.0 ** self.exp10.astype(float)


def _phi_scaled(epsilon: float, zeta: complex, profile: ProfileFunction,
                config) -> ScaledComplex:
    """Phi(zeta) = Int G(zeta, x) psi(x) dx in scaled arithmetic.

    The kernel magnitude varies over the compact support by a bounded factor,
    so one common decimal exponent (probed on a coarse grid) can be factored
    out of the integrand before adaptive quadrature.
    """
    lo, hi = profile.support
    probe = np.linspace(lo, hi, 9)
    _, e_probe = airy.g_kernel_vec(epsilon, zeta, probe)
    e_star = int(np.max(e_probe))

    def integrand(xs):
        m, e = airy.g_kernel_vec(epsilon, zeta, np.asarray(xs, dtype=float))
        return m * 10.0 ** np.clip(e - e_star, -320, 10).astype(float) * eval_profile(profile, xs)

    value, _ = integrate_1d(integrand, (lo, hi), config)
    return ScaledComplex.from_mantissa_exp(value, e_star)


def trace_matrix(epsilon: float, zeta: complex, which: str,
                 spec: PerturbationSpec,
                 config: QuadratureConfig | None = None) -> TraceMatrix:
    """Continued trace matrix T(zeta; A) (which='A') or T(zeta; B) ('B')."""
    if which not in ("A", "B"):
        raise ValueError("which must be 'A' or 'B'")
    zeta = complex(zeta)
    n = spec.rank
    weights = spec.couplings if which == "B" else (1.0,) * n
    if epsilon == 0:
        k = principal_sqrt(zeta)
        pref = 1.0 / (_SQRT2 * quarter_root(zeta))
        entries = np.zeros((2, n), dtype=complex)
        for j, prof in enumerate(spec.profiles):
            entries[0, j] = weights[j] * pref * fourier_hat(prof, k)
            entries[1, j] = weights[j] * pref * fourier_hat(prof, -k)
        return TraceMatrix(0.0, zeta, which, entries, np.zeros((2, n), dtype=np.int64))
    entries = np.zeros((1, n), dtype=complex)
    exp10 = np.zeros((1, n), dtype=np.int64)
    for j, prof in enumerate(spec.profiles):
        phi = _phi_scaled(epsilon, zeta, prof, config) * weights[j]
        entries[0, j] = phi.mantissa
        exp10[0, j] = phi.exp10
    return TraceMatrix(epsilon, zeta, which, entries, exp10)


def adjoint_trace_matrix(epsilon: float, zeta: complex, which: str,
                         spec: PerturbationSpec,
                         config: QuadratureConfig | None = None) -> TraceMatrix:
    """The continuation of T(conj zeta; which)^*, shape (N, dim).

    For the real profiles enforced by the model this is the column/row swap
    of trace_matrix: at eps = 0 row k is w_k (psihat_k(-sqrt z), psihat_k(sqrt z))
    / (sqrt2 z^{1/4}); at eps > 0 it is the column of w_k Phi_k(zeta).
    """
    t = trace_matrix(epsilon, zeta, which, spec, config)
    if epsilon == 0:
        entries = t.entries[::-1, :].T.copy()
        exp10 = t.exp10[::-1, :].T.copy()
    else:
        entries = t.entries.T.copy()
        exp10 = t.exp10.T.copy()
    return TraceMatrix(epsilon, complex(zeta), t.which, entries, exp10)


def _scaled_bilinear(left: TraceMatrix, core: np.ndarray, right: TraceMatrix):
    """(mantissa, exp10) of left_dense @ core @ right_dense, done scaled.

    left is (dim, N) with exponents, core is plain (N, N), right is (N, dim)
    with exponents.  Each output entry is a sum of scaled terms referred to
    the largest exponent among its contributions.
    """
    dim_l = left.entries.shape[0]
    dim_r = right.entries.shape[1]
    n = core.shape[0]
    out_m = np.zeros((dim_l, dim_r), dtype=complex)
    out_e = np.zeros((dim_l, dim_r), dtype=np.int64)
    for a in range(dim_l):
        for b in range(dim_r):
            exps = np.array([
                left.exp10[a, j] + right.exp10[k, b]
                for j in range(n) for k in range(n)
            ], dtype=np.int64)
            if exps.size == 0:
                continue
            e_star = int(exps.max())
            total = 0j
            idx = 0
            for j in range(n):
                for k in range(n):
                    scale = 10.0 ** float(max(exps[idx] - e_star, -320))
                    total += left.entries[a, j] * core[j, k] * right.entries[k, b] * scale
                    idx += 1
            sc = ScaledComplex(total, e_star)
            out_m[a, b] = sc.mantissa
            out_e[a, b] = sc.exp10
    return out_m, out_e


def _assemble_s(epsilon: float, zeta: complex, spec: PerturbationSpec,
                config, kind: str) -> SMatrixInv:
    zeta = complex(zeta)
    side = "minus" if kind == "inverse" else "plus"
    sign = 2j * math.pi if kind == "inverse" else -2j * math.pi
    dim = 2 if epsilon == 0 else 1
    if spec.rank == 0:
        return SMatrixInv(epsilon, zeta, kind, np.eye(dim, dtype=complex),
                          np.zeros((dim, dim), dtype=np.int64), 1.0)
    gt = g_tilde(epsilon, zeta, side, spec, config)
    inv, cond = inverse_with_condition(gt.entries)
    t_a = trace_matrix(epsilon, zeta, "A", spec, config)
    t_b_star = adjoint_trace_matrix(epsilon, zeta, "B", spec, config)
    m, e = _scaled_bilinear(t_a, inv, t_b_star)
    out_m = np.zeros((dim, dim), dtype=complex)
    out_e = np.zeros((dim, dim), dtype=np.int64)
    for a in range(dim):
        for b in range(dim):
            term = ScaledComplex(sign * m[a, b], int(e[a, b]))
            if a == b:
                term = term + ScaledComplex(1.0)
            out_m[a, b] = term.mantissa
            out_e[a, b] = term.exp10
    return SMatrixInv(epsilon, zeta, kind, out_m, out_e, cond)


def s_inverse(epsilon: float, zeta: complex, spec: PerturbationSpec,
              config: QuadratureConfig | None = None) -> SMatrixInv:
    """S(zeta)^{-1} = 1 + 2 pi i T(zeta;A) G_minus^{-1} T(conj zeta;B)^*."""
    return _assemble_s(epsilon, zeta, spec, config, "inverse")


def s_matrix(epsilon: float, zeta: complex, spec: PerturbationSpec,
             config: QuadratureConfig | None = None) -> SMatrixInv:
    """S(zeta) = 1 - 2 pi i T(zeta;A) G_plus^{-1} T(conj zeta;B)^*."""
    return _assemble_s(epsilon, zeta, spec, config, "direct")


def det_gtilde_plus(epsilon: float, zeta: complex, spec: PerturbationSpec,
                    config: QuadratureConfig | None = None) -> complex:
    """The resonance indicator D(zeta) = det(1 + Q_plus(zeta))."""
    return g_tilde(epsilon, zeta, "plus", spec, config).det()


def det_gtilde_minus(epsilon: float, zeta: complex, spec: PerturbationSpec,
                     config: QuadratureConfig | None = None) -> complex:
    return g_tilde(epsilon, zeta, "minus", spec, config).det()


def resonance_indicator(spec: PerturbationSpec, epsilon: float,
                        config: QuadratureConfig | None = None):
    """Analytic function handle zeta -> det G_plus(zeta) for the root finder."""

    def indicator(zeta: complex) -> complex:
        return det_gtilde_plus(epsilon, zeta, spec, config)

    return indicator


def rank_one_sinv_components(zeta: complex, coupling: float,
                             profile: ProfileFunction,
                             config: QuadratureConfig | None = None) -> np.ndarray:
    """The four continued components of S(zeta)^{-1} for a rank-one V.

    Built from psihat(+-sqrt zeta), the scalar G_minus(zeta) = (1+Q_minus)^{-1}
    and pi i c / sqrt(zeta); profiles are real so the conjugate transform
    equals the transform itself.
    """
    zeta = require_lower_sector(complex(zeta))
    k = principal_sqrt(zeta)
    spec1 = PerturbationSpec((coupling,), (profile,))
    q = q_matrix(0.0, zeta, "minus", spec1, config).entries[0, 0]
    g_minus = 1.0 / (1.0 + q)
    hp = fourier_hat(profile, k)
    hm = fourier_hat(profile, -k)
    pref = 1j * math.pi * coupling / k * g_minus
    return np.array([
        [1.0 + pref * hp * hm, pref * hp * hp],
        [pref * hm * hm, 1.0 + pref * hm * hp],
    ])


def scaled_sinv_diagnostic(epsilon: float, zeta: complex,
                           spec: PerturbationSpec,
                           config: QuadratureConfig | None = None):
    """exp(4 rho^{3/2} / (3 eps)) * (S^{-1} - 1), collapsed to plain values.

    Along a resonance family this balanced product stays bounded and, in the
    rank-one case, converges to (pi c / sqrt zeta) G_minus^0(zeta)
    psihat(sqrt zeta)^2 as eps decreases to zero.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    zeta = require_lower_sector(complex(zeta))
    if spec.rank == 0:
        return 0j
    factor = 4.0 * rho_three_halves(zeta) / (3.0 * epsilon)
    sinv = s_inverse(epsilon, zeta, spec, config)
    out = np.zeros_like(sinv.entries)
    for a in range(out.shape[0]):
        for b in range(out.shape[1]):
            term = ScaledComplex(sinv.entries[a, b], int(sinv.exp10[a, b]))
            if a == b:
                term = term - ScaledComplex(1.0)
            out[a, b] = term.times_exp(factor).to_complex()
    return complex(out[0, 0]) if out.shape == (1, 1) else out


def rank_one_diagnostic_limit(zeta: complex, coupling: float,
                              profile: ProfileFunction,
                              config: QuadratureConfig | None = None) -> complex:
    """eps -> 0 limit of the scaled diagnostic, from the eps = 0 formulas."""
    zeta = require_lower_sector(complex(zeta))
    k = principal_sqrt(zeta)
    spec1 = PerturbationSpec((coupling,), (profile,))
    q = q_matrix(0.0, zeta, "minus", spec1, config).entries[0, 0]
    g_minus = 1.0 / (1.0 + q)
    return math.pi * coupling / k * g_minus * fourier_hat(profile, k) ** 2
