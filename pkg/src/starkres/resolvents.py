"""Free resolvent kernels, their continuations, and the matrices Q and G.

For eps = 0 the kernel is i e^{i k |x-y|} / (2k) with k = +sqrt(zeta) on the
"plus" determination (continued from the upper half-plane) and k = -sqrt(zeta)
on "minus".  For eps > 0 it is the Airy Green kernel
pi eps^{-1/3} Ai(w(x_>)) (Bi +- i Ai)(w(x_<)),  w(t) = eps^{1/3} t - eps^{-2/3} zeta,
which is entire in zeta; the factors are combined in scaled arithmetic since
they individually leave the double range deep in the tunneling regime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import airy
from .branches import BranchCutError, principal_sqrt
from .model import PerturbationSpec, ProfileFunction, eval_profile
from .quadrature import QuadratureConfig, integrate_1d, integrate_2d_kink

__all__ = [
    "GTilde",
    "QMatrix",
    "SingularMatrixError",
    "free_kernel",
    "full_resolvent_matrix_element",
    "g_tilde",
    "inverse_with_condition",
    "q_matrix",
    "resolvent_kernel",
    "stark_kernel",
]

_SIDES = ("plus", "minus")

# condition number above which G-tilde inversion is reported as singular
# (expected exactly at resonances)
COND_LIMIT = 1e13


class SingularMatrixError(RuntimeError):
    """G-tilde is numerically singular; carries the condition estimate."""

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


def _check_side(side: str) -> str:
    if side not in _SIDES:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    return side


def free_kernel(zeta: complex, side: str, x, y):
    """Continued free kernel at eps = 0; vectorized over x or y arrays."""
    _check_side(side)
    k = principal_sqrt(zeta)
    if side == "minus":
        k = -k
    r = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    out = 0.5j * np.exp(1j * k * r) / k
    return out if getattr(out, "ndim", 0) else complex(out)


def stark_kernel(epsilon: float, zeta: complex, side: str, x, y):
    """Continued Stark kernel at eps > 0; entire in zeta.

    pi eps^{-1/3} Ai(w(max)) (Bi + iAi)(w(min)) on the plus side, Bi - iAi on
    minus.  Factors are evaluated scaled and only their balanced product is
    collapsed, so deep-tunneling values do not overflow.
    """
    _check_side(side)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    hi = np.maximum(x, y).ravel()
    lo = np.minimum(x, y).ravel()
    c = epsilon ** (1.0 / 3.0)
    shift = epsilon ** (-2.0 / 3.0) * complex(zeta)
    m1, e1 = airy.ai_scaled_vec(c * hi - shift)
    m2, e2 = airy.ci_scaled_vec(c * lo - shift, side)
    scale = np.asarray(e1 + e2, dtype=float)
    out = ((np.pi / c) * m1 * m2 * 10.0 ** scale).reshape(shape)
    return complex(out.ravel()[0]) if scalar else out


def resolvent_kernel(epsilon: float, zeta: complex, side: str):
    """Kernel closure K(x, y_nodes) for the quadrature routines."""
    _check_side(side)
    if epsilon == 0:
        def k0(x, ys):
            return free_kernel(zeta, side, x, ys)
        return k0

    def keps(x, ys):
        return stark_kernel(epsilon, zeta, side, x, ys)
    return keps


@dataclass(frozen=True)
class QMatrix:
    """Q(zeta)_{kl} = c_k <psi_k, R0(zeta) psi_l>, analytically continued."""

    epsilon: float
    zeta: complex
    side: str
    entries: np.ndarray


@dataclass(frozen=True)
class GTilde:
    """G(zeta) = 1 + Q(zeta); resonances are the zeros of det on side plus."""

    epsilon: float
    zeta: complex
    side: str
    entries: np.ndarray

    @property
    def q_entries(self) -> np.ndarray:
        return self.entries - np.eye(self.entries.shape[0])

    def det(self) -> complex:
        if self.entries.shape[0] == 0:
            return 1.0 + 0j
        return complex(np.linalg.det(self.entries))


def _pair_integral(epsilon, zeta, side, pf: ProfileFunction, pg: ProfileFunction,
                   config) -> complex:
    kernel = resolvent_kernel(epsilon, zeta, side)

    def integrand(x, ys):
        return eval_profile(pf, x) * kernel(x, ys) * eval_profile(pg, ys)

    # the Green kernel has a derivative kink across x = y for every epsilon
    value, _ = integrate_2d_kink(
        integrand, pf.support, pg.support, config, kink=True
    )
    return value


def q_matrix(epsilon: float, zeta: complex, side: str, spec: PerturbationSpec,
             config: QuadratureConfig | None = None) -> QMatrix:
    """Assemble the N x N continued matrix Q(zeta) by adaptive quadrature.

    The kernel is symmetric in (x, y), so the double integral is computed
    once per unordered profile pair and reused with the row coupling.
    """
    _check_side(side)
    if epsilon == 0 and complex(zeta).imag == 0 and complex(zeta).real <= 0:
        raise BranchCutError("zeta <= 0 is rejected for the eps = 0 kernel")
    n = spec.rank
    entries = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(k, n):
            pair = _pair_integral(
                epsilon, zeta, side, spec.profiles[k], spec.profiles[l], config
            )
            entries[k, l] = spec.couplings[k] * pair
            if l != k:
                entries[l, k] = spec.couplings[l] * pair
    return QMatrix(epsilon, complex(zeta), side, entries)


def g_tilde(epsilon: float, zeta: complex, side: str, spec: PerturbationSpec,
            config: QuadratureConfig | None = None) -> GTilde:
    q = q_matrix(epsilon, zeta, side, spec, config)
    return GTilde(epsilon, q.zeta, side, np.eye(spec.rank) + q.entries)


def inverse_with_condition(matrix: np.ndarray):
    """Inverse and 1-norm condition estimate of a small dense matrix.

    Raises SingularMatrixError above COND_LIMIT; a resonance sitting exactly
    at the evaluation point is the expected trigger.
    """
    n = matrix.shape[0]
    if n == 0:
        return matrix.copy(), 1.0
    try:
        inv = np.linalg.inv(matrix)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"G-tilde not invertible: {exc}", np.inf) from exc
    cond = float(
        np.linalg.norm(matrix, 1) * np.linalg.norm(inv, 1)
    )
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(
            f"G-tilde numerically singular (condition ~ {cond:.2e}); "
            "the evaluation point is a resonance candidate",
            cond,
        )
    return inv, cond


def full_resolvent_matrix_element(epsilon: float, zeta: complex, side: str,
                                  f: ProfileFunction, g: ProfileFunction,
                                  spec: PerturbationSpec,
                                  config: QuadratureConfig | None = None) -> complex:
    """Continued <f, R(zeta) g> via the second resolvent equation.

    <f, R g> = <f, R0 g> - sum_{k,l} <f, R0 psi_k> (G^{-1})_{kl} c_l <psi_l, R0 g>.
    """
    free = _pair_integral(epsilon, zeta, side, f, g, config)
    if spec.rank == 0:
        return free
    gt = g_tilde(epsilon, zeta, side, spec, config)
    inv, _ = inverse_with_condition(gt.entries)
    a = np.array([
        _pair_integral(epsilon, zeta, side, f, pk, config) for pk in spec.profiles
    ])
    b = np.array([
        spec.couplings[l] * _pair_integral(epsilon, zeta, side, pl, g, config)
        for l, pl in enumerate(spec.profiles)
    ])
    return complex(free - a @ inv @ b)
