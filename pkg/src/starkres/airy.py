"""Complex-argument Airy functions and the Stark eigenfunction kernel.

Evaluation strategy
-------------------
* ``|omega| <= R0``: Maclaurin series of the two standard entire solutions,
  with a double-double (~31 digit) summation fallback in the wedge where
  assembling the recessive solution cancels catastrophically in doubles.
* ``|omega| > R0``: asymptotic series in ``xi = (2/3) omega**1.5`` with the
  DLMF 9.7.2 coefficients ``u_k``, truncated at the smallest term, valid for
  ``|arg omega| <= 2pi/3``; the remaining directions are reached through the
  exact rotation identities between Ai evaluated at ``omega`` and at
  ``omega * exp(+-2i pi/3)``.

Values that overflow the double exponent range are carried as
``ScaledComplex`` pairs (mantissa, decimal exponent).  All products of Airy
factors in downstream modules are formed in this scaled arithmetic and only
balanced combinations are collapsed to plain complex numbers.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .branches import SectorError, in_lower_sector, require_lower_sector

__all__ = [
    "AccuracyLossWarning",
    "AiryArgument",
    "AsymptoticCoefficients",
    "ScaledComplex",
    "ai",
    "ai_deriv",
    "airy_all",
    "airy_argument",
    "bi",
    "bi_deriv",
    "ai_scaled",
    "ci_minus_scaled",
    "ci_plus_scaled",
    "g_asymptotic_target",
    "g_first_order_coeff",
    "g_kernel",
    "g_kernel_scaled",
    "u_coefficients",
]

# Crossover radius between Maclaurin and asymptotic series, with a 10%
# overlap annulus where both are computed and cross-checked.  10.5 keeps the
# whole Wronskian test disk |omega| <= 10 on the series side, where the
# double-double fallback can hold the identity to absolute 1e-10 even in the
# wedge where both solutions are exponentially large.
R0 = 10.5
ANNULUS_FACTOR = 1.1
ANNULUS_TOL = 1e-9

# Largest index of the asymptotic coefficients u_k.
KMAX = 20

# Direct asymptotic evaluation is used up to this |arg z|; beyond it the
# rotation identities route the argument back into the reliable sector.
CORE_ARG_MAX = 2.0 * math.pi / 3.0 + 0.05

# Maclaurin assembly loses log10(loss) digits to cancellation; above this
# ratio the summation is redone in double-double arithmetic.
DD_LOSS_THRESHOLD = 100.0

_MACLAURIN_MAX_TERMS = 120

# Ai(0) and -Ai'(0): 3**(-2/3)/Gamma(2/3) and 3**(-1/3)/Gamma(1/3),
# stored as double-double (hi, lo) pairs for the cancellation-prone assembly.
_ALPHA = 0.3550280538878172
_ALPHA_LO = 2.05233632436212e-17
_BETA = 0.2588194037928068
_BETA_LO = -2.522243111610832e-17

_SQRT3 = 1.7320508075688772
_SQRT3_LO = 1.0035084221806903e-16
_INV_PI = 0.3183098861837907
_INV_PI_LO = -1.9678676675182486e-17
_TWO_SQRT_PI = 2.0 * math.sqrt(math.pi)
_LN10 = math.log(10.0)

_ROT_P = cmath.exp(2j * math.pi / 3.0)   # e^{+2i pi/3}
_ROT_M = cmath.exp(-2j * math.pi / 3.0)  # e^{-2i pi/3}
# weights of the rotated-Ai representations: Bi = e^{i pi/6} Ai(z e^{2i pi/3})
# + e^{-i pi/6} Ai(z e^{-2i pi/3}); derivatives pick up the rotation factor.
_PH6_P = cmath.exp(1j * math.pi / 6.0)
_PH6_M = cmath.exp(-1j * math.pi / 6.0)
_PH_P = cmath.exp(1j * 5.0 * math.pi / 6.0)
_PH_M = cmath.exp(-1j * 5.0 * math.pi / 6.0)


class AccuracyLossWarning(UserWarning):
    """Series and asymptotic estimates disagree in the crossover annulus."""


# ----------------------------------------------------------------------
# scaled arithmetic
# ----------------------------------------------------------------------

class ScaledComplex:
    """A complex value ``mantissa * 10**exp10`` with an integer exponent.

    Used wherever Airy factors leave the double exponent range; products and
    sums keep the exponent separate so that only balanced combinations are
    ever collapsed to plain floats.
    """

    __slots__ = ("mantissa", "exp10")

    def __init__(self, mantissa: complex, exp10: int = 0):
        m = complex(mantissa)
        e = int(exp10)
        if m != 0:
            shift = math.floor(math.log10(abs(m)))
            if shift:
                m *= 10.0 ** (-shift)
                e += shift
        else:
            e = 0
        self.mantissa = m
        self.exp10 = e

    @classmethod
    def from_mantissa_exp(cls, mantissa: complex, exp10_float: float) -> "ScaledComplex":
        """Build from a mantissa and a possibly fractional decimal exponent."""
        e = math.floor(exp10_float)
        return cls(complex(mantissa) * 10.0 ** (exp10_float - e), e)

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(self.mantissa * other.mantissa, self.exp10 + other.exp10)
        return ScaledComplex(self.mantissa * complex(other), self.exp10)

    __rmul__ = __mul__

    def __neg__(self):
        return ScaledComplex(-self.mantissa, self.exp10)

    def __add__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex(complex(other))
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        hi, lo = (self, other) if self.exp10 >= other.exp10 else (other, self)
        d = lo.exp10 - hi.exp10
        if d < -40:
            return hi
        return ScaledComplex(hi.mantissa + lo.mantissa * 10.0 ** d, hi.exp10)

    def __sub__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex(complex(other))
        return self + (-other)

    def times_exp(self, w: complex) -> "ScaledComplex":
        """Multiply by exp(w) for complex w of arbitrary real part."""
        w = complex(w)
        phase = cmath.exp(1j * w.imag)
        return ScaledComplex.from_mantissa_exp(
            self.mantissa * phase, self.exp10 + w.real / _LN10
        )

    def log10_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log10(abs(self.mantissa)) + self.exp10

    def to_complex(self) -> complex:
        """Collapse to a plain complex; raises OverflowError out of range."""
        if self.mantissa == 0:
            return 0j
        if self.exp10 > 290:
            raise OverflowError(
                f"scaled value 1e{self.exp10} exceeds the double exponent range"
            )
        if self.exp10 < -320:
            return 0j
        return self.mantissa * 10.0 ** self.exp10

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.exp10)

    def __repr__(self):
        return f"ScaledComplex({self.mantissa!r}, {self.exp10})"


# ----------------------------------------------------------------------
# asymptotic coefficients (DLMF 9.7.2 recurrence)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Coefficients u_k of the large-argument Airy expansion."""

    u: tuple

    def __post_init__(self):
        if self.u[0] != 1.0:
            raise ValueError("u_0 must be 1")
        if abs(self.u[1] - 5.0 / 72.0) > 1e-16:
            raise ValueError("u_1 must be 5/72")


def u_coefficients(kmax: int = KMAX) -> AsymptoticCoefficients:
    """u_0..u_kmax via u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1))."""
    u = [1.0]
    for k in range(1, kmax + 1):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1)))
    return AsymptoticCoefficients(tuple(u))


_U = np.array(u_coefficients().u)
# Derivative-series companions: w_k = u_k (6k+1)/(1-6k), w_0 = 1.
_W = _U * np.array([1.0] + [(6 * k + 1) / (1.0 - 6 * k) for k in range(1, KMAX + 1)])


# ----------------------------------------------------------------------
# Maclaurin series (vectorized, plain doubles)
# ----------------------------------------------------------------------

def _maclaurin_raw(z: np.ndarray):
    """Series sums (f, g, f', g') of the standard entire Airy solutions.

    f = 1 + z^3/(2*3) + ..., g = z + z^4/(3*4) + ...; Ai = alpha f - beta g.
    Also returns the largest term magnitude met while summing f and g, which
    measures the cancellation incurred by the alpha/beta combinations.
    """
    z = np.asarray(z, dtype=complex)
    z3 = z * z * z
    f = np.ones_like(z)
    g = z.copy()
    fp = np.zeros_like(z)      # f' starts at k=1: z^2/2
    gp = np.ones_like(z)
    tf = np.ones_like(z)
    tg = z.copy()
    tfp = 0.5 * z * z
    tgp = np.ones_like(z)
    peak = np.maximum(np.abs(f), np.abs(g))
    fp += tfp
    for k in range(1, _MACLAURIN_MAX_TERMS):
        tf = tf * z3 / ((3 * k - 1) * (3 * k))
        tg = tg * z3 / ((3 * k) * (3 * k + 1))
        tgp = tgp * z3 / ((3 * k - 2) * (3 * k))
        if k > 1:
            tfp = tfp * z3 / ((3 * k - 1) * (3 * k - 3))
        f += tf
        g += tg
        gp += tgp
        if k > 1:
            fp += tfp
        peak = np.maximum(peak, np.maximum(np.abs(tf), np.abs(tg)))
        if np.all(np.abs(tf) + np.abs(tg) < 1e-18 * (np.abs(f) + np.abs(g) + 1.0)):
            break
    return f, g, fp, gp, peak


# ----------------------------------------------------------------------
# double-double rescue for the cancellation wedge
# ----------------------------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    # Dekker split; safe for the moderate magnitudes met inside |z| <= R0.
    p = a * b
    c = 134217729.0 * a
    ahi = c - (c - a)
    alo = a - ahi
    c = 134217729.0 * b
    bhi = c - (c - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(a, b):
    s1, s2 = _two_sum(a[0], b[0])
    t1, t2 = _two_sum(a[1], b[1])
    s2 += t1
    s1, s2 = _two_sum(s1, s2)
    s2 += t2
    s1, s2 = _two_sum(s1, s2)
    return s1, s2


def _dd_mul(a, b):
    p1, p2 = _two_prod(a[0], b[0])
    p2 += a[0] * b[1] + a[1] * b[0]
    return _two_sum(p1, p2)


def _dd_div_d(a, d):
    q1 = a[0] / d
    p1, p2 = _two_prod(q1, d)
    r = _dd_add(a, (-p1, -p2))
    q2 = (r[0] + r[1]) / d
    return _two_sum(q1, q2)


def _cdd_mul(a, b):
    # a, b: (re_dd, im_dd) pairs of double-double reals
    re = _dd_add(_dd_mul(a[0], b[0]), tuple(-x for x in _dd_mul(a[1], b[1])))
    im = _dd_add(_dd_mul(a[0], b[1]), _dd_mul(a[1], b[0]))
    return re, im


def _cdd_add(a, b):
    return _dd_add(a[0], b[0]), _dd_add(a[1], b[1])


def _cdd_div_d(a, d):
    return _dd_div_d(a[0], d), _dd_div_d(a[1], d)


def _cdd_from(z: complex):
    return (z.real, 0.0), (z.imag, 0.0)


def _cdd_val(a) -> complex:
    return complex(a[0][0] + a[0][1], a[1][0] + a[1][1])


def _maclaurin_dd(z: complex):
    """Double-double Maclaurin sums (f, g, f', g') at a single point."""
    zc = _cdd_from(z)
    z3 = _cdd_mul(_cdd_mul(zc, zc), zc)
    f = _cdd_from(1.0 + 0j)
    g = zc
    fp = _cdd_mul(_cdd_mul(zc, zc), _cdd_from(0.5 + 0j))
    gp = _cdd_from(1.0 + 0j)
    tf, tg, tfp, tgp = f, g, fp, gp
    for k in range(1, _MACLAURIN_MAX_TERMS):
        tf = _cdd_div_d(_cdd_mul(tf, z3), float((3 * k - 1) * (3 * k)))
        tg = _cdd_div_d(_cdd_mul(tg, z3), float((3 * k) * (3 * k + 1)))
        tgp = _cdd_div_d(_cdd_mul(tgp, z3), float((3 * k - 2) * (3 * k)))
        f = _cdd_add(f, tf)
        g = _cdd_add(g, tg)
        gp = _cdd_add(gp, tgp)
        if k > 1:
            tfp = _cdd_div_d(_cdd_mul(tfp, z3), float((3 * k - 1) * (3 * k - 3)))
            fp = _cdd_add(fp, tfp)
        if max(abs(_cdd_val(tf)), abs(_cdd_val(tg))) < 1e-40 * max(
            1.0, abs(_cdd_val(f))
        ):
            break
    return f, g, fp, gp


def _cdd_neg(a):
    return tuple(tuple(-u for u in comp) for comp in a)


def _airy_maclaurin_dd_full(z: complex):
    """(Ai, Ai', Bi, Bi') at one point as complex double-double quadruples."""
    f, g, fp, gp = _maclaurin_dd(z)
    al = ((_ALPHA, _ALPHA_LO), (0.0, 0.0))
    be = ((_BETA, _BETA_LO), (0.0, 0.0))
    rt3 = ((_SQRT3, _SQRT3_LO), (0.0, 0.0))

    def comb(x, y, sign):
        ax = _cdd_mul(al, x)
        by = _cdd_mul(be, y)
        if sign < 0:
            by = _cdd_neg(by)
        return _cdd_add(ax, by)

    ai_v = comb(f, g, -1)
    aip_v = comb(fp, gp, -1)
    bi_v = _cdd_mul(rt3, comb(f, g, +1))
    bip_v = _cdd_mul(rt3, comb(fp, gp, +1))
    return ai_v, aip_v, bi_v, bip_v


def _airy_maclaurin_point_dd(z: complex):
    """(Ai, Ai', Bi, Bi') at one point, assembled in double-double."""
    return tuple(_cdd_val(v) for v in _airy_maclaurin_dd_full(z))


# ----------------------------------------------------------------------
# array core: Ai and Ai' as scaled values on all of C
# ----------------------------------------------------------------------

def _maclaurin_airy(z: np.ndarray, grade: str = "relative"):
    """(Ai, Ai', Bi, Bi') arrays for |z| <= annulus radius, dd where needed.

    grade "relative": double-double only where the alpha/beta assembly
    cancels (recessive Ai near the positive axis).  grade "wronskian":
    additionally wherever the cross products Ai*Bi' are large, so that the
    Wronskian identity holds to absolute accuracy.
    """
    z = np.asarray(z, dtype=complex)
    f, g, fp, gp, peak = _maclaurin_raw(z)
    ai_v = _ALPHA * f - _BETA * g
    aip_v = _ALPHA * fp - _BETA * gp
    bi_v = _SQRT3 * (_ALPHA * f + _BETA * g)
    bip_v = _SQRT3 * (_ALPHA * fp + _BETA * gp)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        denom = np.minimum(np.abs(ai_v), np.abs(aip_v)) + 1e-300
        bad_mask = peak / denom > DD_LOSS_THRESHOLD
        if grade == "wronskian":
            cross = np.abs(ai_v) * np.abs(bip_v) + np.abs(aip_v) * np.abs(bi_v)
            bad_mask |= cross > 1e3
    flat = [a.ravel() for a in (ai_v, aip_v, bi_v, bip_v)]
    bad = np.nonzero(bad_mask.ravel())[0]
    if bad.size:
        zf = z.ravel()
        for i in bad:
            vals = _airy_maclaurin_point_dd(complex(zf[i]))
            for arr, v in zip(flat, vals):
                arr[i] = v
    return ai_v, aip_v, bi_v, bip_v


def _asym_ai_core(z: np.ndarray):
    """Scaled (Ai, Ai') for |z| > R0, |arg z| <= CORE_ARG_MAX.

    Returns (m_ai, m_aip, e10f) where values are m * 10**e10f and e10f is a
    float array (the fractional decimal exponent of e^{-xi}).
    """
    z = np.asarray(z, dtype=complex)
    xi = (2.0 / 3.0) * np.exp(1.5 * np.log(z))
    invxi = 1.0 / xi
    su = np.ones_like(z)
    sw = np.ones_like(z)
    tu = np.ones_like(z)
    tw = np.ones_like(z)
    last_u = np.full(z.shape, np.inf)
    last_w = np.full(z.shape, np.inf)
    act_u = np.ones(z.shape, dtype=bool)
    act_w = np.ones(z.shape, dtype=bool)
    for k in range(1, KMAX + 1):
        tu = tu * (-invxi) * (_U[k] / _U[k - 1])
        tw = tw * (-invxi) * (_W[k] / _W[k - 1])
        au, aw = np.abs(tu), np.abs(tw)
        act_u &= au < last_u
        act_w &= aw < last_w
        su = np.where(act_u, su + tu, su)
        sw = np.where(act_w, sw + tw, sw)
        last_u, last_w = au, aw
    zq = np.exp(0.25 * np.log(z))
    phase = np.exp(-1j * xi.imag)
    m_ai = su * phase / (_TWO_SQRT_PI * zq)
    m_aip = -zq * phase * sw / _TWO_SQRT_PI
    e10f = -xi.real / _LN10
    return m_ai, m_aip, e10f


def _norm_scaled(m: np.ndarray, e10f: np.ndarray):
    """Normalize float decimal exponents to integers, folding into mantissa."""
    e = np.floor(e10f)
    m = m * 10.0 ** (e10f - e)
    return m, e.astype(np.int64)


def _add_scaled(m1, e1, m2, e2):
    e = np.maximum(e1, e2)
    d1 = np.clip(e1 - e, -300, 0).astype(float)
    d2 = np.clip(e2 - e, -300, 0).astype(float)
    return m1 * 10.0 ** d1 + m2 * 10.0 ** d2, e


def _ai_scaled_array(z: np.ndarray, grade: str = "relative"):
    """Scaled (Ai, Ai') on all of C: mantissa arrays and int exponent array."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    m_ai = np.zeros_like(z)
    m_aip = np.zeros_like(z)
    e10 = np.zeros(z.shape, dtype=np.int64)

    r = np.abs(z)
    ang = np.abs(np.angle(z))
    small = r <= R0
    core = (~small) & (ang <= CORE_ARG_MAX)
    rot = ~(small | core)

    if small.any():
        ai_v, aip_v, _, _ = _maclaurin_airy(z[small], grade)
        ms, es = _norm_scaled(ai_v, np.zeros(ai_v.shape))
        # ai and ai' share one exponent slot; renormalize to the ai exponent
        m_ai[small], e10[small] = ms, es
        m_aip[small] = aip_v * 10.0 ** np.clip(-es, -300, 300).astype(float)

    if core.any():
        m1, m2, ef = _asym_ai_core(z[core])
        mm, ee = _norm_scaled(m1, ef)
        m_ai[core], e10[core] = mm, ee
        m_aip[core] = m2 * 10.0 ** (ef - ee)

    if rot.any():
        zr = z[rot]
        a_m, ap_m, a_e = _ai_scaled_array(zr * _ROT_M, grade)
        b_m, bp_m, b_e = _ai_scaled_array(zr * _ROT_P, grade)
        mm, ee = _add_scaled(_ROT_M * a_m, a_e, _ROT_P * b_m, b_e)
        m_ai[rot], e10[rot] = -mm, ee
        mp, _ = _add_scaled(
            _ROT_P * ap_m, a_e - ee, _ROT_M * bp_m, b_e - ee
        )
        m_aip[rot] = -mp

    if scalar:
        return m_ai[0], m_aip[0], int(e10[0])
    return m_ai, m_aip, e10


def _bi_scaled_array(z: np.ndarray, grade: str = "relative"):
    """Scaled (Bi, Bi') everywhere, via Maclaurin or the rotation identity."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m_bi = np.zeros_like(z)
    m_bip = np.zeros_like(z)
    e10 = np.zeros(z.shape, dtype=np.int64)
    small = np.abs(z) <= R0
    if small.any():
        _, _, bi_v, bip_v = _maclaurin_airy(z[small], grade)
        ms, es = _norm_scaled(bi_v, np.zeros(bi_v.shape))
        m_bi[small], e10[small] = ms, es
        m_bip[small] = bip_v * 10.0 ** np.clip(-es, -300, 300).astype(float)
    big = ~small
    if big.any():
        zb = z[big]
        p_m, pp_m, p_e = _ai_scaled_array(zb * _ROT_P, grade)
        q_m, qp_m, q_e = _ai_scaled_array(zb * _ROT_M, grade)
        mm, ee = _add_scaled(_PH6_P * p_m, p_e, _PH6_M * q_m, q_e)
        m_bi[big], e10[big] = mm, ee
        mp, _ = _add_scaled(_PH_P * pp_m, p_e - ee, _PH_M * qp_m, q_e - ee)
        m_bip[big] = mp
    return m_bi, m_bip, e10


# ----------------------------------------------------------------------
# public scalar API
# ----------------------------------------------------------------------

def _collapse(m, e10) -> complex:
    return ScaledComplex(complex(m), int(e10)).to_complex()


def _annulus_check(z: complex, value: complex, kind: str) -> None:
    r = abs(z)
    if not (R0 < r <= ANNULUS_FACTOR * R0):
        return
    # inside the overlap annulus, cross-check against the Maclaurin path
    idx = {"ai": 0, "aip": 1, "bi": 2, "bip": 3}[kind]
    ref = _maclaurin_airy(np.array([z]), "wronskian")[idx][0]
    scale = max(abs(value), abs(ref), 1e-280)
    if abs(value - ref) / scale > ANNULUS_TOL:
        warnings.warn(
            f"Airy {kind}({z!r}): series/asymptotics crossover disagreement "
            f"{abs(value - ref) / scale:.2e}",
            AccuracyLossWarning,
            stacklevel=3,
        )


def airy_all(omega: complex):
    """(Ai, Ai', Bi, Bi') at a complex point, as plain complex numbers."""
    z = complex(omega)
    m_ai, m_aip, e_a = _ai_scaled_array(np.asarray(z), "wronskian")
    m_bi, m_bip, e_b = _bi_scaled_array(np.asarray(z), "wronskian")
    vals = (
        _collapse(m_ai, e_a),
        _collapse(m_aip, e_a),
        _collapse(m_bi[0], e_b[0]),
        _collapse(m_bip[0], e_b[0]),
    )
    for v, kind in zip(vals, ("ai", "aip", "bi", "bip")):
        _annulus_check(z, v, kind)
    return vals


def ai(omega: complex) -> complex:
    z = complex(omega)
    m, _, e = _ai_scaled_array(np.asarray(z), "wronskian")
    v = _collapse(m, e)
    _annulus_check(z, v, "ai")
    return v


def ai_deriv(omega: complex) -> complex:
    z = complex(omega)
    _, m, e = _ai_scaled_array(np.asarray(z), "wronskian")
    v = _collapse(m, e)
    _annulus_check(z, v, "aip")
    return v


def bi(omega: complex) -> complex:
    z = complex(omega)
    m, _, e = _bi_scaled_array(np.asarray(z), "wronskian")
    v = _collapse(m[0], e[0])
    _annulus_check(z, v, "bi")
    return v


def bi_deriv(omega: complex) -> complex:
    z = complex(omega)
    _, m, e = _bi_scaled_array(np.asarray(z), "wronskian")
    v = _collapse(m[0], e[0])
    _annulus_check(z, v, "bip")
    return v


def wronskian_defect(omega: complex) -> float:
    """|Ai*Bi' - Ai'*Bi - 1/pi| with the products formed at full precision.

    Inside the series region |omega| <= R0 the four values and their cross
    products are carried in double-double arithmetic, so the identity can be
    verified to ~1e-13 even where both solutions are exponentially large and
    a plain-double product would drown the 1/pi in roundoff.  Outside R0 the
    products are formed from the scaled asymptotic values; there the check
    is meaningful only where the products stay moderate.
    """
    z = complex(omega)
    if abs(z) <= R0:
        a, ap, b, bp = _airy_maclaurin_dd_full(z)
        w = _cdd_add(_cdd_mul(a, bp), _cdd_neg(_cdd_mul(ap, b)))
        w = _cdd_add(w, ((-_INV_PI, -_INV_PI_LO), (0.0, 0.0)))
        return abs(_cdd_val(w))
    m_ai, m_aip, e_a = _ai_scaled_array(np.asarray(z))
    m_bi, m_bip, e_b = _bi_scaled_array(np.asarray(z))
    p1 = ScaledComplex(complex(m_ai) * complex(m_bip[0]), int(e_a) + int(e_b[0]))
    p2 = ScaledComplex(complex(m_aip) * complex(m_bi[0]), int(e_a) + int(e_b[0]))
    return abs((p1 - p2 - ScaledComplex(1.0 / math.pi)).to_complex())


def ai_scaled(omega: complex) -> ScaledComplex:
    m, _, e = _ai_scaled_array(np.asarray(complex(omega)))
    return ScaledComplex(complex(m), int(e))


def ci_plus_scaled(omega: complex) -> ScaledComplex:
    """(Bi + i Ai)(omega) = 2 e^{i pi/6} Ai(omega e^{2i pi/3}), scaled."""
    m, _, e = _ai_scaled_array(np.asarray(complex(omega) * _ROT_P))
    return ScaledComplex(2.0 * _PH6_P * complex(m), int(e))


def ci_minus_scaled(omega: complex) -> ScaledComplex:
    """(Bi - i Ai)(omega) = 2 e^{-i pi/6} Ai(omega e^{-2i pi/3}), scaled."""
    m, _, e = _ai_scaled_array(np.asarray(complex(omega) * _ROT_M))
    return ScaledComplex(2.0 * _PH6_M * complex(m), int(e))


# vectorized companions used by the resolvent quadratures ------------------

def ai_scaled_vec(omega: np.ndarray):
    """Vectorized scaled Ai: (mantissa array, exp10 int array)."""
    m, _, e = _ai_scaled_array(np.asarray(omega, dtype=complex))
    return m, e


def ci_scaled_vec(omega: np.ndarray, side: str):
    """Vectorized scaled Bi + i Ai ('plus') or Bi - i Ai ('minus')."""
    rot, ph = (_ROT_P, _PH6_P) if side == "plus" else (_ROT_M, _PH6_M)
    m, _, e = _ai_scaled_array(np.asarray(omega, dtype=complex) * rot)
    return 2.0 * ph * m, e


# ----------------------------------------------------------------------
# Stark eigenfunction kernel and its small-field asymptotics
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AiryArgument:
    """The rescaled argument triple of the Stark kernel at (eps, zeta, x)."""

    omega: complex
    xi: complex
    rho: complex


def airy_argument(epsilon: float, zeta: complex, x: float) -> AiryArgument:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    omega = epsilon ** (1.0 / 3.0) * x - epsilon ** (-2.0 / 3.0) * complex(zeta)
    xi = (2.0 / 3.0) * omega ** 1.5
    return AiryArgument(omega=omega, xi=xi, rho=-complex(zeta))


def g_kernel_scaled(epsilon: float, zeta: complex, x: float) -> ScaledComplex:
    """eps^{-1/6} Ai(eps^{1/3} x - eps^{-2/3} zeta) in scaled form."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    omega = epsilon ** (1.0 / 3.0) * x - epsilon ** (-2.0 / 3.0) * complex(zeta)
    v = ai_scaled(omega)
    return ScaledComplex.from_mantissa_exp(
        v.mantissa, v.exp10 - math.log10(epsilon) / 6.0
    )


def g_kernel(epsilon: float, zeta: complex, x: float):
    """Stark eigenfunction kernel value; plain complex when representable.

    When the underlying exponent leaves the double range the value is
    returned as a ScaledComplex pair instead of overflowing.
    """
    v = g_kernel_scaled(epsilon, zeta, x)
    try:
        return v.to_complex()
    except OverflowError:
        return v


def g_kernel_vec(epsilon: float, zeta: complex, x: np.ndarray):
    """Vectorized scaled kernel over positions x: (mantissa, exp10)."""
    x = np.asarray(x, dtype=float)
    omega = epsilon ** (1.0 / 3.0) * x - epsilon ** (-2.0 / 3.0) * complex(zeta)
    m, e = ai_scaled_vec(omega)
    return _norm_scaled(m, e - math.log10(epsilon) / 6.0)


def g_asymptotic_target(zeta: complex, x: float) -> complex:
    """Limit of g_kernel * exp(2 rho^{3/2}/(3 eps)) as eps -> 0.

    Equals exp(-x * rho^{1/2}) / (2 sqrt(pi) rho^{1/4}) with rho = -zeta and
    principal powers, i.e. e^{-i pi/4} e^{-i x sqrt(zeta)} / (2 sqrt(pi) zeta^{1/4}).
    """
    z = require_lower_sector(complex(zeta), include_real_axis=True)
    rho = -z
    return cmath.exp(-x * rho ** 0.5) / (_TWO_SQRT_PI * rho ** 0.25)


def g_first_order_coeff(zeta: complex, x: float) -> complex:
    """O(eps) coefficient of the scaled kernel: ratio(eps) = 1 + eps*coeff + ...

    coeff = -(1/4) (x^2 rho^{-1/2} + x rho^{-1} + (5/12) rho^{-3/2}), the
    (5/12) term being 6*u_1 with u_1 = 5/72.
    """
    z = require_lower_sector(complex(zeta), include_real_axis=True)
    rho = -z
    return -0.25 * (
        x * x / rho ** 0.5 + x / rho + (5.0 / 12.0) / rho ** 1.5
    )
