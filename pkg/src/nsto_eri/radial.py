"""One-center radial repulsion integrals R^L over non-integer Slater functions.

R^L_{n,n'}(zeta, zeta') = int int r1^n e^{-zeta r1} (r<^L / r>^{L+1})
                                   r2^n' e^{-zeta' r2} dr1 dr2

Notation used throughout::

    z  = zeta  / (zeta + zeta')        z' = 1 - z
    P  = Gamma(n+n'+1) / (zeta+zeta')^(n+n'+1)
    F1 = 2F1(1, n+n'+1; n+L+2; z)      F2 = 2F1(1, n+n'+1; n'+L+2; z')

so that R^L = P [F1/(n+L+1) + F2/(n'+L+1)].  F1 is the "frak R" quantity
laddered in L for the parameters as given; F2 is the same quantity for the
swapped parameters (n, zeta) <-> (n', zeta').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import DivergenceError, DomainError, InstabilityError, PoleError
from .numerics import (
    DEFAULT,
    LogScaled,
    PrecisionConfig,
    beta_cf,
    gamma_signed,
    hyp2f1_general,
    hyp2f1_unit_a,
    log_beta,
    log_scaled_beta,
    log_sum,
    near_integer,
    pochhammer,
)

# Largest error amplification tolerated before a ladder step is replaced by
# a direct evaluation.  With double rounding this keeps ladder values within
# roughly 1e-12 of the series.
KAPPA_MAX = 1e3
# The unwrap helpers carry ~3e-14 relative error from the log-gamma terms.
# The two-channel sum has condition ~1, so the unwrap is only taken while it
# amplifies that error by at most a few units.
UNWRAP_KAPPA_MAX = 4.0
# Past this amplification the unwrap has no correct digit left and the
# helpers stop being carried.
RETIRE_KAPPA = 2.0 ** 53
# Error budget of a laddered frak R value before the recursion is restarted.
ERR_MAX = 1e-12
_EPS = 2.0 ** -53
_SERIES_ERR = 8 * _EPS


@dataclass(frozen=True)
class RadialParams:
    n: float
    nprime: float
    zeta: float
    zetaprime: float

    def __post_init__(self):
        for name in ("n", "nprime", "zeta", "zetaprime"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"RadialParams.{name} must be finite and > 0, got {v!r}")

    @property
    def z(self) -> float:
        return self.zeta / (self.zeta + self.zetaprime)

    @property
    def zp(self) -> float:
        return self.zetaprime / (self.zeta + self.zetaprime)

    def swapped(self) -> "RadialParams":
        return RadialParams(self.nprime, self.n, self.zetaprime, self.zeta)

    def prefactor(self) -> LogScaled:
        s = self.n + self.nprime + 1.0
        return LogScaled.from_log(1, math.lgamma(s) - s * math.log(self.zeta + self.zetaprime))


@dataclass(frozen=True)
class HelperSet:
    e: LogScaled
    f1: LogScaled
    f2: LogScaled
    g: LogScaled
    h1: LogScaled
    h2: Optional[LogScaled]
    l1: LogScaled
    l2: Optional[LogScaled]
    m: LogScaled


def _check_pole(p: RadialParams, L: int, cfg: PrecisionConfig):
    # With the csc folded into 1f by reflection, integer n' > L is harmless;
    # the pole proper is n' - L a non-positive integer (Gamma(n'-L+1), 1/(L-n')).
    d = p.nprime - L
    if d < 0.5 and near_integer(d, cfg.integer_detect_eps):
        raise PoleError(f"n' - L = {d!r} is a non-positive integer; csc pole")


def f1_value(p: RadialParams, L: int) -> float:
    """1f^L = pi csc((L-n')pi) (n+L+1) / (Gamma(L-n'+1) Gamma(n'-L+1)).

    The reflection formula collapses it to (n+L+1)/(L-n').
    """
    return (p.n + L + 1.0) / (L - p.nprime)


def _g_value(p: RadialParams, L: int, cfg: PrecisionConfig) -> LogScaled:
    n, np_ = p.n, p.nprime
    a, b = n + L + 1.0, np_ - L + 1.0
    if b > 0.0:
        # Gamma(a) Gamma(b) / Gamma(n+n'+1) = (n+n'+1) B(a, b)
        gam = LogScaled.from_log(1, log_beta(a, b) + math.log(n + np_ + 1.0))
    else:
        gam = (gamma_signed(b, cfg) * LogScaled.from_log(1, math.lgamma(a) - math.lgamma(n + np_ + 1.0)))
    zpow = LogScaled.from_log(1, -a * math.log(p.z) + (L - np_) * math.log(p.zp))
    return LogScaled(f1_value(p, L)) * gam * zpow


def _h1_x(p: RadialParams, L: int, f1: float) -> LogScaled:
    # 1h = x + 1
    m = 2 * L + 1
    ratio = pochhammer(p.n - L, m) / pochhammer(-p.nprime - L - 1.0, m)
    pw = -LogScaled.power(p.zetaprime / p.zeta, m)
    return ratio * pw * ((p.nprime + L + 1.0) / (p.n + L + 1.0) * f1)


def _h1_value(p: RadialParams, L: int, f1: float) -> LogScaled:
    return _h1_x(p, L, f1) + 1.0


def l1_direct(p: RadialParams, L: int, cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """1l^L by its (2L+1)-term finite sum."""
    _check_pole(p, L, cfg)
    m = 2 * L + 1
    t = -p.zeta / p.zetaprime
    n, np_ = p.n, p.nprime
    # T_k = (n-L+k)_{m-k} / (-n'-L-1+k)_{m-k} t^(k-1), built from k = m down
    term = LogScaled.power(-t, m - 1)  # m - 1 = 2L is even
    terms = [term]
    for k in range(m - 1, 0, -1):
        term = term * ((n - L + k) / ((-np_ - L - 1.0 + k) * t))
        terms.append(term)
    return _f2_value(p, L) * log_sum(terms)


def _f2_value(p: RadialParams, L: int) -> LogScaled:
    m = 2 * L + 1
    return (-LogScaled.power(p.zetaprime / p.zeta, m)) * (f1_value(p, L) * (p.zeta + p.zetaprime) / p.zetaprime)


def _h2_l2(p: RadialParams, L: int) -> Tuple[Optional[LogScaled], Optional[LogScaled]]:
    m = 2 * L + 1
    n, np_ = p.n, p.nprime
    den = pochhammer(n - L, m)
    if den.is_zero():
        return None, None
    f1 = f1_value(p, L)
    h2 = LogScaled((np_ + L + 1.0) / (n + L + 1.0) * f1) - (
        pochhammer(-np_ - L - 1.0, m) / den * LogScaled.power(p.zeta / p.zetaprime, m))
    t = -p.zeta / p.zetaprime
    s = LogScaled((-np_ - L - 1.0) / (n - L))
    terms = [s]
    for k in range(1, m):
        s = s * ((-np_ - L - 1.0 + k) / (n - L + k) * t)
        terms.append(s)
    l2 = log_sum(terms) * ((n + L + 1.0) / (np_ + L + 1.0) * (p.zeta + p.zetaprime) / p.zetaprime)
    return h2, l2


def compute_helpers(p: RadialParams, L: int, cfg: PrecisionConfig = DEFAULT) -> HelperSet:
    """All helper functions of the single-2F1 forms at (p, L).

    ``h2`` and ``l2`` are ``None`` when (n-L)_{2L+1} vanishes (integer n <= L),
    where those two helpers are undefined.  ``m`` is composed as
    P/(n+L+1) (g + l1), the combination that makes the partner-channel
    expression reproduce R^L.
    """
    if L < 0:
        raise DomainError("L must be >= 0")
    _check_pole(p, L, cfg)
    P = p.prefactor()
    f1 = f1_value(p, L)
    g = _g_value(p, L, cfg)
    l1 = l1_direct(p, L, cfg)
    h2, l2 = _h2_l2(p, L)
    return HelperSet(
        e=P / (p.nprime + L + 1.0),
        f1=LogScaled(f1),
        f2=_f2_value(p, L),
        g=g,
        h1=_h1_value(p, L, f1),
        h2=h2,
        l1=l1,
        l2=l2,
        m=P / (p.n + L + 1.0) * (g + l1),
    )


# ---------------------------------------------------------------------------
# 1l ladder in n, n' and L

class L1Ladder:
    """Carries 1l^L_{n,n'} across unit steps in n, n' or L.

    With u = -zeta'/zeta, alpha = -n-L, beta = n'-L+1 and M = 2L the sum is
    1l = (n+L+1)/(L-n') (zeta+zeta')/zeta' u W with
    W = sum_{j=0}^{M} (alpha)_j/(beta)_j u^j, and tau = (alpha)_M/(beta)_M u^M
    is the last term.  Each step is an O(1) contiguous relation for W.
    W and tau are kept as float mantissas with separate binary exponents.
    ``cond`` holds the error amplification of the most recent step.
    """

    __slots__ = ("p", "L", "w", "we", "t", "te", "cond", "cfg")

    def __init__(self, p: RadialParams, L: int, cfg: PrecisionConfig = DEFAULT):
        _check_pole(p, L, cfg)
        self.p, self.L, self.cfg = p, L, cfg
        u = -p.zetaprime / p.zeta
        al, be = -p.n - L, p.nprime - L + 1.0
        terms = [LogScaled(1.0)]
        t = LogScaled(1.0)
        for j in range(2 * L):
            t = t * ((al + j) / (be + j) * u)
            terms.append(t)
        self._set(log_sum(terms), t)
        self.cond = 1.0

    def _set(self, w: LogScaled, tau: LogScaled):
        self.w, self.we = w.mant, w.exp
        self.t, self.te = tau.mant, tau.exp

    @classmethod
    def from_value(cls, p: RadialParams, L: int, l1: LogScaled, cfg: PrecisionConfig = DEFAULT):
        """Resume from a known 1l value; tau is rebuilt from Pochhammer ratios."""
        _check_pole(p, L, cfg)
        self = cls.__new__(cls)
        self.p, self.L, self.cfg = p, L, cfg
        self._set(l1 / self._pref(p, L), cls._tau_direct(p, L))
        self.cond = 1.0
        return self

    @staticmethod
    def _tau_direct(p: RadialParams, L: int) -> LogScaled:
        u = -p.zetaprime / p.zeta
        al, be = -p.n - L, p.nprime - L + 1.0
        return pochhammer(al, 2 * L) / pochhammer(be, 2 * L) * LogScaled.power(-u, 2 * L)

    @staticmethod
    def _pref(p: RadialParams, L: int) -> LogScaled:
        u = -p.zetaprime / p.zeta
        return LogScaled((p.n + L + 1.0) / (L - p.nprime) * (p.zeta + p.zetaprime) / p.zetaprime * u)

    @property
    def value(self) -> LogScaled:
        return self._pref(self.p, self.L) * LogScaled(self.w, self.we)

    @property
    def tau(self) -> LogScaled:
        return LogScaled(self.t, self.te)

    def _combine(self, a: float, c: float, b: float, den: float) -> float:
        """(a + c 2^-we + b) / den with the cancellation folded into cond."""
        if self.we < -1000:
            raise InstabilityError("1l sum cancelled below the representable range")
        c = math.ldexp(c, -self.we) if self.we < 1000 else 0.0
        total = a + c + b
        big = max(abs(a), abs(b), abs(c))
        if total == 0.0:
            if big:
                self.cond = math.inf
        else:
            self.cond = max(self.cond, big / abs(total))
        return total / den

    def _tail(self, tau: float) -> float:
        # tau expressed on the exponent of W; tiny tails underflow harmlessly
        d = self.te - self.we
        if d > 1000:
            self.cond = math.inf
            return 0.0
        return math.ldexp(tau, d)

    def _norm(self):
        if self.w != 0.0:
            m, e = math.frexp(self.w)
            self.w, self.we = m, self.we + e
        if self.t != 0.0:
            m, e = math.frexp(self.t)
            self.t, self.te = m, self.te + e

    def step_n(self) -> "L1Ladder":
        """n -> n+1 (alpha -> alpha-1)."""
        p, L = self.p, self.L
        u = -p.zetaprime / p.zeta
        al, be, M = -p.n - L, p.nprime - L + 1.0, 2 * L
        self.cond = 1.0
        tail = self._tail(self.t * (u * (al - 1.0)))
        self.w = self._combine(self.w * ((al - 1.0) * (1.0 - u)), -(be - 1.0), tail, al - be)
        self.p = RadialParams(p.n + 1.0, p.nprime, p.zeta, p.zetaprime)
        self._tau_alpha(al - 1.0, M)
        self._norm()
        return self

    def step_nprime(self) -> "L1Ladder":
        """n' -> n'+1 (beta -> beta+1)."""
        p, L = self.p, self.L
        _check_pole(RadialParams(p.n, p.nprime + 1.0, p.zeta, p.zetaprime), L, self.cfg)
        u = -p.zetaprime / p.zeta
        al, be, M = -p.n - L, p.nprime - L + 1.0, 2 * L
        self.cond = 1.0
        self.t *= be / (be + M)
        tail = self._tail(self.t * (u * (al + M)))
        self.w = self._combine(self.w * (be * (1.0 - u)), -be, tail, u * (al - be))
        self.p = RadialParams(p.n, p.nprime + 1.0, p.zeta, p.zetaprime)
        self._norm()
        return self

    def step_L(self) -> "L1Ladder":
        """L -> L+1: beta -> beta-1, then alpha -> alpha-1, then two new terms.

        Written out inline (it runs once per L inside the ladder); the three
        stages are the same relations as step_nprime and step_n.
        """
        p, L = self.p, self.L
        _check_pole(p, L + 1, self.cfg)
        u = -p.zetaprime / p.zeta
        al, be, M = -p.n - L, p.nprime - L + 1.0, 2 * L
        we = self.we
        if we < -1000:
            raise InstabilityError("1l sum cancelled below the representable range")
        one = math.ldexp(1.0, -we) if we < 1000 else 0.0
        d = self.te - we
        if d > 1000:
            raise InstabilityError("1l tail outgrew its sum")
        t, w = self.t, self.w
        cond = 1.0
        # beta -> beta-1 at fixed alpha, M
        a, c, b = w * (u * (al - be + 1.0)), (be - 1.0) * one, math.ldexp(t * (-u * (al + M)), d)
        s1 = a + c + b
        big = max(abs(a), abs(b), abs(c))
        cond = big / abs(s1) if s1 else math.inf
        w = s1 / ((1.0 - u) * (be - 1.0))
        t *= (be - 1.0 + M) / (be - 1.0)
        be1 = be - 1.0
        # alpha -> alpha-1 at beta-1
        a, c, b = w * ((al - 1.0) * (1.0 - u)), -(be1 - 1.0) * one, math.ldexp(t * (u * (al - 1.0)), d)
        s1 = a + c + b
        big = max(abs(a), abs(b), abs(c))
        cond = max(cond, big / abs(s1) if s1 else math.inf)
        w = s1 / (al - be1)
        self.L = L + 1
        self.t = t
        self._tau_alpha(al - 1.0, M, be1)
        t = self.t
        d = self.te - we
        # two new terms j = M + 1, M + 2
        al2 = al - 1.0
        t1 = t * ((al2 + M) / (be1 + M) * u)
        t2 = t1 * ((al2 + M + 1.0) / (be1 + M + 1.0) * u)
        b = math.ldexp(t1 + t2, d) if d <= 1000 else math.inf
        s1 = w + b
        big = max(abs(w), abs(b))
        cond = max(cond, big / abs(s1) if s1 else math.inf)
        self.cond = cond
        m, e = math.frexp(s1) if math.isfinite(s1) else (0.0, 0)
        if not math.isfinite(s1):
            self.cond = math.inf
        self.w, self.we = m, we + e
        m, e = math.frexp(t2)
        self.t, self.te = m, self.te + e
        return self

    def _tau_alpha(self, al_new: float, M: int, be: Optional[float] = None):
        # tau_M(alpha-1) = tau_M(alpha) (alpha-1)/(alpha-1+M), unless that is 0/0
        den = al_new + M
        if den != 0.0 and self.t != 0.0:
            self.t *= al_new / den
            return
        u = -self.p.zetaprime / self.p.zeta
        if be is None:
            be = self.p.nprime - self.L + 1.0
        tau = pochhammer(al_new, M) / pochhammer(be, M) * LogScaled.power(-u, M)
        self.t, self.te = tau.mant, tau.exp


def l1_step(p: RadialParams, L: int, l1: LogScaled, axis: str,
            cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """1l at (n+1), (n'+1) or (L+1) from its value at (p, L)."""
    lad = L1Ladder.from_value(p, L, l1, cfg)
    if axis == "n":
        lad.step_n()
    elif axis == "nprime":
        lad.step_nprime()
    elif axis == "L":
        lad.step_L()
    else:
        raise DomainError(f"unknown axis {axis!r}")
    return lad.value


# ---------------------------------------------------------------------------
# seeds and the frak-R ladder

def seed_L0(p: RadialParams, cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """frak R^0 = 2F1(1, n+n'+1; n+2; z) from the incomplete beta function.

    frak R^0 = (n+1) z^(-n-1) z'^(-n') B_z(n+1, n').  On the continued
    fraction side of the incomplete beta the prefactors cancel exactly; on
    the other side the complement B(a,b) - B_{z'}(b,a) is used, with the
    scaled complete beta evaluated in a cancellation-free form.
    """
    a, b = p.n + 1.0, p.nprime
    z, zp = p.z, p.zp
    if z < (a + 1.0) / (a + b + 2.0):
        return LogScaled(beta_cf(a, b, z, cfg))
    full = LogScaled.from_log(1, math.log(a) + log_scaled_beta(a, b, z))
    return full - LogScaled(a / b * beta_cf(b, a, zp, cfg))


def _c_step(b: float, c: float, z: float, F: LogScaled) -> Tuple[LogScaled, float]:
    """2F1(1,b;c+1;z) from 2F1(1,b;c;z): one contiguous step, plus its amplification."""
    x = F * (1.0 - z)
    diff = x - 1.0
    if diff.is_zero():
        return diff, math.inf
    cond = float(abs(x) / abs(diff))
    return diff * (c / ((b - c) * z)), cond


def _c_step_down(b: float, c: float, z: float, F: LogScaled) -> Tuple[LogScaled, float]:
    """2F1(1,b;c-1;z) from 2F1(1,b;c;z), the inverse of ``_c_step``."""
    x = F * ((b - c + 1.0) * z / (c - 1.0))
    tot = x + 1.0
    if tot.is_zero():
        return tot, math.inf
    cond = float(abs(x) / abs(tot))
    return tot / (1.0 - z), max(cond, 1.0)


def seed_L1(p: RadialParams, cfg: PrecisionConfig = DEFAULT,
            r0: Optional[LogScaled] = None) -> LogScaled:
    """frak R^1 from frak R^0 by one contiguous step in c (no new series)."""
    if abs(p.nprime - 1.0) <= cfg.integer_detect_eps:
        raise PoleError("n' = 1 makes the L=1 step singular")
    if r0 is None:
        r0 = seed_L0(p, cfg)
    val, _ = _c_step(p.n + p.nprime + 1.0, p.n + 2.0, p.z, r0)
    return val


def frak_series(p: RadialParams, L: int, cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """frak R^L_{n,n'}(zeta, zeta') = 2F1(1, n+n'+1; n+L+2; z) by direct series."""
    return hyp2f1_unit_a(p.n + p.nprime + 1.0, p.n + L + 2.0, p.z, cfg)


class _Sweep:
    """One run of the three-term recursion with a running error estimate.

    Values are scaled floats sharing the exponent ``e``.  P and Q are the
    parts of the solution carried by each member of the seed pair; their
    size relative to the value (kappa) is how much a perturbation of the
    seeds has been amplified.  ``acc`` sums the rounding of every step,
    weighted by that step's own cancellation.
    """

    __slots__ = ("e", "ya", "yb", "pa", "pb", "qa", "qb", "seed_err", "acc")

    def __init__(self, va: LogScaled, vb: LogScaled, err: float):
        self.e = vb.exp
        self.ya = math.ldexp(va.mant, va.exp - self.e)
        self.yb = vb.mant
        self.pa, self.pb, self.qa, self.qb = self.ya, 0.0, 0.0, self.yb
        self.seed_err = err
        self.acc = 0.0

    def advance(self, A: float, B: float, ra: float, rb: float):
        """Next value A*ya + B*yb and its error estimate; None if unusable."""
        ta, tb = A * self.ya, B * self.yb
        y = ta + tb
        if not (y > 0.0 and math.isfinite(y)):
            return None
        pn = A * self.pa + B * self.pb
        qn = A * self.qa + B * self.qb
        kappa = (abs(pn) + abs(qn)) / y
        acc = self.acc + (abs(ta) * ra + abs(tb) * rb) / y
        err = max(kappa, 1.0) * (self.seed_err + _EPS * acc)
        if err > ERR_MAX:
            return None
        self.ya, self.yb = self.yb, y
        self.pa, self.pb, self.qa, self.qb = self.pb, pn, self.qb, qn
        self.acc = acc
        out = LogScaled(y, self.e)
        if abs(y) > 2.0 ** 500 or abs(y) < 2.0 ** -500:
            _, de = math.frexp(y)
            self.ya, self.yb = math.ldexp(self.ya, -de), math.ldexp(self.yb, -de)
            self.pa, self.pb = math.ldexp(self.pa, -de), math.ldexp(self.pb, -de)
            self.qa, self.qb = math.ldexp(self.qa, -de), math.ldexp(self.qb, -de)
            self.e += de
        return out, err


def frak_ladder(p: RadialParams, L_max: int, cfg: PrecisionConfig = DEFAULT
                ) -> Tuple[List[LogScaled], List[str]]:
    """frak R^L for L = 0..L_max by the three-term recursion in L.

    The recursion runs upward from the incomplete-beta seed for as long as
    its error estimate stays below ERR_MAX.  frak R is the minimal solution
    for large L, so the upward run eventually loses digits; the remaining
    range is then filled downward, which is the stable direction, from one
    series value at L_max and one contiguous step.  Should the downward run
    also exceed its budget it restarts from a fresh series value.  The
    second list records how each entry was obtained.
    """
    n, np_, ze, zp = p.n, p.nprime, p.zeta, p.zetaprime
    b = n + np_ + 1.0
    z = p.z
    eps_int = cfg.integer_detect_eps
    vals: List[Optional[LogScaled]] = [None] * (L_max + 1)
    errs = [0.0] * (L_max + 1)
    how = [""] * (L_max + 1)

    def put(L, v, err, tag):
        vals[L], errs[L], how[L] = v, err, tag

    def series(L):
        put(L, frak_series(p, L, cfg), _SERIES_ERR, "series")

    put(0, seed_L0(p, cfg), _SERIES_ERR, "seed")
    if L_max == 0:
        return vals, how
    v1, cond = None, math.inf
    if abs(b - n - 2.0) > eps_int:
        v1, cond = _c_step(b, n + 2.0, z, vals[0])
    if v1 is not None and v1.sign > 0 and cond * 4 * _EPS <= ERR_MAX:
        put(1, v1, cond * 4 * _EPS, "step")
    else:
        series(1)

    # upward: frak R^{L+2} = A frak R^L + B frak R^{L+1}
    sw = _Sweep(vals[0], vals[1], max(errs[0], errs[1]))
    top_done = 1
    for L in range(0, L_max - 1):
        d1 = -np_ + L + 2.0
        if abs(d1) <= eps_int:
            break
        inner = ze * (-np_ + L + 1.0) - zp * (n + L + 2.0)
        A = (n + L + 3.0) * zp / (ze * d1)
        B = (n + L + 3.0) * inner / (ze * (n + L + 2.0) * d1)
        ra = 4.0 + (np_ + L + 2.0) / abs(d1)
        rb = ra + (abs(ze * (-np_ + L + 1.0)) + abs(zp * (n + L + 2.0))) / abs(inner) if inner else ra
        res = sw.advance(A, B, ra, rb)
        if res is None:
            break
        put(L + 2, res[0], res[1], "ladder")
        top_done = L + 2
    if top_done == L_max:
        return vals, how

    # downward: frak R^L = A' frak R^{L+2} + B' frak R^{L+1}
    def seed_pair(top):
        series(top)
        if top - 1 > top_done:
            v, cond = _c_step_down(b, n + top + 2.0, z, vals[top])
            if v.sign > 0 and cond * (errs[top] + 4 * _EPS) <= ERR_MAX:
                put(top - 1, v, cond * (errs[top] + 4 * _EPS), "step")
            else:
                series(top - 1)
        return _Sweep(vals[top], vals[top - 1], max(errs[top], errs[top - 1]))

    sw = seed_pair(L_max)
    L = L_max - 2
    while L > top_done:
        d1 = -np_ + L + 2.0
        inner = ze * (-np_ + L + 1.0) - zp * (n + L + 2.0)
        A = ze * d1 / ((n + L + 3.0) * zp)
        B = -inner / (zp * (n + L + 2.0))
        ra = 4.0 + (np_ + L + 2.0) / abs(d1) if d1 else 4.0
        rb = 4.0 + (abs(ze * (-np_ + L + 1.0)) + abs(zp * (n + L + 2.0))) / abs(inner) if inner else 4.0
        res = sw.advance(A, B, ra, rb)
        if res is None:
            sw = seed_pair(L)
            L -= 2
            continue
        put(L, res[0], res[1], "ladder")
        L -= 1
    return vals, how


@dataclass
class LadderTable:
    L_max: int
    frak_R: List[LogScaled]
    R: List[LogScaled]
    frak_R_partner: List[LogScaled] = field(default_factory=list)
    routes: List[str] = field(default_factory=list)


def _align(am: float, ae: int, bm: float, be: int) -> Tuple[float, float, int]:
    """Mantissas of a 2^ae and b 2^be on their common (larger) exponent."""
    e = max(ae, be)
    return math.ldexp(am, ae - e), math.ldexp(bm, be - e), e


class _Unwrapper:
    """Helpers of p carried from L to L+1, for R^L = e h1 F - m.

    1l follows its ladder; the Gamma-function part of g and the Pochhammer
    ratio inside h1 change by one rational factor per step, so every L
    costs O(1).  Quantities are (mantissa, binary exponent) pairs of plain
    floats; this loop is what the timing comparison measures.
    """

    def __init__(self, p: RadialParams, cfg: PrecisionConfig):
        self.p, self.cfg, self.L = p, cfg, 0
        self.P = p.prefactor()
        self.lad = _make_l1(p, cfg)
        if self.lad is None:
            return
        # g = f1 G and x = X (n'+L+1)/(L-n'), G and X laddered in L
        G = _g_value(p, 0, cfg) / f1_value(p, 0)
        self.gm, self.ge = G.mant, G.exp
        self.xm, self.xe = math.frexp(p.n * p.zetaprime / ((p.nprime + 1.0) * p.zeta))
        self.r2 = (p.zetaprime / p.zeta) ** 2
        self.zr = p.zp / p.z

    def advance(self):
        p, L = self.p, self.L
        n, np_ = p.n, p.nprime
        self.L = L + 1
        if self.lad is None:
            return
        try:
            self.lad = _advance_l1(self.lad, p, L + 1, self.cfg)
        except PoleError:
            # integer n' reached: no helpers from here on
            self.lad = None
            return
        gm, de = math.frexp(self.gm * ((n + L + 1.0) / (np_ - L) * self.zr))
        self.gm, self.ge = gm, self.ge + de
        xm, de = math.frexp(self.xm * ((n - L - 1.0) * (n + L + 1.0)
                                       / ((-np_ - L - 2.0) * (L - np_)) * self.r2))
        self.xm, self.xe = xm, self.xe + de

    def at(self, F_partner: LogScaled) -> Tuple[Optional[LogScaled], float]:
        """(R^L, amplification) at the current L; (None, inf) if unavailable."""
        lad = self.lad
        if lad is None:
            return None, math.inf
        p, L = self.p, self.L
        n, np_ = p.n, p.nprime
        # h1 = x + 1; its rounding error is eps max(|x|, 1), kept as hs
        xm = self.xm * ((np_ + L + 1.0) / (L - np_))
        if self.xe > 1000:
            hm, he, hs = xm, self.xe, abs(xm)
        else:
            x = math.ldexp(xm, self.xe)
            hm, he, hs = x + 1.0, 0, max(abs(x), 1.0)
        # g + 1l
        u = -p.zetaprime / p.zeta
        pref = (n + L + 1.0) / (L - np_) * (p.zeta + p.zetaprime) / p.zetaprime * u
        ga, la, e = _align(self.gm * ((n + L + 1.0) / (L - np_)), self.ge, pref * lad.w, lad.we)
        gl = ga + la
        if gl == 0.0:
            return None, math.inf
        cond_gl = max(abs(ga), abs(la)) / abs(gl) * max(1.0, lad.cond)
        fe = F_partner.mant / (np_ + L + 1.0)
        fa, sa, E = _align(hm * fe, he + F_partner.exp, gl / (n + L + 1.0), e)
        v = fa - sa
        if not v > 0.0:
            return None, math.inf
        fs = math.ldexp(hs * abs(fe), he + F_partner.exp - E)
        kappa = (fs + abs(sa) * cond_gl) / v
        return self.P * LogScaled(v, E), kappa


def _two_channel(P: LogScaled, F1: LogScaled, F2: LogScaled, c1: float, c2: float) -> LogScaled:
    """P (F1/c1 + F2/c2); every term positive, so no cancellation."""
    a, b, e = _align(F1.mant / c1, F1.exp, F2.mant / c2, F2.exp)
    return P * LogScaled(a + b, e)


def _make_l1(p: RadialParams, cfg: PrecisionConfig) -> Optional[L1Ladder]:
    try:
        return L1Ladder(p, 0, cfg)
    except PoleError:
        return None


def _advance_l1(lad: L1Ladder, p: RadialParams, L: int, cfg: PrecisionConfig) -> L1Ladder:
    try:
        lad.step_L()
        if lad.cond <= KAPPA_MAX:
            return lad
    except InstabilityError:
        pass
    return L1Ladder(p, L, cfg)


def _canonical(p: RadialParams) -> bool:
    return (p.n, p.zeta) <= (p.nprime, p.zetaprime)


def ladder(p: RadialParams, L_max: int, cfg: PrecisionConfig = DEFAULT) -> LadderTable:
    """R^L for L = 0..L_max without a hypergeometric series per L.

    Both channels are laddered in L.  R^L is unwrapped through the partner
    channel with helpers carried in L; the orientation is fixed by ordering
    (n, zeta) against (n', zeta') so that swapping the arguments gives
    bit-identical results.  When the unwrap would lose more than a couple
    of digits (or hits the csc pole) the two channels are combined as in the
    two-series formula, which involves no cancellation.  For large n the
    unwrap cancels more with every L; once it has no digit left the
    helpers are dropped for the rest of the table.
    """
    if L_max < 0:
        raise DomainError("L_max must be >= 0")
    if not _canonical(p):
        t = ladder(p.swapped(), L_max, cfg)
        return LadderTable(L_max, t.frak_R_partner, t.R, t.frak_R, t.routes)
    q = p.swapped()
    F1, how1 = frak_ladder(p, L_max, cfg)
    F2, how2 = frak_ladder(q, L_max, cfg)
    unw = _Unwrapper(p, cfg)
    P = unw.P
    R: List[LogScaled] = []
    routes: List[str] = []
    for L in range(L_max + 1):
        if L > 0 and unw is not None:
            unw.advance()
        val, kappa = unw.at(F2[L]) if unw is not None else (None, math.inf)
        if kappa > RETIRE_KAPPA:
            # every digit is gone; the cancellation only deepens with L
            unw = None
        tag = "unwrap"
        if val is None or kappa > UNWRAP_KAPPA_MAX:
            val = _two_channel(P, F1[L], F2[L], p.n + L + 1.0, p.nprime + L + 1.0)
            tag = "two-channel"
        if val.sign <= 0:
            val = radial_direct_series(p, L, cfg)
            tag = "series-fallback"
        R.append(val)
        routes.append(f"{tag}|{how1[L]}|{how2[L]}")
    return LadderTable(L_max=L_max, frak_R=F1, R=R, frak_R_partner=F2, routes=routes)


# ---------------------------------------------------------------------------
# direct evaluations

def radial_direct_series(p: RadialParams, L: int, cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """R^L = P [F1/(n+L+1) + F2/(n'+L+1)], both 2F1 by series."""
    if L < 0:
        raise DomainError("L must be >= 0")
    b = p.n + p.nprime + 1.0
    F1 = hyp2f1_unit_a(b, p.n + L + 2.0, p.z, cfg)
    F2 = hyp2f1_unit_a(b, p.nprime + L + 2.0, p.zp, cfg)
    return p.prefactor() * (F1 / (p.n + L + 1.0) + F2 / (p.nprime + L + 1.0))


def radial_closed_form(p: RadialParams, L: int, variant: int,
                       cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """R^L from one of the four single-2F1 expressions.

    25/27 use the helpers of p, 26/28 those of the swapped parameters.
    These forms subtract two terms and can cancel badly for large n or L;
    ``ladder`` chooses between them by conditioning, this function does not.
    """
    if variant in (26, 28):
        return radial_closed_form(p.swapped(), L, variant - 1, cfg)
    if variant not in (25, 27):
        raise DomainError(f"variant must be one of 25..28, got {variant!r}")
    h = compute_helpers(p, L, cfg)
    P = p.prefactor()
    b = p.n + p.nprime + 1.0
    if variant == 25:
        F = hyp2f1_unit_a(b, p.nprime + L + 2.0, p.zp, cfg)
        return h.e * h.h1 * F - h.m
    if h.h2 is None:
        raise PoleError("(n-L)_{2L+1} vanishes; variant 27 undefined")
    F = hyp2f1_general(1.0, b, p.nprime - L + 1.0, p.zp, cfg)
    return P * h.h2 * F / (p.nprime + L + 1.0) - P * (h.g - h.l2) / (p.n + L + 1.0)


def radial_generalized(p: RadialParams, L: int, sigma: float, half_range: bool = False,
                       cfg: PrecisionConfig = DEFAULT) -> LogScaled:
    """int int r1^n e^{-zeta r1} r<^L / r>^sigma r2^n' e^{-zeta' r2}.

    With s = n+n'+L-sigma+2 the region r1 > r2 gives
    Gamma(s)/(zeta+zeta')^s 2F1(1, s; n'+L+2; z')/(n'+L+1) and the region
    r1 < r2 the mirror term.  ``half_range`` keeps only r1 > r2.
    """
    n, np_ = p.n, p.nprime
    s = n + np_ + L - sigma + 2.0
    if not np_ + L + 1.0 > 0.0:
        raise DivergenceError("n' + L + 1 must be > 0")
    if not half_range and not n + L + 1.0 > 0.0:
        raise DivergenceError("n + L + 1 must be > 0")
    if not s > 0.0:
        raise DivergenceError(f"n + n' + L - sigma + 2 = {s!r} must be > 0")
    pref = LogScaled.from_log(1, math.lgamma(s) - s * math.log(p.zeta + p.zetaprime))
    out = hyp2f1_unit_a(s, np_ + L + 2.0, p.zp, cfg) / (np_ + L + 1.0)
    if not half_range:
        out = out + hyp2f1_unit_a(s, n + L + 2.0, p.z, cfg) / (n + L + 1.0)
    return pref * out
