"""Laplace expansion of r12^mu and the Breit radial integrals.

The Legendre coefficient of r12^mu is Sack's kernel::

    R^L_mu(r1, r2) = (-mu/2)_L / (1/2)_L  r>^mu (r</r>)^L  2F1(a, b; L + 3/2; (r</r>)^2)

with (a, b) = (-1/2 - mu/2, L - mu/2) for odd mu and the two swapped for
even mu.  For odd mu >= -1 the series terminates and the radial integral is
a finite sum of generalized Coulomb integrals.  mu = -2 has a logarithmic
diagonal singularity and is integrated numerically.  For mu <= -3 the
kernel behaves like 1/|r1 - r2| on the diagonal and no radial integral
exists on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from .errors import DivergenceError, DomainError
from .numerics import DEFAULT, LogScaled, PrecisionConfig, hyp2f1_general, log_sum, pochhammer
from .oracle import DEFAULT_QUAD, QuadSpec, quad_kernel, quad_shifted_step
from .radial import RadialParams, radial_direct_series, radial_generalized


@dataclass(frozen=True)
class PowerParams:
    mu: int
    base: RadialParams
    L: int

    def __post_init__(self):
        if int(self.mu) != self.mu or self.mu == 0 or self.mu > 1:
            raise DomainError(f"mu must be a nonzero integer <= 1, got {self.mu!r}")
        if int(self.L) != self.L or self.L < 0:
            raise DomainError(f"L must be a non-negative integer, got {self.L!r}")


def _ab(mu: int, L: int) -> Tuple[float, float]:
    if mu % 2:
        return -0.5 - 0.5 * mu, L - 0.5 * mu
    return L - 0.5 * mu, -0.5 - 0.5 * mu


def _prefactor(mu: int, L: int) -> float:
    return float(pochhammer(-0.5 * mu, L) / pochhammer(0.5, L))


def _legendre_q(L: int, y: float, ym1: float) -> float:
    """Q_L(y) for y > 1 via P_L(y) Q_0(y) - W_{L-1}(y); ym1 = y - 1 given exactly."""
    q0 = 0.5 * math.log1p(2.0 / ym1)
    p = [1.0, y]
    for k in range(1, L):
        p.append(((2 * k + 1) * y * p[k] - k * p[k - 1]) / (k + 1))
    w = math.fsum(p[k - 1] * p[L - k] / k for k in range(1, L + 1))
    return p[L] * q0 - w


def _shape(mu: int, L: int):
    """K(x) with R^L_mu = r>^mu K(r</r>) for x in [0, 1)."""
    a, b = _ab(mu, L)
    pref = _prefactor(mu, L)
    c = L + 1.5

    def K(x: float) -> float:
        if mu == -2 and x > 0.5:
            # log singularity at x = 1: the Q_L form is accurate there
            ym1 = (1.0 - x) ** 2 / (2.0 * x)
            return (2 * L + 1) * _legendre_q(L, 1.0 + ym1, ym1) / (2.0 * x)
        return pref * x ** L * float(hyp2f1_general(a, b, c, x * x))
    return K


def sack_kernel(mu: int, L: int, r1: float, r2: float) -> float:
    """Legendre coefficient L of r12^mu, as a function of r1 and r2.

    Any integer mu is accepted; the radial integrals only use mu <= 1.
    """
    if int(mu) != mu or int(L) != L or L < 0:
        raise DomainError("mu and L must be integers with L >= 0")
    if not (r1 > 0.0 and r2 > 0.0):
        raise DomainError("r1 and r2 must be > 0")
    mu, L = int(mu), int(L)
    rl, rg = min(r1, r2), max(r1, r2)
    if mu % 2 == 0 and mu >= 0 and L > mu // 2:
        return 0.0
    if rl == rg and (mu <= -2):
        raise DivergenceError(f"kernel for mu={mu} is singular at r1 = r2")
    return rg ** mu * _shape(mu, L)(rl / rg)


def _terminating_terms(mu: int, L: int):
    """(coefficient, k) with kernel = sum coef r<^(L+2k) r>^(mu-L-2k)."""
    a, b = _ab(mu, L)
    pref = _prefactor(mu, L)
    if not (a <= 0 and a == int(a)):
        return None
    out = []
    t = pref
    for k in range(int(-a) + 1):
        out.append((t, k))
        t *= (a + k) * (b + k) / ((L + 1.5 + k) * (k + 1))
    return out


def sack_radial(pp: PowerParams, cfg: PrecisionConfig = DEFAULT,
                q: QuadSpec = DEFAULT_QUAD) -> LogScaled:
    """int int r1^n e^{-zeta r1} R^L_mu(r1, r2) r2^n' e^{-zeta' r2} dr1 dr2."""
    mu, L, p = pp.mu, pp.L, pp.base
    if mu == -1:
        return radial_direct_series(p, L, cfg)
    terms = _terminating_terms(mu, L)
    if terms is not None:
        parts = [radial_generalized(p, L + 2 * k, L + 2 * k - mu, False, cfg) * c
                 for c, k in terms if c != 0.0]
        return log_sum(parts)
    if mu <= -3:
        raise DivergenceError(f"the radial integral of the mu={mu} kernel diverges on r1 = r2")
    # mu = -2: non-terminating, logarithmic on the diagonal
    return quad_kernel([(1.0, p.n)], p.zeta, [(1.0, p.nprime)], p.zetaprime,
                       float(mu), _shape(mu, L), "full", q).value


# ---------------------------------------------------------------------------
# mu ladder

def mu_ladder_coefficients(mu: int, L: int) -> Tuple[float, float, float]:
    """(A, B, C) of A R_{mu+2} + B (r1^2 + r2^2) R_mu = C (r1^2 - r2^2)^2 R_{mu-2}."""
    return (4.0 + 2 * L + mu) * (2 * L - 2.0 - mu), 2.0 * (mu + 2) ** 2, float(mu * (mu + 2))


def kernel_relation_residual(mu: int, L: int, r1: float, r2: float) -> float:
    """Pointwise check of the three-term kernel relation, scaled by its largest term."""
    A, B, C = mu_ladder_coefficients(mu, L)
    t1 = A * sack_kernel(mu + 2, L, r1, r2)
    t2 = B * (r1 * r1 + r2 * r2) * sack_kernel(mu, L, r1, r2)
    t3 = C * (r1 * r1 - r2 * r2) ** 2 * sack_kernel(mu - 2, L, r1, r2)
    scale = max(abs(t1), abs(t2), abs(t3))
    return 0.0 if scale == 0.0 else (t1 + t2 - t3) / scale


def mu_ladder_residual(mu: int, L: int, upper: float, mid: Sequence[float],
                       lower: Union[float, Sequence[float]]) -> float:
    """Integrated kernel relation, normalized by the largest term.

    upper  -- {mu+2}R(n, n')
    mid    -- ({mu}R(n+2, n'), {mu}R(n, n'+2))
    lower  -- ({mu-2}R(n+4, n'), {mu-2}R(n+2, n'+2), {mu-2}R(n, n'+4)), or a
              single number: the integral of (r1^2 - r2^2)^2 R_{mu-2} taken
              as one kernel, which is the only finite form when mu - 2 <= -3.
    """
    A, B, C = mu_ladder_coefficients(mu, L)
    if isinstance(lower, (int, float)):
        low_terms = [C * float(lower)]
    else:
        l4, l22, l04 = lower
        low_terms = [C * l4, -2.0 * C * l22, C * l04]
    lhs_terms = [A * upper, B * mid[0], B * mid[1]]
    terms = lhs_terms + [-t for t in low_terms]
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return math.fsum(terms) / scale


def mu_chain_terms(p: RadialParams, L: int, mu: int = -1,
                   q: QuadSpec = DEFAULT_QUAD) -> Tuple[float, Tuple[float, float], float]:
    """All terms of the mu = -1 relation from the quadrature oracle.

    Shifts are applied to the combined powers n, n' (r1^2 multiplies r1^n).
    The mu - 2 = -3 side is integrated as the single finite kernel
    (r1^2 - r2^2)^2 R_{-3} = (2L+1) r<^L (r>^2 - r<^2) / r>^(L+1).
    """
    if mu != -1:
        raise DomainError("only the mu = -1 chain has an integrable lower rung")
    K1 = _shape(1, L)
    up = quad_kernel([(1.0, p.n)], p.zeta, [(1.0, p.nprime)], p.zetaprime, 1.0, K1, "full", q)
    coul = lambda x: x ** L
    m1 = quad_kernel([(1.0, p.n + 2)], p.zeta, [(1.0, p.nprime)], p.zetaprime,
                     -1.0, coul, "full", q)
    m2 = quad_kernel([(1.0, p.n)], p.zeta, [(1.0, p.nprime + 2)], p.zetaprime,
                     -1.0, coul, "full", q)
    low_shape = lambda x: (2 * L + 1) * x ** L * (1.0 - x * x)
    low = quad_kernel([(1.0, p.n)], p.zeta, [(1.0, p.nprime)], p.zetaprime,
                      1.0, low_shape, "full", q)
    return float(up), (float(m1), float(m2)), float(low)


# ---------------------------------------------------------------------------
# Breit radial integrals

def breit_N(n: float, nprime: float, zeta: float, zetaprime: float, L: int,
            literal_step: bool = False, cfg: PrecisionConfig = DEFAULT,
            q: QuadSpec = DEFAULT_QUAD) -> LogScaled:
    """int int r1^n e^{-zeta r1} r<^L / r>^(L+3) step(r1 - r2) r2^n' e^{-zeta' r2}.

    The step is 1 for r1 > r2.  ``literal_step`` switches to a step at
    r1 - r2 > 1 instead; that variant has no closed form here and is
    integrated numerically.
    """
    p = RadialParams(n, nprime, zeta, zetaprime)
    if literal_step:
        return quad_shifted_step(p, L, L + 3.0, 1.0, q).value
    return radial_generalized(p, L, L + 3.0, True, cfg)


def breit_V(n1: float, n1p: float, zeta1: float, zeta1p: float,
            n2_combined: float, zeta2_combined: float, L: int,
            cfg: PrecisionConfig = DEFAULT) -> float:
    """int int r1^n1 e^{-zeta1 r1} d/dr1[r1^n1' e^{-zeta1' r1}] r<^L/r>^(L+3) rho2(r2).

    The derivative splits into n1' r1^(n1+n1'-1) - zeta1' r1^(n1+n1'),
    each a full-range generalized Coulomb integral.
    """
    zs = zeta1 + zeta1p
    out = []
    if n1p != 0.0:
        p = RadialParams(n1 + n1p - 1.0, n2_combined, zs, zeta2_combined)
        out.append(radial_generalized(p, L, L + 3.0, False, cfg) * n1p)
    if zeta1p != 0.0:
        p = RadialParams(n1 + n1p, n2_combined, zs, zeta2_combined)
        out.append(-radial_generalized(p, L, L + 3.0, False, cfg) * zeta1p)
    return float(log_sum(out))


def breit_V_quadrature(n1: float, n1p: float, zeta1: float, zeta1p: float,
                       n2_combined: float, zeta2_combined: float, L: int,
                       q: QuadSpec = DEFAULT_QUAD) -> float:
    """Direct quadrature of the V integral with the derivative expanded pointwise."""
    dens1 = [(n1p, n1 + n1p - 1.0), (-zeta1p, n1 + n1p)]
    dens1 = [(c, pw) for c, pw in dens1 if c != 0.0]
    return float(quad_kernel(dens1, zeta1 + zeta1p, [(1.0, n2_combined)], zeta2_combined,
                             -3.0, lambda x: x ** L, "full", q).value)

