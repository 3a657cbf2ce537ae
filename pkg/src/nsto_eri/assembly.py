"""Normalized one-center repulsion integrals and relativistic densities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .angular import COMPLEX, AngularKey, channel_weight, lm_channels
from .errors import DomainError, InstabilityError
from .numerics import DEFAULT, LogScaled, PrecisionConfig, log_sum
from .radial import RadialParams, ladder, radial_direct_series

METHODS = ("ladder", "series")


@dataclass(frozen=True)
class Orbital:
    n: float
    l: int
    m: int
    zeta: float

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n > 0.0):
            raise DomainError(f"n must be > 0, got {self.n!r}")
        if not (math.isfinite(self.zeta) and self.zeta > 0.0):
            raise DomainError(f"zeta must be > 0, got {self.zeta!r}")
        if int(self.l) != self.l or int(self.m) != self.m:
            raise DomainError("l and m must be integers")
        if not 0 <= self.l <= math.floor(self.n) - 1:
            raise DomainError(f"need 0 <= l <= floor(n) - 1, got l={self.l} for n={self.n}")
        if abs(self.m) > self.l:
            raise DomainError(f"need |m| <= l, got m={self.m}")


@dataclass(frozen=True)
class RelDensityCoeffs:
    """One radial factor (A r^n + zeta B r^(n+1)) e^{-zeta r}."""
    A: float
    B: float
    n: float
    zeta: float

    def __post_init__(self):
        if self.A == 0.0 and self.B == 0.0:
            raise DomainError("A and B cannot both be zero")
        if not (self.n > 0.0 and self.zeta > 0.0):
            raise DomainError("n and zeta must be > 0")


def normalization(n: float, zeta: float) -> LogScaled:
    """N = (2 zeta)^(n+1/2) / sqrt(Gamma(2n+1))."""
    if not (n > 0.0 and zeta > 0.0):
        raise DomainError("n and zeta must be > 0")
    return LogScaled.from_log(1, (n + 0.5) * math.log(2.0 * zeta) - 0.5 * math.lgamma(2.0 * n + 1.0))


def _radial_values(p: RadialParams, Ls: Sequence[int], method: str,
                   cfg: PrecisionConfig) -> Dict[int, LogScaled]:
    if not Ls:
        return {}
    if method == "series":
        return {L: radial_direct_series(p, L, cfg) for L in Ls}
    if method != "ladder":
        raise DomainError(f"method must be one of {METHODS}, got {method!r}")
    table = ladder(p, max(Ls), cfg)
    return {L: table.R[L] for L in Ls}


def eri(o1: Orbital, o1p: Orbital, o2: Orbital, o2p: Orbital,
        convention: str = COMPLEX, method: str = "ladder",
        cfg: PrecisionConfig = DEFAULT) -> float:
    """J = int chi1* chi1' (1/r12) chi2 chi2'* dV1 dV2 over normalized orbitals."""
    key = AngularKey(o1.l, o1.m, o1p.l, o1p.m, o2.l, o2.m, o2p.l, o2p.m)
    channels = lm_channels(key, convention)
    if not channels:
        return 0.0
    p = RadialParams(o1.n + o1p.n, o2.n + o2p.n, o1.zeta + o1p.zeta, o2.zeta + o2p.zeta)
    R = _radial_values(p, sorted({L for L, _ in channels}), method, cfg)
    norm = (normalization(o1.n, o1.zeta) * normalization(o1p.n, o1p.zeta)
            * normalization(o2.n, o2.zeta) * normalization(o2p.n, o2p.zeta))
    parts = [norm * R[L] * channel_weight(key, L, M, convention) for L, M in channels]
    out = float(log_sum(parts))
    if not math.isfinite(out):
        raise InstabilityError("repulsion integral is not finite")
    return out


def rel_density_terms(c1: RelDensityCoeffs, c2: RelDensityCoeffs) -> List[Tuple[float, float]]:
    """(power, coefficient) pairs of the product density; exponent zeta1 + zeta2 implied."""
    n = c1.n + c2.n
    raw = [
        (n, c1.A * c2.A),
        (n + 1.0, c2.zeta * c1.A * c2.B),
        (n + 1.0, c1.zeta * c1.B * c2.A),
        (n + 2.0, c1.zeta * c2.zeta * c1.B * c2.B),
    ]
    return [(pw, c) for pw, c in raw if c != 0.0]


def rel_coulomb_G(d1: Tuple[RelDensityCoeffs, RelDensityCoeffs],
                  d2: Tuple[RelDensityCoeffs, RelDensityCoeffs], L: int,
                  method: str = "ladder", cfg: PrecisionConfig = DEFAULT) -> float:
    """Sum over the (up to) sixteen density-term pairs of coeff coeff R^L.

    Each distinct pair of powers is evaluated once; the two mixed-power
    terms of a density share a power so at most nine radial integrals are
    needed.
    """
    if int(L) != L or L < 0:
        raise DomainError("L must be a non-negative integer")
    t1 = rel_density_terms(*d1)
    t2 = rel_density_terms(*d2)
    z1 = d1[0].zeta + d1[1].zeta
    z2 = d2[0].zeta + d2[1].zeta
    cache: Dict[Tuple[float, float], LogScaled] = {}
    parts = []
    for pw1, c1 in t1:
        for pw2, c2 in t2:
            k = (pw1, pw2)
            if k not in cache:
                cache[k] = _radial_values(RadialParams(pw1, pw2, z1, z2), [L], method, cfg)[L]
            parts.append(cache[k] * (c1 * c2))
    return float(log_sum(parts))
