"""Angular coupling for one-center products of spherical harmonics.

The product of two harmonics on the same center expands as::

    S_lm S*_l'm' = sum_{L,M} sqrt((2L+1)/4pi) C^{L|M|}(lm, l'm') A^M_{mm'} S_LM

With complex harmonics (Condon-Shortley phase) C is the usual
c^L(lm, l'm') = sqrt(4pi/(2L+1)) int Y*_lm Y_l'm' Y_{L,m-m'} dOmega and
A^M_{mm'} is the Kronecker delta on M = m - m'.  With real harmonics
S_lm = Theta_l|m|(theta) Phi_m(phi) the theta integral goes into C and the
exact phi integral into A.  Both conventions give C^{0,0}(lm, lm) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from .errors import DomainError

COMPLEX = "complex"
REAL = "real"
_CONVENTIONS = (COMPLEX, REAL)


@dataclass(frozen=True)
class AngularKey:
    l1: int
    m1: int
    l1p: int
    m1p: int
    l2: int
    m2: int
    l2p: int
    m2p: int

    def __post_init__(self):
        for l, m in ((self.l1, self.m1), (self.l1p, self.m1p),
                     (self.l2, self.m2), (self.l2p, self.m2p)):
            _check_lm(l, m)


def _check_lm(l: int, m: int):
    if int(l) != l or int(m) != m:
        raise DomainError(f"l and m must be integers, got ({l!r}, {m!r})")
    if l < 0 or abs(m) > l:
        raise DomainError(f"need l >= 0 and |m| <= l, got ({l}, {m})")


def _check_convention(convention: str):
    if convention not in _CONVENTIONS:
        raise DomainError(f"convention must be 'complex' or 'real', got {convention!r}")


def _lfact(k: int) -> float:
    return math.lgamma(k + 1.0)


@lru_cache(maxsize=65536)
def wigner_3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3j symbol for integer arguments (Racah formula, log factorials)."""
    if m1 + m2 + m3 != 0:
        return 0.0
    if not abs(j1 - j2) <= j3 <= j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if m1 == m2 == m3 == 0 and (j1 + j2 + j3) % 2:
        return 0.0
    log_tri = 0.5 * (_lfact(j1 + j2 - j3) + _lfact(j1 - j2 + j3) + _lfact(-j1 + j2 + j3)
                     - _lfact(j1 + j2 + j3 + 1))
    log_m = 0.5 * (_lfact(j1 + m1) + _lfact(j1 - m1) + _lfact(j2 + m2) + _lfact(j2 - m2)
                   + _lfact(j3 + m3) + _lfact(j3 - m3))
    kmin = max(0, j2 - j3 - m1, j1 - j3 + m2)
    kmax = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    terms = []
    for k in range(kmin, kmax + 1):
        lg = (_lfact(k) + _lfact(j1 + j2 - j3 - k) + _lfact(j1 - m1 - k) + _lfact(j2 + m2 - k)
              + _lfact(j3 - j2 + m1 + k) + _lfact(j3 - j1 - m2 + k))
        terms.append((-1.0) ** k * math.exp(log_tri + log_m - lg))
    return (-1.0) ** (j1 - j2 - m3) * math.fsum(terms)


def _theta_integral(l: int, a: int, lp: int, b: int, L: int, c: int) -> float:
    """int Theta_l|a| Theta_lp|b| Theta_L|c| sin(theta) dtheta, a + b + c = 0.

    Theta_lm is the Condon-Shortley theta factor normalized to one; the value
    follows from the complex triple integral by peeling off the phi part.
    """
    val = math.sqrt((2 * l + 1) * (2 * lp + 1) * (2 * L + 1) / 2.0)
    val *= wigner_3j(l, lp, L, 0, 0, 0) * wigner_3j(l, lp, L, a, b, c)
    for x in (a, b, c):
        if x < 0 and x % 2:
            val = -val
    return val


@lru_cache(maxsize=65536)
def _gaunt_cached(L: int, Mabs: int, l: int, m: int, lp: int, mp: int,
                  convention: str) -> float:
    if (l + lp + L) % 2 or not abs(l - lp) <= L <= l + lp or Mabs > L:
        return 0.0
    if convention == COMPLEX:
        if Mabs != abs(m - mp):
            return 0.0
        g = wigner_3j(l, L, lp, 0, 0, 0) * wigner_3j(l, L, lp, -m, m - mp, mp)
        return (-1.0) ** (m % 2) * math.sqrt((2 * l + 1) * (2 * lp + 1)) * g
    am, amp = abs(m), abs(mp)
    if Mabs == am + amp:
        t = _theta_integral(l, am, lp, amp, L, -Mabs)
    elif Mabs == abs(am - amp):
        t = _theta_integral(l, am, lp, -amp, L, amp - am)
    else:
        return 0.0
    return math.sqrt(2.0 / (2 * L + 1)) * t


def gaunt_C(L: int, Mabs: int, l: int, m: int, lp: int, mp: int,
            convention: str = COMPLEX) -> float:
    """Gaunt coefficient C^{L|M|}(lm, l'm').

    Exactly zero when the triangle or parity rule fails, and (complex
    convention) when Mabs differs from |m - m'|.
    """
    _check_convention(convention)
    _check_lm(l, m)
    _check_lm(lp, mp)
    if L < 0 or Mabs < 0:
        return 0.0
    return _gaunt_cached(int(L), int(Mabs), int(l), int(m), int(lp), int(mp), convention)


def _phi_terms(m: int):
    """Phi_m * sqrt(2 pi) as a list of (coefficient, frequency)."""
    if m == 0:
        return [(1.0, 0)]
    if m > 0:
        return [(1.0 / math.sqrt(2.0), m), (1.0 / math.sqrt(2.0), -m)]
    k = -m
    return [(-1j / math.sqrt(2.0), k), (1j / math.sqrt(2.0), -k)]


@lru_cache(maxsize=16384)
def _real_a(M: int, m: int, mp: int) -> float:
    # sqrt(2 pi) int Phi_m Phi_m' Phi_M dphi, expanded in exponentials
    total = 0j
    for c1, k1 in _phi_terms(m):
        for c2, k2 in _phi_terms(mp):
            for c3, k3 in _phi_terms(M):
                if k1 + k2 + k3 == 0:
                    total += c1 * c2 * c3
    val = total.real
    return 0.0 if abs(val) < 1e-15 else val


def a_coeff(M: int, m: int, mp: int, convention: str = COMPLEX) -> float:
    """A^M_{mm'}: the azimuthal selection factor."""
    _check_convention(convention)
    if convention == COMPLEX:
        return 1.0 if M == m - mp else 0.0
    return _real_a(int(M), int(m), int(mp))


def channel_weight(key: AngularKey, L: int, M: int, convention: str = COMPLEX) -> float:
    """C C A A for one (L, M) term of the two-electron sum."""
    w = a_coeff(M, key.m1, key.m1p, convention) * a_coeff(M, key.m2, key.m2p, convention)
    if w == 0.0:
        return 0.0
    w *= gaunt_C(L, abs(M), key.l1, key.m1, key.l1p, key.m1p, convention)
    if w == 0.0:
        return 0.0
    return w * gaunt_C(L, abs(M), key.l2, key.m2, key.l2p, key.m2p, convention)


def lm_channels(key: AngularKey, convention: str = COMPLEX) -> List[Tuple[int, int]]:
    """(L, M) pairs carrying a nonzero angular weight, ascending."""
    _check_convention(convention)
    lo = max(abs(key.l1 - key.l1p), abs(key.l2 - key.l2p))
    hi = min(key.l1 + key.l1p, key.l2 + key.l2p)
    out = []
    for L in range(lo, hi + 1):
        if (key.l1 + key.l1p + L) % 2 or (key.l2 + key.l2p + L) % 2:
            continue
        for M in range(-L, L + 1):
            if abs(channel_weight(key, L, M, convention)) > 1e-14:
                out.append((L, M))
    return out

