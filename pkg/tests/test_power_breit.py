
import mpmath as mp
import pytest

from nsto_eri.errors import DivergenceError, DomainError
from nsto_eri.oracle import QuadSpec, quad_kernel, quad_radial
from nsto_eri.power_breit import (
    PowerParams,
    breit_N,
    breit_V,
    breit_V_quadrature,
    kernel_relation_residual,
    mu_chain_terms,
    mu_ladder_coefficients,
    mu_ladder_residual,
    sack_kernel,
    sack_radial,
)
from nsto_eri.radial import RadialParams, radial_direct_series, radial_generalized

from conftest import rel

CHAIN_SETS = [
    RadialParams(3.5, 2.5, 1.0, 1.5),
    RadialParams(4.0, 4.0, 2.0, 2.0),
    RadialParams(2.3, 5.7, 0.8, 1.9),
    RadialParams(6.25, 3.1, 2.4, 1.1),
    RadialParams(5.5, 4.5, 1.2, 2.1),
]


def legendre_coefficient(mu, L, r1, r2):
    """(2L+1)/2 int_{-1}^{1} r12^mu P_L(t) dt at 30 digits."""
    with mp.workdps(30):
        r1, r2 = mp.mpf(r1), mp.mpf(r2)
        f = lambda t: (r1 * r1 + r2 * r2 - 2 * r1 * r2 * t) ** (mp.mpf(mu) / 2) * mp.legendre(L, t)
        return (2 * L + 1) / mp.mpf(2) * mp.quad(f, [-1, 0, 1])


def test_kernel_coulomb_reduction():
    for L in range(5):
        for r1, r2 in ((0.3, 1.7), (2.0, 0.5), (1.0, 1.0)):
            rl, rg = min(r1, r2), max(r1, r2)
            assert sack_kernel(-1, L, r1, r2) == pytest.approx(rl ** L / rg ** (L + 1), rel=1e-15)


def test_kernel_mu1_L0_polynomial():
    for r1, r2 in ((0.3, 1.7), (2.0, 0.5)):
        rl, rg = min(r1, r2), max(r1, r2)
        x = (rl / rg) ** 2
        assert sack_kernel(1, 0, r1, r2) == pytest.approx(rg * (1.0 + x / 3.0), rel=1e-15)


@pytest.mark.parametrize("mu,L", [(-2, 0), (-2, 1), (-2, 4), (1, 0), (1, 1), (1, 3),
                                  (-3, 0), (-3, 2), (-4, 1), (-5, 2), (3, 1), (2, 1), (-6, 0)])
@pytest.mark.parametrize("r1,r2", [(0.5, 1.5), (1.9, 0.4), (1.0, 0.93)])
def test_kernel_against_legendre_projection(mu, L, r1, r2):
    ref = legendre_coefficient(mu, L, r1, r2)
    assert rel(sack_kernel(mu, L, r1, r2), ref) <= 1e-12


def test_kernel_even_positive_mu_truncates():
    assert sack_kernel(2, 2, 0.5, 1.5) == 0.0
    assert sack_kernel(2, 1, 0.5, 1.5) == pytest.approx(-2.0 * 0.5 * 1.5 / 3.0 * 3.0, rel=1e-14)


def test_kernel_singular_diagonal():
    with pytest.raises(DivergenceError):
        sack_kernel(-3, 0, 1.0, 1.0)
    with pytest.raises(DomainError):
        sack_kernel(-1, 0, 0.0, 1.0)


def test_power_params_validation():
    base = RadialParams(2, 2, 1, 1)
    for mu in (0, 2, 1.5):
        with pytest.raises(DomainError):
            PowerParams(mu, base, 0)
    with pytest.raises(DomainError):
        PowerParams(-1, base, -1)


@pytest.mark.parametrize("p", CHAIN_SETS[:3])
@pytest.mark.parametrize("L", [0, 2, 5])
def test_sack_radial_mu_minus1_is_coulomb(p, L):
    a = sack_radial(PowerParams(-1, p, L))
    assert a.rel_diff(radial_direct_series(p, L)) <= 1e-11


def test_sack_radial_mu1_quadrature():
    p = RadialParams(2, 2, 2, 2)
    v = sack_radial(PowerParams(1, p, 0))
    q = quad_kernel([(1.0, 2.0)], 2.0, [(1.0, 2.0)], 2.0, 1.0, lambda x: 1.0 + x * x / 3.0)
    assert rel(v, q.value) <= 1e-9
    for L in (1, 3):
        v = sack_radial(PowerParams(1, CHAIN_SETS[0], L))
        K = lambda x, L=L: legendre_coefficient(1, L, x, 1.0)
        shape = lambda x, K=K: float(K(x)) if x > 0 else 0.0
        q = quad_kernel([(1.0, 3.5)], 1.0, [(1.0, 2.5)], 1.5, 1.0, shape,
                        q=QuadSpec(rel_tol=1e-9))
        assert rel(v, q.value) <= 1e-8


def test_sack_radial_mu_minus2_log_kernel():
    # the L = 0 coefficient of 1/r12^2 is ln((r1+r2)/|r1-r2|) / (2 r1 r2)
    p = RadialParams(3.5, 2.5, 1.0, 1.5)
    v = sack_radial(PowerParams(-2, p, 0))
    with mp.workdps(20):
        def inner(r2):
            f = lambda r1: r1 ** 2.5 * mp.exp(-r1) * mp.log((r1 + r2) / abs(r1 - r2)) / 2
            return r2 ** 1.5 * mp.exp(-1.5 * r2) * mp.quad(f, [0, r2, 2 * r2 + 10, mp.inf])
        ref = mp.quad(inner, [0, 2, 6, mp.inf])
    assert rel(v, ref) <= 1e-9


def test_sack_radial_diverges_below_minus2():
    with pytest.raises(DivergenceError):
        sack_radial(PowerParams(-3, CHAIN_SETS[0], 0))


def test_mu_ladder_residual_trivial():
    assert mu_ladder_residual(-1, 0, 0.0, (0.0, 0.0), 0.0) == 0.0
    assert mu_ladder_residual(-1, 2, 0.0, (0.0, 0.0), (0.0, 0.0, 0.0)) == 0.0
    A, B, C = mu_ladder_coefficients(-1, 0)
    assert (A, B, C) == (-3.0, 2.0, -1.0)


@pytest.mark.parametrize("mu,L", [(-1, 0), (-1, 3), (1, 2), (-3, 1), (-2, 0), (-4, 2)])
@pytest.mark.parametrize("r1,r2", [(0.5, 1.5), (2.2, 0.7)])
def test_kernel_relation_pointwise(mu, L, r1, r2):
    assert abs(kernel_relation_residual(mu, L, r1, r2)) <= 1e-12


@pytest.mark.parametrize("p", CHAIN_SETS)
@pytest.mark.parametrize("L", [0, 2])
def test_mu_chain_residual(p, L):
    up, mid, low = mu_chain_terms(p, L)
    assert abs(mu_ladder_residual(-1, L, up, mid, low)) <= 1e-8


def test_mu_chain_rejects_other_mu():
    with pytest.raises(DomainError):
        mu_chain_terms(CHAIN_SETS[0], 0, mu=-3)


# Breit ------------------------------------------------------------------------------

BREIT_N_SETS = [
    (4.0, 4.0, 2.0, 2.0, 0), (5.5, 4.5, 1.2, 2.1, 2), (3.3, 6.1, 0.7, 1.4, 1),
    (7.25, 5.5, 2.5, 1.5, 3), (4.5, 3.5, 1.0, 1.0, 0), (6.0, 8.2, 1.8, 2.6, 4),
    (9.5, 9.51, 1.1, 1.2, 2), (5.0, 5.0, 3.0, 0.5, 1), (4.2, 7.7, 0.9, 3.3, 0),
    (12.5, 10.3, 2.0, 1.7, 5),
]


@pytest.mark.parametrize("args", BREIT_N_SETS)
def test_breit_N_quadrature(args):
    n, np_, z, zp, L = args
    v = breit_N(n, np_, z, zp, L)
    assert v.sign == 1
    assert rel(v, quad_radial(RadialParams(n, np_, z, zp), L, L + 3.0, True).value) <= 1e-8


@pytest.mark.parametrize("args", BREIT_N_SETS)
def test_breit_N_tiling(args):
    n, np_, z, zp, L = args
    full = radial_generalized(RadialParams(n, np_, z, zp), L, L + 3.0, False)
    halves = breit_N(n, np_, z, zp, L) + breit_N(np_, n, zp, z, L)
    assert halves.rel_diff(full) <= 1e-10


def test_breit_N_literal_step():
    n, np_, z, zp, L = 4.0, 4.0, 2.0, 2.0, 0
    lit = breit_N(n, np_, z, zp, L, literal_step=True)
    std = breit_N(n, np_, z, zp, L)
    assert 0.0 < float(lit) < float(std)


BREIT_V_SETS = [
    (2.0, 2.0, 1.0, 1.0, 4.0, 2.0, 0), (2.5, 1.5, 1.3, 0.7, 5.0, 1.8, 1),
    (3.0, 2.2, 0.9, 1.4, 6.3, 2.5, 2), (1.5, 3.5, 2.0, 0.6, 4.4, 1.2, 0),
    (4.0, 4.0, 1.1, 1.1, 7.0, 3.0, 3), (2.2, 0.0, 1.0, 1.5, 4.0, 2.0, 1),
    (3.7, 2.9, 0.8, 2.2, 5.5, 1.6, 2), (5.0, 3.0, 1.6, 0.9, 8.0, 2.2, 1),
    (2.8, 2.8, 1.2, 0.1, 4.6, 2.0, 0), (2.8, 2.8, 1.2, 10.0, 4.6, 2.0, 0),
]


@pytest.mark.parametrize("args", BREIT_V_SETS)
def test_breit_V_quadrature(args):
    assert rel(breit_V(*args), breit_V_quadrature(*args)) <= 1e-8


def test_breit_V_sign_flip():
    small = breit_V(2.8, 2.8, 1.2, 0.1, 4.6, 2.0, 0)
    large = breit_V(2.8, 2.8, 1.2, 10.0, 4.6, 2.0, 0)
    assert small > 0.0 > large
    assert breit_V_quadrature(2.8, 2.8, 1.2, 0.1, 4.6, 2.0, 0) > 0.0
    assert breit_V_quadrature(2.8, 2.8, 1.2, 10.0, 4.6, 2.0, 0) < 0.0


def test_breit_V_pure_exponential_limit():
    # n1' = 0: d/dr e^{-zeta' r} leaves one negative term
    v = breit_V(2.2, 0.0, 1.0, 1.5, 4.0, 2.0, 1)
    ref = -1.5 * float(radial_generalized(RadialParams(2.2, 4.0, 2.5, 2.0), 1, 4.0))
    assert v < 0.0
    assert rel(v, ref) <= 1e-15
