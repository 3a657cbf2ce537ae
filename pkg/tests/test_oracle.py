import math

import mpmath as mp
import pytest

from nsto_eri import oracle
from nsto_eri.errors import DomainError, ToleranceError
from nsto_eri.oracle import (
    DEFAULT_QUAD,
    QuadSpec,
    identity_suite,
    quad_gaunt,
    quad_kernel,
    quad_radial,
)
from nsto_eri.radial import RadialParams, ladder

from conftest import BENCH, rel

ACCEPTANCE_CASES = [
    (RadialParams(2, 2, 2, 2), 0),
    (RadialParams(2.5, 3.7, 1.1, 1.3), 1),
    (RadialParams(7.3, 4.6, 0.8, 2.2), 3),
    (RadialParams(15.5, 20.25, 1.4, 3.1), 6),
]


class FixedRng:
    """Stands in for random.Random and replays given draws."""

    def __init__(self, *values):
        self.values = list(values)

    def uniform(self, lo, hi):
        return self.values.pop(0)

    def randint(self, lo, hi):
        return self.values.pop(0)


def test_quadspec_validation():
    for kw in (dict(rel_tol=0.0), dict(abs_floor=-1.0), dict(max_subdivisions=0)):
        with pytest.raises(DomainError):
            QuadSpec(**kw)


def test_classical_value():
    r = quad_radial(RadialParams(2, 2, 2, 2), 0, 1.0)
    assert rel(r.value, 5 / 128) <= 1e-12
    assert r.rel_error <= DEFAULT_QUAD.rel_tol


@pytest.mark.parametrize("p,L", ACCEPTANCE_CASES)
def test_half_plus_mirror_is_full(p, L):
    full = quad_radial(p, L)
    half = quad_radial(p, L, half_range=True)
    mirror = quad_radial(p.swapped(), L, half_range=True)
    assert rel(half.value + mirror.value, full.value) <= 1e-12


@pytest.mark.parametrize("p,L", ACCEPTANCE_CASES)
def test_subdivision_doubling_within_error_estimate(p, L):
    a = quad_radial(p, L, q=QuadSpec(max_subdivisions=200))
    b = quad_radial(p, L, q=QuadSpec(max_subdivisions=400))
    assert abs(float(a.value) - float(b.value)) <= max(a.error, b.error)


def test_benchmark_parameters_against_ladder():
    t = ladder(BENCH, 10)
    for L in (0, 5, 10):
        r = quad_radial(BENCH, L)
        assert rel(t.R[L], r.value) <= 1e-9


def test_kernel_region_and_power_checks():
    with pytest.raises(DomainError):
        quad_kernel([(1.0, 1.0)], 1.0, [(1.0, 1.0)], 1.0, -1.0, lambda x: 1.0, "both")
    with pytest.raises(DomainError):
        quad_kernel([(1.0, 1.0)], 1.0, [(1.0, -2.0)], 1.0, -1.0, lambda x: 1.0)


def test_tolerance_error_carries_best_value():
    with pytest.raises(ToleranceError) as exc:
        quad_radial(RadialParams(2, 2, 2, 2), 0, q=QuadSpec(rel_tol=1e-18, max_subdivisions=1))
    assert exc.value.best is not None


def test_quad_radial_against_mpmath():
    p, L = RadialParams(3.3, 2.1, 1.7, 0.6), 2
    with mp.workdps(20):
        def inner(r2):
            f = lambda r1: r1 ** 3.3 * mp.exp(-1.7 * r1) * min(r1, r2) ** 2 / max(r1, r2) ** 3
            return r2 ** 2.1 * mp.exp(-0.6 * r2) * mp.quad(f, [0, r2, mp.inf])
        ref = mp.quad(inner, [0, 4, 12, mp.inf])
    assert rel(quad_radial(p, L).value, ref) <= 1e-10


def test_quad_gaunt_examples():
    assert quad_gaunt(0, 0, 0, 0, 0, 0) == pytest.approx(1.0, abs=1e-14)
    assert quad_gaunt(2, 0, 1, 0, 1, 0) == pytest.approx(0.4, abs=1e-14)
    assert abs(quad_gaunt(1, 0, 1, 0, 1, 0)) <= 1e-12
    with pytest.raises(DomainError):
        quad_gaunt(0, 0, 0, 0, 0, 0, "neither")


# identities ---------------------------------------------------------------------------

def test_upper_gamma_identity_fixed_point():
    lhs, terms, _ = oracle._id_upper_gamma(FixedRng(1.0, 2.0, 1.0, 1.0), DEFAULT_QUAD)
    assert lhs == pytest.approx(0.25, rel=1e-13)
    assert math.fsum(terms) == pytest.approx(0.25, rel=1e-14)


def test_c_shift_identity_empty_shift():
    lhs, terms, _ = oracle._id_c_shift_down(FixedRng(4.3, 6.8, 0.4, 0), DEFAULT_QUAD)
    assert len(terms) == 2 and terms[1] == 0.0
    assert terms[0] == lhs


def test_connection_identity_symmetric_half():
    lhs, terms, _ = oracle._id_connection(FixedRng(0.3, 0.3, 1.1, 0.5), DEFAULT_QUAD)
    assert rel(lhs, mp.hyp2f1(0.3, 0.3, 1.1, 0.5)) <= 1e-14
    assert rel(math.fsum(terms), lhs) <= 1e-12


def test_identity_suite_passes():
    rep = identity_suite(100, seed=0)
    assert len(rep.results) == 9
    for r in rep.results:
        assert r.samples == 100
        assert r.passed, (r.name, r.max_rel_dev, r.worst_case)
    assert rep.passed


def test_identity_suite_deterministic():
    a = identity_suite(5, seed=11)
    b = identity_suite(5, seed=11)
    assert [r.max_rel_dev for r in a.results] == [r.max_rel_dev for r in b.results]


def test_identity_suite_reports_failure_at_zero_tolerance():
    rep = identity_suite(5, seed=2, tol=0.0)
    assert not rep.passed
