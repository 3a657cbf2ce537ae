import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.physics.wigner import wigner_3j as sym_3j

from nsto_eri.angular import (
    COMPLEX,
    REAL,
    AngularKey,
    a_coeff,
    channel_weight,
    gaunt_C,
    lm_channels,
    wigner_3j,
)
from nsto_eri.errors import DomainError
from nsto_eri.oracle import quad_gaunt


def test_gaunt_trivial():
    assert gaunt_C(0, 0, 0, 0, 0, 0) == pytest.approx(1.0, abs=1e-15)
    assert gaunt_C(0, 0, 0, 0, 0, 0, REAL) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("args", [(2, 0, 1, 0, 1, 0), (1, 0, 0, 0, 1, 0)])
@pytest.mark.parametrize("conv", [COMPLEX, REAL])
def test_gaunt_examples_against_quadrature(args, conv):
    L, M, l, m, lp, mp = args
    assert gaunt_C(*args, conv) == pytest.approx(quad_gaunt(L, M, l, m, lp, mp, conv), abs=1e-13)


def test_gaunt_known_values():
    # tabulated Condon-Shortley c^k coefficients
    assert gaunt_C(2, 0, 1, 0, 1, 0) == pytest.approx(0.4, rel=1e-14)
    assert gaunt_C(2, 1, 1, 1, 1, 0) == pytest.approx(math.sqrt(3.0) / 5.0, rel=1e-14)
    assert gaunt_C(1, 0, 0, 0, 1, 0) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-14)


def test_gaunt_selection_rules_exact_zero():
    assert gaunt_C(1, 0, 1, 0, 1, 0) == 0.0          # parity
    assert gaunt_C(3, 0, 1, 0, 1, 0) == 0.0          # triangle
    assert gaunt_C(2, 1, 1, 1, 1, 1) == 0.0          # |M| != |m - m'|
    assert abs(quad_gaunt(1, 0, 1, 0, 1, 0)) <= 1e-12


def test_gaunt_exhaustive_against_quadrature():
    for l, lp in itertools.product(range(3), repeat=2):
        for m, mp in itertools.product(range(-l, l + 1), range(-lp, lp + 1)):
            for L in range(abs(l - lp), l + lp + 1):
                for M in range(0, L + 1):
                    for conv in (COMPLEX, REAL):
                        ref = quad_gaunt(L, M, l, m, lp, mp, conv)
                        got = gaunt_C(L, M, l, m, lp, mp, conv)
                        if conv == REAL:
                            # the oracle integrates signed M; the library splits C^{L|M|} A^M
                            refs = [quad_gaunt(L, s, l, m, lp, mp, conv) for s in {M, -M}]
                            got_a = [got * a_coeff(s, m, mp, conv) for s in {M, -M}]
                            assert got_a == pytest.approx(refs, abs=1e-13)
                        else:
                            assert got == pytest.approx(ref, abs=1e-13)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 12), st.data())
def test_wigner_3j_against_sympy(j1, j2, j3, data):
    m1 = data.draw(st.integers(-j1, j1))
    m2 = data.draw(st.integers(-j2, j2))
    m3 = -m1 - m2
    ref = float(sym_3j(j1, j2, j3, m1, m2, m3)) if abs(m3) <= j3 else 0.0
    assert wigner_3j(j1, j2, j3, m1, m2, m3) == pytest.approx(ref, abs=1e-14)


def test_a_coeff_examples():
    assert a_coeff(0, 1, 1, COMPLEX) == 1.0
    assert a_coeff(1, 1, 1, COMPLEX) == 0.0
    assert a_coeff(0, 0, 0, REAL) == pytest.approx(1.0, abs=1e-15)


def test_a_coeff_real_values():
    # Phi_1 Phi_1 = (1 + cos 2phi) / (2 pi): overlap with Phi_0 and Phi_2
    assert a_coeff(0, 1, 1, REAL) == pytest.approx(1.0, rel=1e-15)
    assert a_coeff(2, 1, 1, REAL) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
    assert a_coeff(-2, 1, 1, REAL) == 0.0
    assert a_coeff(-2, 1, -1, REAL) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)


def test_lm_channels_examples():
    assert lm_channels(AngularKey(0, 0, 0, 0, 0, 0, 0, 0)) == [(0, 0)]
    assert lm_channels(AngularKey(1, 0, 1, 0, 0, 0, 0, 0)) == [(0, 0)]
    ch = lm_channels(AngularKey(1, 0, 1, 0, 1, 0, 1, 0))
    assert {L for L, _ in ch} == {0, 2}
    assert all(channel_weight(AngularKey(1, 0, 1, 0, 1, 0, 1, 0), L, M) != 0.0 for L, M in ch)


def test_lm_channels_enumeration_oracle():
    # brute force: every (L, M) permitted by parity, triangle and a nonzero weight
    for ls in itertools.product(range(3), repeat=4):
        ms = [range(-l, l + 1) for l in ls]
        for mm in itertools.islice(itertools.product(*ms), 20):
            key = AngularKey(ls[0], mm[0], ls[1], mm[1], ls[2], mm[2], ls[3], mm[3])
            for conv in (COMPLEX, REAL):
                brute = [(L, M) for L in range(0, 5) for M in range(-L, L + 1)
                         if abs(channel_weight(key, L, M, conv)) > 1e-14]
                assert lm_channels(key, conv) == brute


def test_domain_errors():
    with pytest.raises(DomainError):
        AngularKey(1, 2, 0, 0, 0, 0, 0, 0)
    with pytest.raises(DomainError):
        gaunt_C(0, 0, 0, 0, 0, 0, "spherical")
    with pytest.raises(DomainError):
        a_coeff(0, 0, 0, "other")
