import random

import pytest

from nsto_eri.radial import RadialParams

BENCH = RadialParams(99.5, 99.51, 1.1, 1.2)

REFERENCE_F = [
    29.214103839897745,
    25.622699228991727,
    22.679215280002873,
    20.243567625184863,
    18.209840992660358,
    16.497172446641568,
    15.043246176657511,
    13.799606631510756,
    12.728249973986842,
    11.799122653005792,
    10.988269542104628,
]


def rel(a, b):
    a, b = float(a), float(b)
    return abs(a - b) / abs(b)


def non_integer(rng, lo, hi, gap=1e-3):
    while True:
        x = rng.uniform(lo, hi)
        if abs(x - round(x)) > gap:
            return x


def standard_grid(count=200, seed=20240601):
    """Fixed pseudo-random (p, L_max) grid shared by ladder and property tests."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = RadialParams(non_integer(rng, 1.1, 120), non_integer(rng, 1.1, 120),
                         rng.uniform(0.3, 10), rng.uniform(0.3, 10))
        out.append((p, rng.randint(0, 25)))
    return out


@pytest.fixture(scope="session")
def grid():
    return standard_grid()


def to_mp(v):
    """Exact mpmath image of a LogScaled value."""
    import mpmath as mp
    return mp.mpf(v.mant) * mp.mpf(2) ** v.exp


def mp_rel(v, ref):
    import mpmath as mp
    ref = mp.mpf(ref)
    return float(abs(to_mp(v) - ref) / abs(ref))
