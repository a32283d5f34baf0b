import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from probkin import Capacity, Frame, ProbabilityMeasure, SetFunction, SignedMassFunction

settings.register_profile(
    "ci", derandomize=True, suppress_health_check=[HealthCheck.too_slow], deadline=None
)
settings.load_profile("ci")


def frame_of(n: int) -> Frame:
    return Frame(tuple("abcdefghij"[:n]))


def random_set_function(frame: Frame, rng: random.Random, denominator: int = 16) -> SetFunction:
    """Arbitrary rational table with value 0 at the empty set."""
    vals = [Fraction(rng.randint(-2 * denominator, 2 * denominator), rng.randint(1, denominator))
            for _ in range(frame.size)]
    vals[0] = Fraction(0)
    return SetFunction(frame, tuple(vals))


def random_capacity(frame: Frame, rng: random.Random, denominator: int = 8) -> Capacity:
    vals = {m: Fraction(rng.randint(0, denominator), denominator)
            for m in frame.subsets() if m not in (0, frame.full)}
    return Capacity.from_map(frame, vals)


def random_mass(frame: Frame, rng: random.Random, signed: bool = False) -> SignedMassFunction:
    count = rng.randint(1, min(6, frame.size - 1))
    focal = rng.sample(range(1, frame.size), count)
    if signed:
        ks = [rng.choice([k for k in range(-4, 5) if k]) for _ in focal]
        if sum(ks) == 0:
            ks[0] += 1
    else:
        ks = [rng.randint(1, 8) for _ in focal]
    total = sum(ks)
    if total == 0:
        ks[0] += 1
        total = sum(ks)
    return SignedMassFunction(frame, {f: Fraction(k, total) for f, k in zip(focal, ks)})


def random_positive_prior(frame: Frame, rng: random.Random, denominator: int = 12) -> ProbabilityMeasure:
    ks = [rng.randint(1, denominator) for _ in range(frame.n)]
    total = sum(ks)
    return ProbabilityMeasure(frame, tuple(Fraction(k, total) for k in ks))


@pytest.fixture
def rng():
    return random.Random(20260810)
