"""Randomized generators and targeted counterexample search.

The searches reproduce the existence claims behind the revision theory:
revising by a non-monotone bound can leave the simplex, a monotone but not
2-monotone bound can lose dominance, the information projection disagrees
with the kinematic posterior, and the third asymmetric combination rule can
fail to certify its own conditioning event.  Every reported witness is
validated through the public operations it violates; the search path itself
is never trusted.

Candidate streams are deterministic: curated regression instances first,
then coarse rational grids, then seeded random instances.  Reports aggregate
witnesses in canonical order (frame size, then lexicographic on the
bitmask-indexed value vectors), so the outcome is independent of evaluation
order.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import conditioning
from .capacity import Capacity, is_k_monotone, is_monotone
from .errors import InvariantViolation
from .kinematics import (
    ProbabilityMeasure,
    kinematic_revise,
    maxent_project,
    relative_information,
)
from .lattice import Frame

CLAIMS = (
    "monotone-characterization",
    "two-monotone-characterization",
    "maxent-gap",
    "it-self-conditional",
    "tbar-dominance",
)

#: Claims whose witnesses the default budget is expected to find; the
#: tbar-dominance search is exploratory and either outcome is acceptable.
EXPECTED_CLAIMS = CLAIMS[:4]

_MAXENT_MARGIN = 1e-6


@dataclass(frozen=True)
class SearchBudget:
    max_frame_size: int = 3
    grid_denominator: int = 8
    random_samples: int = 200
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.max_frame_size <= 5:
            raise InvariantViolation("max_frame_size must lie in 2..5")
        if self.grid_denominator < 2:
            raise InvariantViolation("grid_denominator must be at least 2")
        if self.random_samples < 0:
            raise InvariantViolation("random_samples must be nonnegative")


@dataclass(frozen=True)
class Witness:
    key: tuple
    description: str
    instance: dict = field(compare=False)


@dataclass(frozen=True)
class WitnessReport:
    claim: str
    found: bool
    witness: Witness | None
    witnesses: tuple[Witness, ...]
    checked: int


def _frame(n: int) -> Frame:
    return Frame(tuple("abcde"[:n]))


def _rng(*parts) -> random.Random:
    # string seeding is deterministic across processes, unlike hash()
    return random.Random(":".join(str(p) for p in parts))


def gen_probability(frame: Frame, seed, denominator: int = 8) -> ProbabilityMeasure:
    """Deterministic strictly positive probability on a rational grid."""
    rng = _rng("probability-weights", seed, frame.labels, denominator)
    ks = [rng.randint(1, denominator) for _ in range(frame.n)]
    total = sum(ks)
    return ProbabilityMeasure(frame, tuple(Fraction(k, total) for k in ks))


def gen_capacity(frame: Frame, kind: str, seed) -> Capacity:
    """Deterministic capacity of the requested kind.

    any: independent grid values.  monotone: random nonnegative increments
    along the subset lattice, normalized.  two_monotone: a convex distortion
    of a random probability, possibly mixed with a random belief function,
    verified exactly.  belief: random nonnegative masses.  probability: the
    additive capacity of a random measure.
    """
    rng = _rng("capacity", kind, seed, frame.labels)
    if kind == "any":
        return _gen_any(frame, rng)
    if kind == "monotone":
        return _gen_monotone(frame, rng)
    if kind == "two_monotone":
        for attempt in range(64):
            c = _gen_two_monotone(frame, rng)
            if is_k_monotone(c, 2):
                return c
        raise InvariantViolation("two-monotone generation failed; widen the grid")
    if kind == "belief":
        return _gen_belief(frame, rng)
    if kind == "probability":
        return gen_probability(frame, ("capacity", seed)).to_capacity()
    raise InvariantViolation(f"unknown capacity kind {kind!r}")


def _gen_any(frame: Frame, rng, denominator: int = 8) -> Capacity:
    assignments = {}
    for mask in frame.subsets():
        if mask in (0, frame.full):
            continue
        assignments[mask] = Fraction(rng.randint(0, denominator), denominator)
    return Capacity.from_map(frame, assignments)


def _gen_monotone(frame: Frame, rng, denominator: int = 8) -> Capacity:
    raw = [Fraction(0)] * frame.size
    for mask in sorted(frame.subsets(), key=lambda m: (m.bit_count(), m)):
        if mask == 0:
            continue
        floor = max(raw[mask & ~(1 << i)] for i in range(frame.n) if mask >> i & 1)
        raw[mask] = floor + Fraction(rng.randint(0, denominator), denominator)
    top = raw[frame.full]
    if top == 0:
        return Capacity.vacuous(frame)
    return Capacity.from_map(
        frame, {m: raw[m] / top for m in frame.subsets() if m not in (0, frame.full)}
    )


def _gen_belief(frame: Frame, rng, denominator: int = 8) -> Capacity:
    from .lattice import SignedMassFunction

    count = rng.randint(1, min(6, frame.size - 1))
    focal = rng.sample(range(1, frame.size), count)
    ks = [rng.randint(1, denominator) for _ in focal]
    total = sum(ks)
    masses = {}
    for f, k in zip(focal, ks):
        masses[f] = masses.get(f, Fraction(0)) + Fraction(k, total)
    return Capacity.from_mass(SignedMassFunction(frame, masses))


def _gen_two_monotone(frame: Frame, rng) -> Capacity:
    p = gen_probability(frame, ("distortion-base", rng.random()))
    alpha = Fraction(rng.randint(0, 7), 8)
    exponent = rng.choice((1, 2, 3))
    w = Fraction(rng.randint(0, 8), 8)

    def distort(t: Fraction) -> Fraction:
        cut = max(Fraction(0), (t - alpha) / (1 - alpha))
        return w * cut + (1 - w) * t**exponent

    assignments = {
        m: distort(p.of(m)) for m in frame.subsets() if m not in (0, frame.full)
    }
    cap = Capacity.from_map(frame, assignments)
    if rng.random() < 0.5:
        bel = _gen_belief(frame, rng)
        mu = Fraction(rng.randint(1, 7), 8)
        mixed = {
            m: mu * cap[m] + (1 - mu) * bel[m]
            for m in frame.subsets()
            if m not in (0, frame.full)
        }
        cap = Capacity.from_map(frame, mixed)
    return cap


# -- curated regression instances ---------------------------------------------


def _curated(claim: str):
    f2 = _frame(2)
    f3 = _frame(3)
    half = Fraction(1, 2)
    if claim == "monotone-characterization":
        c = Capacity.from_map(
            f3,
            {
                0b001: half,
                0b010: 0,
                0b100: 0,
                0b011: Fraction(1, 4),
                0b101: half,
                0b110: 0,
            },
        )
        p = ProbabilityMeasure(f3, (Fraction(1, 8), Fraction(1, 8), Fraction(3, 4)))
        return [(c, p)]
    if claim == "two-monotone-characterization":
        c = Capacity.from_map(
            f3,
            {0b011: Fraction(3, 4), 0b101: Fraction(3, 4)},
        )
        p = ProbabilityMeasure(
            f3, (Fraction(1, 100), Fraction(98, 100), Fraction(1, 100))
        )
        return [(c, p)]
    if claim == "maxent-gap":
        from .lattice import SignedMassFunction

        b = Capacity.from_mass(SignedMassFunction(f2, {0b01: half, 0b11: half}))
        p = ProbabilityMeasure(f2, (Fraction(1, 4), Fraction(3, 4)))
        return [(b, p)]
    if claim == "it-self-conditional":
        return [(Capacity.vacuous(f2), 0b01)]
    if claim == "tbar-dominance":
        from .lattice import SignedMassFunction

        b1 = Capacity.vacuous(f2)
        b2 = Capacity.from_mass(SignedMassFunction(f2, {0b01: Fraction(1)}))
        return [(b1, b2)]
    raise InvariantViolation(f"unknown claim {claim!r}")


# -- candidate streams ---------------------------------------------------------


_GRID_LEVELS = (Fraction(0), Fraction(1, 2), Fraction(1))


def _grid_capacities(frame: Frame):
    proper = [m for m in frame.subsets() if m not in (0, frame.full)]
    for combo in product(_GRID_LEVELS, repeat=len(proper)):
        yield Capacity.from_map(frame, dict(zip(proper, combo)))


def _grid_priors(frame: Frame, denominator: int):
    def compositions(total, parts):
        if parts == 1:
            if total >= 1:
                yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for ks in compositions(denominator, frame.n):
        yield ProbabilityMeasure(frame, tuple(Fraction(k, denominator) for k in ks))


def _grid_beliefs(frame: Frame, denominator: int):
    from .lattice import SignedMassFunction

    nonempty = [m for m in frame.subsets() if m]
    for ks in product(range(denominator + 1), repeat=len(nonempty)):
        if sum(ks) != denominator:
            continue
        masses = {
            m: Fraction(k, denominator) for m, k in zip(nonempty, ks) if k
        }
        yield Capacity.from_mass(SignedMassFunction(frame, masses))


# -- per-claim search bodies ----------------------------------------------------


def _cap_key(c: Capacity) -> tuple:
    return tuple(c.values)


def _search_revision_validity(budget: SearchBudget):
    """Pairs (non-monotone capacity, prior) whose revision leaves the simplex."""
    n = min(3, budget.max_frame_size)
    frame = _frame(n)
    witnesses = []
    checked = 0

    def consider(c: Capacity, p: ProbabilityMeasure):
        nonlocal checked
        checked += 1
        if is_monotone(c):
            return
        m = c.mobius()
        if any(p.of(e) == 0 for e in m.focal_sets):
            return
        revised = kinematic_revise(p, m)
        if revised.is_probability:
            return
        i = min(i for i, w in enumerate(revised.weights) if w < 0)
        lab = c.frame.labels[i]
        witnesses.append(
            Witness(
                key=(c.frame.n, _cap_key(c), tuple(p.weights)),
                description=(
                    f"revision q({{{lab}}}) = {revised.weights[i]} < 0 is not a probability"
                ),
                instance={"capacity": c, "prior": p, "revision": revised},
            )
        )

    for c, p in _curated("monotone-characterization"):
        consider(c, p)
    priors = list(_grid_priors(frame, budget.grid_denominator))
    for c in _grid_capacities(frame):
        if is_monotone(c):
            checked += len(priors)
            continue
        for p in priors:
            consider(c, p)
    for i in range(budget.random_samples):
        size = 2 + i % (budget.max_frame_size - 1)
        rf = _frame(size)
        consider(
            gen_capacity(rf, "any", (budget.seed, i)),
            gen_probability(rf, (budget.seed, i)),
        )
    return witnesses, checked


def _search_dominance(budget: SearchBudget):
    """Monotone but not 2-monotone bounds whose revision loses dominance."""
    n = min(3, budget.max_frame_size)
    frame = _frame(n)
    witnesses = []
    checked = 0

    def consider(c: Capacity, p: ProbabilityMeasure):
        nonlocal checked
        checked += 1
        if not is_monotone(c) or is_k_monotone(c, 2):
            return
        m = c.mobius()
        if any(p.of(e) == 0 for e in m.focal_sets):
            return
        revised = kinematic_revise(p, m)
        if not revised.is_probability:
            return
        bad = [a for a in c.frame.subsets() if revised.of(a) < c[a]]
        if not bad:
            return
        a = min(bad)
        witnesses.append(
            Witness(
                key=(c.frame.n, _cap_key(c), tuple(p.weights)),
                description=(
                    f"q({c.frame.subset_str(a)}) = {revised.of(a)} < "
                    f"c({c.frame.subset_str(a)}) = {c[a]}"
                ),
                instance={"capacity": c, "prior": p, "revision": revised, "subset": a},
            )
        )

    for c, p in _curated("two-monotone-characterization"):
        consider(c, p)
    priors = list(_grid_priors(frame, budget.grid_denominator))
    for c in _grid_capacities(frame):
        if not is_monotone(c) or is_k_monotone(c, 2):
            checked += len(priors)
            continue
        for p in priors:
            consider(c, p)
    for i in range(budget.random_samples):
        size = 2 + i % (budget.max_frame_size - 1)
        rf = _frame(size)
        consider(
            gen_capacity(rf, "monotone", (budget.seed, i)),
            gen_probability(rf, (budget.seed, i)),
        )
    return witnesses, checked


def _search_maxent_gap(budget: SearchBudget):
    """Belief bounds where the kinematic posterior is feasible but not the
    information projection."""
    frame = _frame(2)
    witnesses = []
    checked = 0

    def consider(b: Capacity, p: ProbabilityMeasure):
        nonlocal checked
        checked += 1
        m = b.mobius()
        if any(p.of(e) == 0 for e in m.focal_sets):
            return
        revised = kinematic_revise(p, m)
        if not revised.is_probability:
            return
        q8 = revised.to_probability()
        if any(q8.of(a) < b[a] for a in frame.subsets()):
            return  # kinematic posterior infeasible; not a maxent comparison
        projected = maxent_project(p, b, max_iter=200)
        # the projection iterate is feasible, so beating the kinematic
        # posterior by the margin certifies non-minimality with or without
        # convergence of the projection itself
        kin_info = relative_information(q8, p)
        gap = kin_info - projected.objective
        if gap <= _MAXENT_MARGIN:
            return
        witnesses.append(
            Witness(
                key=(b.frame.n, _cap_key(b), tuple(p.weights)),
                description=(
                    f"kinematic posterior info {kin_info:.6f} exceeds projection "
                    f"info {projected.objective:.6f} by {gap:.6f} nats"
                ),
                instance={
                    "bound": b,
                    "prior": p,
                    "kinematic": q8,
                    "projection": projected,
                    "gap": gap,
                },
            )
        )

    for b, p in _curated("maxent-gap"):
        consider(b, p)
    priors = list(_grid_priors(frame, budget.grid_denominator))
    for b in _grid_beliefs(frame, 4):
        for p in priors:
            consider(b, p)
    for i in range(budget.random_samples):
        consider(
            gen_capacity(frame, "belief", (budget.seed, i)),
            gen_probability(frame, (budget.seed, i)),
        )
    return witnesses, checked


def _search_it_self_conditional(budget: SearchBudget):
    """Belief functions that do not certify their own conditioning event
    under the inner term of the third asymmetric rule."""
    witnesses = []
    checked = 0

    def consider(b: Capacity, event: int):
        nonlocal checked
        checked += 1
        frame = b.frame
        if event in (0, frame.full):
            return
        if b[frame.complement(event)] >= 1:
            return
        value = conditioning.condition_lower(b, event, "it")[event]
        if value >= 1:
            return
        witnesses.append(
            Witness(
                key=(b.frame.n, _cap_key(b), event),
                description=(
                    f"inner-term self conditioning on {frame.subset_str(event)} "
                    f"gives {value} < 1"
                ),
                instance={"belief": b, "event": event, "value": value},
            )
        )

    for b, event in _curated("it-self-conditional"):
        consider(b, event)
    frame = _frame(2)
    for b in _grid_beliefs(frame, 4):
        for event in frame.subsets():
            consider(b, event)
    for i in range(budget.random_samples):
        size = 2 + i % (budget.max_frame_size - 1)
        rf = _frame(size)
        b = gen_capacity(rf, "belief", (budget.seed, i))
        for event in rf.subsets():
            consider(b, event)
    return witnesses, checked


def _search_tbar_dominance(budget: SearchBudget):
    """Exploratory: does the third asymmetric rule dominate its second
    operand?  Violations are recorded when found; none is asserted."""
    frame = _frame(2)
    witnesses = []
    checked = 0

    def consider(b1: Capacity, b2: Capacity):
        nonlocal checked
        checked += 1
        m2 = b2.mobius()
        if any(_pl(b1, f) <= 0 for f in m2.focal_sets):
            return
        combined = conditioning.combine_belief(b1, b2, "tbar", "belief").capacity
        bad = [a for a in frame.subsets() if combined[a] < b2[a]]
        if not bad:
            return
        a = min(bad)
        witnesses.append(
            Witness(
                key=(frame.n, _cap_key(b1), _cap_key(b2), a),
                description=(
                    f"tbar(b1,b2)({frame.subset_str(a)}) = {combined[a]} < "
                    f"b2({frame.subset_str(a)}) = {b2[a]}"
                ),
                instance={"b1": b1, "b2": b2, "subset": a, "combined": combined},
            )
        )

    def _pl(b, f):
        return 1 - b[b.frame.complement(f)]

    for b1, b2 in _curated("tbar-dominance"):
        consider(b1, b2)
    beliefs = list(_grid_beliefs(frame, 4))
    for b1 in beliefs:
        for b2 in beliefs:
            consider(b1, b2)
    for i in range(budget.random_samples):
        consider(
            gen_capacity(frame, "belief", (budget.seed, i, "left")),
            gen_capacity(frame, "belief", (budget.seed, i, "right")),
        )
    return witnesses, checked


_SEARCHES = {
    "monotone-characterization": _search_revision_validity,
    "two-monotone-characterization": _search_dominance,
    "maxent-gap": _search_maxent_gap,
    "it-self-conditional": _search_it_self_conditional,
    "tbar-dominance": _search_tbar_dominance,
}


def search_witness(claim: str, budget: SearchBudget = SearchBudget()) -> WitnessReport:
    """Search grid and seeded-random instances for a witness of the claim.

    Deterministic: identical budgets give identical reports.  Witnesses are
    deduplicated and sorted by canonical key; the least one is the report's
    headline witness.
    """
    if claim not in _SEARCHES:
        raise InvariantViolation(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    raw, checked = _SEARCHES[claim](budget)
    unique = {}
    for w in raw:
        unique.setdefault(w.key, w)
    ordered = tuple(sorted(unique.values(), key=lambda w: w.key))
    return WitnessReport(
        claim=claim,
        found=bool(ordered),
        witness=ordered[0] if ordered else None,
        witnesses=ordered,
        checked=checked,
    )
