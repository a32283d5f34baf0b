"""Conditioning rules for lower probabilities and belief combination.

Four single-event rules (bayes, geometric, dempster, and the inner term of
the third asymmetric combination rule, tagged "it"), and the asymmetric
combination of belief functions at mass level or belief level, plus the
classical product-and-renormalize combination.
"""

from dataclasses import dataclass
from fractions import Fraction

from .capacity import Capacity, is_belief, is_k_monotone
from .errors import InvariantViolation, UndefinedOperation
from .lattice import SetFunction, SignedMassFunction

RULES = ("bayes", "geometric", "dempster", "it")
COMBINATION_RULES = ("bar", "dbar", "tbar", "dempster")


def _bayes_value(l: Capacity, a: int, e: int):
    """l(A&E) / (l(A&E) + 1 - l(A|~E)); None on the 0/0 boundary."""
    frame = l.frame
    num = l[a & e]
    den = num + 1 - l[a | frame.complement(e)]
    if den == 0:
        return None
    return num / den


def _geometric_value(l: Capacity, a: int, e: int) -> Fraction:
    return l[a & e] / l[e]


def _dempster_value(l: Capacity, a: int, e: int) -> Fraction:
    comp = l.frame.complement(e)
    return (l[a | comp] - l[comp]) / (1 - l[comp])


def _it_value(l: Capacity, a: int, e: int) -> Fraction:
    comp = l.frame.complement(e)
    return (l[a] - l[a & comp]) / (1 - l[comp])


@dataclass(frozen=True)
class ConditionedCapacity:
    """A conditioned lower probability plus provenance for boundary cells.

    ``fallback_cells`` lists the subsets where the closed form degenerated to
    0/0 and the exact credal-set envelope supplied the value instead.
    """

    capacity: Capacity
    rule: str
    event: int
    fallback_cells: tuple[int, ...] = ()

    def __getitem__(self, mask: int) -> Fraction:
        return self.capacity[mask]


def condition_lower(l: Capacity, e: int, rule: str) -> ConditionedCapacity:
    """Condition a lower probability on an event by the named rule.

    bayes requires a 2-monotone input (the closed form is only valid there;
    use the credal module's conditional envelope for general capacities) and
    l(~E) < 1.  geometric requires l(E) > 0.  dempster and it require
    l(~E) < 1.  The result is normalized: value 1 at the full frame.
    """
    frame = l.frame
    frame._check_mask(e)
    comp = frame.complement(e)
    if rule not in RULES:
        raise InvariantViolation(f"unknown conditioning rule {rule!r}; expected one of {RULES}")
    if rule == "geometric":
        if l[e] <= 0:
            raise UndefinedOperation(
                f"geometric conditioning needs positive lower probability on "
                f"{frame.subset_str(e)}, got {l[e]}"
            )
    else:
        if l[comp] >= 1:
            raise UndefinedOperation(
                f"{rule} conditioning on {frame.subset_str(e)} undefined: the complement "
                f"has lower probability {l[comp]}"
            )
    if rule == "bayes" and not is_k_monotone(l, 2):
        raise UndefinedOperation(
            "bayes closed form requires a 2-monotone capacity; "
            "use the conditional envelope for general inputs"
        )

    fallbacks = []
    values = []
    kernel = {
        "bayes": _bayes_value,
        "geometric": _geometric_value,
        "dempster": _dempster_value,
        "it": _it_value,
    }[rule]
    envelope_table = None
    for a in frame.subsets():
        v = kernel(l, a, e)
        if v is None:  # bayes 0/0 boundary: defer to the exact envelope
            if envelope_table is None:
                from . import credal

                envelope_table = credal.conditional_envelope_table(l, e)
            v = envelope_table[a]
            fallbacks.append(a)
        values.append(v)
    return ConditionedCapacity(
        Capacity(SetFunction(frame, tuple(values))), rule, e, tuple(fallbacks)
    )


@dataclass(frozen=True)
class CombinationResult:
    capacity: Capacity
    mass: SignedMassFunction
    rule: str
    level: str


def _plausibility(b: Capacity, mask: int) -> Fraction:
    return 1 - b[b.frame.complement(mask)]


def combine_belief(b1: Capacity, b2: Capacity, rule: str, level: str = "mass") -> CombinationResult:
    """Combine two belief functions by one of the asymmetric rules or by the
    classical product rule.

    level="mass" evaluates the mass-level formulas and returns their zeta
    transform alongside; level="belief" evaluates the per-focal conditioning
    mixtures directly.  For the three asymmetric rules the two levels agree
    exactly (the belief forms are the subset sums of the mass forms), which
    the test suite exercises rather than assumes.
    """
    if b1.frame != b2.frame:
        raise InvariantViolation("belief functions live on different frames")
    if rule not in COMBINATION_RULES:
        raise InvariantViolation(
            f"unknown combination rule {rule!r}; expected one of {COMBINATION_RULES}"
        )
    if level not in ("mass", "belief"):
        raise InvariantViolation(f"unknown level {level!r}; expected 'mass' or 'belief'")
    if not is_belief(b1):
        raise InvariantViolation("first operand is not a belief function")
    if not is_belief(b2):
        raise InvariantViolation("second operand is not a belief function")
    frame = b1.frame
    m1 = b1.mobius()
    m2 = b2.mobius()

    if rule in ("bar", "tbar"):
        bad = [f for f in m2.focal_sets if _plausibility(b1, f) <= 0]
        if bad:
            raise UndefinedOperation(
                f"{rule} combination undefined: focal element "
                f"{frame.subset_str(bad[0])} of the second operand has zero plausibility "
                "under the first"
            )
    if rule == "dbar":
        bad = [f for f in m2.focal_sets if b1[f] <= 0]
        if bad:
            raise UndefinedOperation(
                f"dbar combination undefined: focal element {frame.subset_str(bad[0])} "
                "of the second operand has zero belief under the first"
            )

    if rule == "dempster" or level == "mass":
        mass = _mass_level(frame, m1, m2, b1, rule)
        cap = Capacity.from_mass(mass)
    else:
        cap = _belief_level(frame, m2, b1, rule)
        mass = cap.mobius()
    return CombinationResult(cap, mass, rule, level)


def _mass_level(frame, m1, m2, b1, rule) -> SignedMassFunction:
    out: dict[int, Fraction] = {}

    def add(h, v):
        if h:  # conflict (empty intersection) carries no representable mass
            out[h] = out.get(h, Fraction(0)) + v

    if rule == "bar":
        for f, mf in m2.masses.items():
            pl = _plausibility(b1, f)
            for e, me in m1.masses.items():
                add(e & f, me * mf / pl)
    elif rule == "dbar":
        for h, mh in m1.masses.items():
            scale = sum(
                (mf / b1[f] for f, mf in m2.masses.items() if f & h == h), Fraction(0)
            )
            add(h, mh * scale)
    elif rule == "tbar":
        for h, mh in m1.masses.items():
            scale = sum(
                (mf / _plausibility(b1, f) for f, mf in m2.masses.items() if f & h),
                Fraction(0),
            )
            add(h, mh * scale)
    elif rule == "dempster":
        conflict = Fraction(0)
        raw: dict[int, Fraction] = {}
        for e, me in m1.masses.items():
            for f, mf in m2.masses.items():
                h = e & f
                if h:
                    raw[h] = raw.get(h, Fraction(0)) + me * mf
                else:
                    conflict += me * mf
        k = 1 - conflict
        if k <= 0:
            raise UndefinedOperation("dempster combination undefined under total conflict")
        for h, v in raw.items():
            add(h, v / k)
    return SignedMassFunction(frame, out)


def _belief_level(frame, m2, b1, rule) -> Capacity:
    kernel = {"bar": _dempster_value, "dbar": _geometric_value, "tbar": _it_value}[rule]
    values = []
    for a in frame.subsets():
        acc = Fraction(0)
        for f, mf in m2.masses.items():
            acc += mf * kernel(b1, a, f)
        values.append(acc)
    return Capacity(SetFunction(frame, tuple(values)))
