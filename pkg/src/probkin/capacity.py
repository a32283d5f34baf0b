"""Normalized set functions, their structural checks, and Dempster models.

A :class:`Capacity` only promises c(empty) = 0 and c(X) = 1.  Monotonicity,
superadditivity, k-monotonicity, belief-ness and coherence are *checked*
properties, not construction invariants: the counterexample lab deliberately
feeds pathological capacities through the revision rules.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import InvariantViolation
from .lattice import (
    Frame,
    RationalLike,
    SetFunction,
    SignedMassFunction,
    as_fraction,
    mobius_transform,
    zeta_transform,
)


@dataclass(frozen=True)
class Capacity:
    """A set function with value 0 on the empty set and 1 on the frame."""

    base: SetFunction

    def __post_init__(self):
        if self.base[0] != 0:
            raise InvariantViolation(f"capacity must vanish on the empty set, got {self.base[0]}")
        if self.base[self.frame.full] != 1:
            raise InvariantViolation(
                f"capacity must equal 1 on the full frame, got {self.base[self.frame.full]}"
            )

    @property
    def frame(self) -> Frame:
        return self.base.frame

    def __getitem__(self, mask: int) -> Fraction:
        return self.base[mask]

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self.base.values

    @classmethod
    def from_map(cls, frame: Frame, assignments: dict[int, RationalLike]) -> "Capacity":
        """Build from a sparse subset->value map; omitted subsets default to 0."""
        full = {frame.full: Fraction(1)}
        full.update({m: as_fraction(v) for m, v in assignments.items()})
        return cls(SetFunction.from_map(frame, full))

    @classmethod
    def from_mass(cls, m: SignedMassFunction) -> "Capacity":
        return cls(zeta_transform(m))

    @classmethod
    def vacuous(cls, frame: Frame) -> "Capacity":
        """Total ignorance: 0 everywhere except 1 at the full frame."""
        return cls.from_map(frame, {})

    def mobius(self) -> SignedMassFunction:
        return mobius_transform(self.base)

    def in_unit_range(self) -> bool:
        return all(0 <= v <= 1 for v in self.values)


def conjugate(c: Capacity) -> Capacity:
    """The conjugate (upper) capacity E -> 1 - c(complement(E)); an involution."""
    frame = c.frame
    vals = tuple(1 - c[frame.full ^ mask] for mask in frame.subsets())
    return Capacity(SetFunction(frame, vals))


def find_monotone_violation(c: Capacity):
    """Return (A, B) with A subseteq B and c(A) > c(B), or None.

    Scans the n * 2^(n-1) covering pairs of the subset lattice; monotonicity
    along covers implies monotonicity globally.
    """
    frame = c.frame
    for mask in frame.subsets():
        for i in range(frame.n):
            bit = 1 << i
            if mask & bit:
                continue
            if c[mask] > c[mask | bit]:
                return mask, mask | bit
    return None


def find_superadditive_violation(c: Capacity):
    """Return disjoint (A, B) with c(A u B) < c(A) + c(B), or None."""
    frame = c.frame
    for a in frame.subsets():
        if a == 0:
            continue
        # disjoint partners live inside the complement of a
        comp = frame.full ^ a
        b = comp
        while b:
            if b > a:  # unordered pairs once
                if c[a | b] < c[a] + c[b]:
                    return a, b
            b = (b - 1) & comp
    return None


def find_k_monotone_violation(c: Capacity, k: int):
    """Return a k-tuple of subsets violating the order-k inclusion-exclusion
    inequality, or None.

    The inequality for a sequence A_1..A_k compares c(union) with the
    alternating sum over nonempty index sets I of c(intersection over I).
    It is symmetric in the A_i, so multisets (combinations with repeats)
    cover all sequences.
    """
    if k < 2:
        raise InvariantViolation(f"k-monotonicity needs k >= 2, got {k}")
    frame = c.frame
    masks = list(frame.subsets())
    for combo in combinations_with_replacement(masks, k):
        union = 0
        for m in combo:
            union |= m
        rhs = Fraction(0)
        # iterate nonempty I subseteq {0..k-1} by bitmask
        for sel in range(1, 1 << k):
            inter = frame.full
            for i in range(k):
                if sel >> i & 1:
                    inter &= combo[i]
            rhs += c[inter] if sel.bit_count() % 2 else -c[inter]
        if c[union] < rhs:
            return combo
    return None


def is_monotone(c: Capacity) -> bool:
    return find_monotone_violation(c) is None


def is_superadditive(c: Capacity) -> bool:
    return find_superadditive_violation(c) is None


def is_k_monotone(c: Capacity, k: int) -> bool:
    if k == 2:
        return _find_2_monotone_violation(c) is None
    return find_k_monotone_violation(c, k) is None


def _find_2_monotone_violation(c: Capacity):
    # direct supermodularity scan; equivalent to the k=2 instance of Eq-style
    # enumeration but without building index multisets
    frame = c.frame
    masks = list(frame.subsets())
    for i, a in enumerate(masks):
        for b in masks[i:]:
            if c[a | b] + c[a & b] < c[a] + c[b]:
                return a, b
    return None


def is_belief(c: Capacity) -> bool:
    """Belief function test: every Mobius mass is nonnegative."""
    return all(v > 0 for v in c.mobius().masses.values())


PROPERTIES = ("monotone", "superadditive", "k_monotone", "belief", "coherent")


def check_property(c: Capacity, prop: str, k: int | None = None) -> bool:
    """Dispatch a structural property check by name.

    ``k_monotone`` checks the order-k inequality for sequences of exactly k
    subsets; callers iterate k = 2..n for the full hierarchy.  ``coherent``
    delegates to the credal module's envelope test.
    """
    if prop == "monotone":
        return is_monotone(c)
    if prop == "superadditive":
        return is_superadditive(c)
    if prop == "k_monotone":
        if k is None or k < 2:
            raise InvariantViolation("k_monotone requires an integer k >= 2")
        return is_k_monotone(c, k)
    if prop == "belief":
        return is_belief(c)
    if prop == "coherent":
        from . import credal

        return credal.check_coherent(c)
    raise InvariantViolation(f"unknown property {prop!r}; expected one of {PROPERTIES}")


@dataclass(frozen=True)
class DempsterModel:
    """Auxiliary frame Y, positive probability u on Y, and a compatibility
    map gamma sending each y to a nonempty subset of X."""

    x_frame: Frame
    y_frame: Frame
    u: dict[str, Fraction]
    gamma: dict[str, int]

    def __post_init__(self):
        u = {}
        gamma = {}
        for y in self.y_frame.labels:
            if y not in self.u:
                raise InvariantViolation(f"auxiliary outcome {y!r} has no u-value")
            if y not in self.gamma:
                raise InvariantViolation(f"auxiliary outcome {y!r} has no compatibility set")
            uv = as_fraction(self.u[y])
            if uv <= 0:
                raise InvariantViolation(f"u({y}) = {uv} must be positive")
            mask = self.gamma[y]
            self.x_frame._check_mask(mask)
            if mask == 0:
                raise InvariantViolation(f"gamma({y}) must be nonempty")
            u[y] = uv
            gamma[y] = mask
        extra = set(self.u) - set(self.y_frame.labels)
        if extra:
            raise InvariantViolation(f"u assigns values to unknown outcomes {sorted(extra)}")
        extra = set(self.gamma) - set(self.y_frame.labels)
        if extra:
            raise InvariantViolation(f"gamma assigns sets to unknown outcomes {sorted(extra)}")
        if sum(u.values()) != 1:
            raise InvariantViolation(f"u must sum to 1, got {sum(u.values())}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "gamma", gamma)


def project_dempster(model: DempsterModel) -> tuple[SignedMassFunction, Capacity, Capacity]:
    """Project a Dempster model to its mass m, belief b, and upper a.

    m(E) collects u over {y : gamma(y) = E}; b is the zeta transform of m and
    must agree with the direct summation of u over {y : gamma(y) subseteq E};
    a is the conjugate of b and must agree with the summation over
    {y : gamma(y) meets E}.  Both cross-checks run on every call.
    """
    frame = model.x_frame
    acc: dict[int, Fraction] = {}
    for y, uy in model.u.items():
        g = model.gamma[y]
        acc[g] = acc.get(g, Fraction(0)) + uy
    m = SignedMassFunction(frame, acc)

    b = Capacity.from_mass(m)
    a = conjugate(b)
    for e in frame.subsets():
        direct_b = sum((uy for y, uy in model.u.items() if model.gamma[y] & ~e == 0), Fraction(0))
        direct_a = sum((uy for y, uy in model.u.items() if model.gamma[y] & e), Fraction(0))
        if b[e] != direct_b:
            raise InvariantViolation(
                f"belief projection mismatch at {frame.subset_str(e)}: "
                f"zeta gives {b[e]}, direct summation gives {direct_b}"
            )
        if a[e] != direct_a:
            raise InvariantViolation(
                f"upper projection mismatch at {frame.subset_str(e)}: "
                f"conjugate gives {a[e]}, direct summation gives {direct_a}"
            )
    return m, b, a
