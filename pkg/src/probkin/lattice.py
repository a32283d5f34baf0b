"""Finite frames, set functions, and the subset-lattice transforms.

Subsets of a frame are represented as integer bitmasks: element ``i`` of the
frame corresponds to bit ``i``, so the full frame on ``n`` elements is the
mask ``(1 << n) - 1``.  Every value is an exact :class:`fractions.Fraction`;
no operation in this module rounds.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import InvariantViolation

#: Hard cap on frame size; dense transforms are O(n * 2^n).
MAX_FRAME_SIZE = 16

RationalLike = int | str | Fraction


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, `p/q` strings and Fractions to an exact Fraction."""
    if isinstance(value, float):
        raise InvariantViolation(f"floating-point value {value!r} rejected; use exact rationals")
    return Fraction(value)


@dataclass(frozen=True)
class Frame:
    """An ordered finite universe of labeled outcomes.

    The label order is semantic: it fixes the bitmask encoding of subsets
    and every canonical ordering used for reports and serialization.
    """

    labels: tuple[str, ...]
    max_size: int = field(default=MAX_FRAME_SIZE, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= self.max_size:
            raise InvariantViolation(
                f"frame must have between 1 and {self.max_size} elements, got {len(labels)}"
            )
        if len(set(labels)) != len(labels):
            raise InvariantViolation(f"frame labels must be distinct: {labels}")
        for lab in labels:
            if not lab or not lab.isidentifier():
                raise InvariantViolation(f"frame label {lab!r} is not a valid identifier")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        """Bitmask of the whole frame."""
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        """Number of subsets, 2^n."""
        return 1 << self.n

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvariantViolation(f"unknown label {label!r} for frame {self.labels}") from None

    def mask_of(self, members) -> int:
        """Bitmask of a subset given by an iterable of labels or a `{a,b}` literal."""
        if isinstance(members, str):
            text = members.strip()
            if not (text.startswith("{") and text.endswith("}")):
                raise InvariantViolation(f"subset literal must look like '{{a,b}}', got {members!r}")
            inner = text[1:-1].strip()
            members = [part.strip() for part in inner.split(",")] if inner else []
        mask = 0
        for lab in members:
            mask |= 1 << self.index(lab)
        return mask

    def members(self, mask: int) -> tuple[str, ...]:
        self._check_mask(mask)
        return tuple(self.labels[i] for i in range(self.n) if mask >> i & 1)

    def subset_str(self, mask: int) -> str:
        """Canonical `{a,b}` literal for a bitmask."""
        return "{" + ",".join(self.members(mask)) + "}"

    def complement(self, mask: int) -> int:
        self._check_mask(mask)
        return self.full ^ mask

    def subsets(self) -> range:
        """All subset bitmasks in canonical (numeric) order."""
        return range(self.size)

    def singletons(self) -> list[int]:
        return [1 << i for i in range(self.n)]

    def _check_mask(self, mask: int):
        if not 0 <= mask <= self.full:
            raise InvariantViolation(f"bitmask {mask} out of range for frame of size {self.n}")


def subsets_of(mask: int):
    """Iterate all submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class SetFunction:
    """A dense table of exact rationals on every subset of a frame."""

    frame: Frame
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.frame.size:
            raise InvariantViolation(
                f"set function needs {self.frame.size} values, got {len(values)}"
            )

    @classmethod
    def from_map(cls, frame: Frame, assignments: dict[int, RationalLike], default=Fraction(0)):
        vals = [as_fraction(default)] * frame.size
        for mask, v in assignments.items():
            frame._check_mask(mask)
            vals[mask] = as_fraction(v)
        return cls(frame, tuple(vals))

    def __getitem__(self, mask: int) -> Fraction:
        return self.values[mask]

    def scaled(self, factor: RationalLike) -> "SetFunction":
        f = as_fraction(factor)
        return SetFunction(self.frame, tuple(v * f for v in self.values))

    def plus(self, other: "SetFunction") -> "SetFunction":
        if other.frame != self.frame:
            raise InvariantViolation("cannot add set functions on different frames")
        return SetFunction(self.frame, tuple(a + b for a, b in zip(self.values, other.values)))


@dataclass(frozen=True)
class SignedMassFunction:
    """Sparse map from focal subsets to nonzero rational masses.

    The empty set never carries mass.  Masses may be negative; the focal
    family is exactly the set of keys.
    """

    frame: Frame
    masses: dict[int, Fraction]

    def __post_init__(self):
        cleaned = {}
        for mask, v in self.masses.items():
            self.frame._check_mask(mask)
            fv = as_fraction(v)
            if mask == 0:
                if fv != 0:
                    raise InvariantViolation("mass on the empty set is forbidden")
                continue
            if fv != 0:
                cleaned[mask] = fv
        object.__setattr__(self, "masses", cleaned)

    def __getitem__(self, mask: int) -> Fraction:
        return self.masses.get(mask, Fraction(0))

    @property
    def focal_sets(self) -> list[int]:
        """Focal family in canonical (numeric bitmask) order."""
        return sorted(self.masses)

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self.masses.values())


def _dense_int_table(values: list[Fraction]) -> tuple[list[int], int]:
    # Common-denominator integerization: the in-place transforms then run on
    # machine/big ints, which is roughly 50x faster than Fraction arithmetic.
    den = lcm(*(v.denominator for v in values)) if values else 1
    ints = [v.numerator * (den // v.denominator) for v in values]
    return ints, den


def mobius_transform(c: SetFunction) -> SignedMassFunction:
    """Inclusion-exclusion inverse of a set function.

    m(E) = sum over H subseteq E of (-1)^|E - H| c(H), computed by the
    in-place O(n 2^n) recurrence rather than the quartic double sum.
    Zero results are omitted from the sparse output.
    """
    n = c.frame.n
    ints, den = _dense_int_table(list(c.values))
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                ints[mask] -= ints[mask ^ bit]
    masses = {mask: Fraction(ints[mask], den) for mask in range(1, 1 << n) if ints[mask]}
    if ints[0]:
        # m(empty) = c(empty); a nonzero value cannot be represented as a mass.
        raise InvariantViolation(
            f"set function has value {Fraction(ints[0], den)} at the empty set; "
            "its Mobius transform would put mass on the empty set"
        )
    return SignedMassFunction(c.frame, masses)


def zeta_transform(m: SignedMassFunction) -> SetFunction:
    """Subset summation c(A) = sum over E subseteq A of m(E); inverse of Mobius."""
    n = m.frame.n
    dense = [Fraction(0)] * (1 << n)
    for mask, v in m.masses.items():
        dense[mask] = v
    ints, den = _dense_int_table(dense)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                ints[mask] += ints[mask ^ bit]
    return SetFunction(m.frame, tuple(Fraction(v, den) for v in ints))


def naive_mobius(c: SetFunction) -> SignedMassFunction:
    """Literal double-sum evaluation of the Mobius transform (test oracle)."""
    masses = {}
    for e in c.frame.subsets():
        acc = Fraction(0)
        for h in subsets_of(e):
            acc += (-1) ** (e ^ h).bit_count() * c[h]
        if e != 0 and acc != 0:
            masses[e] = acc
    return SignedMassFunction(c.frame, masses)


def naive_zeta(m: SignedMassFunction) -> SetFunction:
    """Literal subset-sum evaluation of the zeta transform (test oracle)."""
    vals = []
    for a in m.frame.subsets():
        vals.append(sum((m[e] for e in subsets_of(a)), Fraction(0)))
    return SetFunction(m.frame, tuple(vals))
