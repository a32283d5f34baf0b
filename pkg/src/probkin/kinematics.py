"""Probability measures and the generalized revision rules.

The central operation mixes prior conditionals over the focal family of a
(possibly signed) mass function: q(A) = sum over focal E of m(E) p(A|E).
With pairwise-disjoint focal sets this is classical Jeffrey revision; with a
signed mass obtained from a capacity it may leave the probability simplex,
which callers observe through the validity flag rather than an exception.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .capacity import Capacity, DempsterModel
from .errors import InvariantViolation, UndefinedOperation
from .lattice import Frame, RationalLike, SignedMassFunction, as_fraction


@dataclass(frozen=True)
class ProbabilityMeasure:
    """Additive probability on a frame, stored as exact singleton weights."""

    frame: Frame
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.frame.n:
            raise InvariantViolation("one weight per frame element required")
        if any(w < 0 for w in weights):
            raise InvariantViolation("probability weights must be nonnegative")
        if sum(weights) != 1:
            raise InvariantViolation(f"probability weights must sum to 1, got {sum(weights)}")

    @classmethod
    def from_map(cls, frame: Frame, weights: dict[str, RationalLike]) -> "ProbabilityMeasure":
        vals = [Fraction(0)] * frame.n
        for lab, w in weights.items():
            vals[frame.index(lab)] = as_fraction(w)
        return cls(frame, tuple(vals))

    @classmethod
    def uniform(cls, frame: Frame) -> "ProbabilityMeasure":
        return cls(frame, tuple(Fraction(1, frame.n) for _ in range(frame.n)))

    def of(self, mask: int) -> Fraction:
        self.frame._check_mask(mask)
        return sum((self.weights[i] for i in range(self.frame.n) if mask >> i & 1), Fraction(0))

    def cond(self, a: int, e: int) -> Fraction:
        """Conditional probability p(A | E); undefined when p(E) = 0."""
        pe = self.of(e)
        if pe == 0:
            raise UndefinedOperation(
                f"conditioning on {self.frame.subset_str(e)} of probability zero"
            )
        return self.of(a & e) / pe

    def to_capacity(self) -> Capacity:
        from .lattice import SetFunction

        vals = tuple(self.of(mask) for mask in self.frame.subsets())
        return Capacity(SetFunction(self.frame, vals))


@dataclass(frozen=True)
class JeffreySpec:
    """A partition of (part of) the frame with positive weights summing to 1."""

    frame: Frame
    cells: tuple[int, ...]
    cell_weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.cell_weights)
        object.__setattr__(self, "cell_weights", weights)
        if len(self.cells) != len(weights) or not self.cells:
            raise InvariantViolation("need one positive weight per partition cell")
        seen = 0
        for cell in self.cells:
            self.frame._check_mask(cell)
            if cell == 0:
                raise InvariantViolation("partition cells must be nonempty")
            if seen & cell:
                raise InvariantViolation("partition cells must be pairwise disjoint")
            seen |= cell
        if any(w <= 0 for w in weights):
            raise InvariantViolation("partition weights must be positive")
        if sum(weights) != 1:
            raise InvariantViolation(f"partition weights must sum to 1, got {sum(weights)}")

    def to_mass(self) -> SignedMassFunction:
        return SignedMassFunction(self.frame, dict(zip(self.cells, self.cell_weights)))


@dataclass(frozen=True)
class RevisedMeasure:
    """Outcome of the generalized revision rule: an additive set function
    that sums to 1 but may carry negative weights when the bounding capacity
    is not monotone.  ``is_probability`` flags validity."""

    frame: Frame
    weights: tuple[Fraction, ...]

    @property
    def is_probability(self) -> bool:
        return all(w >= 0 for w in self.weights)

    def of(self, mask: int) -> Fraction:
        self.frame._check_mask(mask)
        return sum((self.weights[i] for i in range(self.frame.n) if mask >> i & 1), Fraction(0))

    def to_probability(self) -> ProbabilityMeasure:
        if not self.is_probability:
            neg = [self.frame.labels[i] for i, w in enumerate(self.weights) if w < 0]
            raise InvariantViolation(f"revision is not a probability; negative at {neg}")
        return ProbabilityMeasure(self.frame, self.weights)


def kinematic_revise(p: ProbabilityMeasure, m: SignedMassFunction) -> RevisedMeasure:
    """Mix prior conditionals over the focal family of m.

    Requires p(E) > 0 on every focal E.  The result is always additive with
    total mass 1; it is a probability measure whenever the capacity induced
    by m is monotone, a fact the caller checks via ``is_probability``.
    """
    if p.frame != m.frame:
        raise InvariantViolation("prior and mass live on different frames")
    if m.total() != 1:
        raise InvariantViolation(f"masses must sum to 1 to define a revision, got {m.total()}")
    n = p.frame.n
    out = [Fraction(0)] * n
    for e, me in sorted(m.masses.items()):
        pe = p.of(e)
        if pe == 0:
            raise UndefinedOperation(
                f"prior is zero on focal element {p.frame.subset_str(e)}"
            )
        scale = me / pe
        for i in range(n):
            if e >> i & 1:
                out[i] += scale * p.weights[i]
    return RevisedMeasure(p.frame, tuple(out))


def jeffrey_revise(p: ProbabilityMeasure, spec: JeffreySpec) -> ProbabilityMeasure:
    """Classical partition-based revision, evaluated directly cell by cell."""
    if p.frame != spec.frame:
        raise InvariantViolation("prior and partition live on different frames")
    out = [Fraction(0)] * p.frame.n
    for cell, mu in zip(spec.cells, spec.cell_weights):
        pe = p.of(cell)
        if pe == 0:
            raise UndefinedOperation(f"prior is zero on cell {p.frame.subset_str(cell)}")
        for i in range(p.frame.n):
            if cell >> i & 1:
                out[i] += mu * p.weights[i] / pe
    return ProbabilityMeasure(p.frame, tuple(out))


# -- joint measures over X x Y ------------------------------------------------


@dataclass(frozen=True)
class JointMeasure:
    """Probability on the product of two frames; weights[i][j] pairs element i
    of the X frame with element j of the Y frame."""

    x_frame: Frame
    y_frame: Frame
    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(w) for w in row) for row in self.weights)
        object.__setattr__(self, "weights", rows)
        if len(rows) != self.x_frame.n or any(len(r) != self.y_frame.n for r in rows):
            raise InvariantViolation("joint weights must form an |X| x |Y| table")
        total = sum(sum(r, Fraction(0)) for r in rows)
        if any(w < 0 for r in rows for w in r):
            raise InvariantViolation("joint weights must be nonnegative")
        if total != 1:
            raise InvariantViolation(f"joint weights must sum to 1, got {total}")

    def of(self, x_mask: int, y_mask: int) -> Fraction:
        """Probability of the rectangle A x B."""
        self.x_frame._check_mask(x_mask)
        self.y_frame._check_mask(y_mask)
        acc = Fraction(0)
        for i in range(self.x_frame.n):
            if x_mask >> i & 1:
                for j in range(self.y_frame.n):
                    if y_mask >> j & 1:
                        acc += self.weights[i][j]
        return acc

    def x_marginal(self) -> ProbabilityMeasure:
        return ProbabilityMeasure(
            self.x_frame, tuple(sum(row, Fraction(0)) for row in self.weights)
        )

    def y_marginal(self) -> ProbabilityMeasure:
        cols = tuple(
            sum((self.weights[i][j] for i in range(self.x_frame.n)), Fraction(0))
            for j in range(self.y_frame.n)
        )
        return ProbabilityMeasure(self.y_frame, cols)


def canonical_joint(model: DempsterModel, p: ProbabilityMeasure) -> JointMeasure:
    """The joint measure Q(x, y) = u(y) p(x | gamma(y)).

    By construction Q is compatible with the model and conserves the prior
    conditionals given each evidence fiber; its X-marginal coincides with the
    generalized revision of p by the model's mass function.
    """
    if p.frame != model.x_frame:
        raise InvariantViolation("prior frame does not match the model's X frame")
    cols = []
    for y in model.y_frame.labels:
        g = model.gamma[y]
        if p.of(g) == 0:
            raise UndefinedOperation(
                f"prior is zero on gamma({y}) = {model.x_frame.subset_str(g)}"
            )
    rows = []
    for i in range(model.x_frame.n):
        row = []
        for j, y in enumerate(model.y_frame.labels):
            g = model.gamma[y]
            if g >> i & 1:
                row.append(model.u[y] * p.weights[i] / p.of(g))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return JointMeasure(model.x_frame, model.y_frame, tuple(rows))


@dataclass(frozen=True)
class JointReport:
    compatible: bool
    conserving: bool
    skipped_cells: tuple[str, ...]
    failures: tuple[str, ...]


def verify_joint(q: JointMeasure, model: DempsterModel, p: ProbabilityMeasure) -> JointReport:
    """Check compatibility (Y-marginal equals u, support inside the graph of
    gamma) and conservation of prior conditionals on every focal fiber with
    positive mass.  Cells where either conditional is undefined are skipped
    and reported, not failed."""
    if q.x_frame != model.x_frame or q.y_frame != model.y_frame:
        raise InvariantViolation("joint frames do not match the model")
    failures = []
    y_marg = q.y_marginal()
    for j, y in enumerate(model.y_frame.labels):
        if y_marg.weights[j] != model.u[y]:
            failures.append(f"marginal({y}) = {y_marg.weights[j]} != u({y}) = {model.u[y]}")
    for i in range(model.x_frame.n):
        for j, y in enumerate(model.y_frame.labels):
            if not model.gamma[y] >> i & 1 and q.weights[i][j] != 0:
                failures.append(
                    f"mass {q.weights[i][j]} on ({model.x_frame.labels[i]},{y}) "
                    f"outside gamma({y})"
                )
    compatible = not failures

    conserving = True
    skipped = []
    fibers: dict[int, int] = {}
    for j, y in enumerate(model.y_frame.labels):
        fibers.setdefault(model.gamma[y], 0)
        fibers[model.gamma[y]] |= 1 << j
    frame = model.x_frame
    for e in sorted(fibers):
        e_star = fibers[e]
        q_estar = q.of(frame.full, e_star)
        if q_estar == 0:
            skipped.append(f"{frame.subset_str(e)}: evidence fiber has probability 0")
            continue
        if p.of(e) == 0:
            skipped.append(f"{frame.subset_str(e)}: prior conditional undefined")
            continue
        for a in frame.subsets():
            lhs = q.of(a, e_star) / q_estar
            rhs = p.cond(a, e)
            if lhs != rhs:
                conserving = False
                failures.append(
                    f"Q({frame.subset_str(a)} | fiber {frame.subset_str(e)}) = {lhs} "
                    f"!= p(.|E) = {rhs}"
                )
    return JointReport(compatible, conserving, tuple(skipped), tuple(failures))


# -- relative information and its constrained minimization --------------------


def relative_information(q: ProbabilityMeasure, p: ProbabilityMeasure) -> float:
    """I(q, p) = sum q(x) ln(q(x)/p(x)) in nats, with 0 ln 0 = 0."""
    if q.frame != p.frame:
        raise InvariantViolation("measures live on different frames")
    return relent_weights(q.weights, p.weights, q.frame)


def relent_weights(q_weights, p_weights, frame: Frame | None = None) -> float:
    """Relative information for raw weight sequences (exact or float)."""
    acc = 0.0
    for i, (qw, pw) in enumerate(zip(q_weights, p_weights)):
        if qw == 0:
            continue
        if pw == 0:
            where = frame.labels[i] if frame else f"index {i}"
            raise UndefinedOperation(
                f"relative information undefined: q positive but p zero at {where}"
            )
        acc += float(qw) * math.log(float(qw) / float(pw))
    return acc


@dataclass(frozen=True)
class MaxentResult:
    """Outcome of conditional-gradient minimization of relative information."""

    weights: tuple[float, ...]
    objective: float
    gap: float
    iterations: int
    converged: bool


_LOG_FLOOR = 1e-300


def _kl_gradient(qw, pw):
    return [math.log(max(q, _LOG_FLOOR) / p) + 1.0 for q, p in zip(qw, pw)]


def maxent_project(
    p: ProbabilityMeasure,
    b: Capacity,
    tol: float = 1e-9,
    max_iter: int = 100_000,
) -> MaxentResult:
    """Minimize I(q, p) over the polytope of probabilities dominating b.

    Conditional-gradient iteration: the linear subproblem is solved exactly
    by the credal module's LP kernel, objective and line search run in
    floating point, and the duality gap g . (q - s) certifies convergence.
    Raises when the constraint set is empty; non-convergence within the
    iteration cap is reported on the result, not raised.
    """
    from . import credal

    if p.frame != b.frame:
        raise InvariantViolation("prior and bound live on different frames")
    if any(w <= 0 for w in p.weights):
        raise InvariantViolation("maxent projection requires a strictly positive prior")
    n = p.frame.n
    pw = [float(w) for w in p.weights]

    oracle = credal.DominationOracle(b)
    start = oracle.positive_feasible_point()
    qw = [float(v) for v in start]

    best = None
    gap = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad = _kl_gradient(qw, pw)
        vertex = oracle.minimize(grad)
        sw = [float(v) for v in vertex]
        gap = sum(g * (a - b_) for g, a, b_ in zip(grad, qw, sw))
        obj = relent_weights(qw, pw)
        if best is None or obj < best[0]:
            best = (obj, list(qw), gap)
        if gap <= tol:
            return MaxentResult(tuple(qw), obj, gap, iterations, True)
        gamma = _line_search(qw, sw, pw)
        if gamma == 0.0:
            break  # numerically stuck; report the best iterate
        qw = [(1 - gamma) * a + gamma * b_ for a, b_ in zip(qw, sw)]
    obj, q_best, gap = best
    return MaxentResult(tuple(q_best), obj, gap, iterations, False)


def _line_search(qw, sw, pw, iters: int = 80) -> float:
    """Exact-to-float minimization of the KL objective along q -> s."""

    def deriv(gamma):
        acc = 0.0
        for q, s, p in zip(qw, sw, pw):
            v = (1 - gamma) * q + gamma * s
            acc += (s - q) * (math.log(max(v, _LOG_FLOOR) / p) + 1.0)
        return acc

    if deriv(1.0) <= 0:
        return 1.0
    lo, hi = 0.0, 1.0
    if deriv(0.0) >= 0:
        return 0.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if deriv(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return lo
