"""Exact optimization over dominating-measure polytopes.

The credal set of a capacity c is the polytope of probability measures q
with q(A) >= c(A) on every subset.  Envelope values, coherence, conditional
envelopes (via the Charnes-Cooper substitution) and the bracketed revision
procedure all reduce to exact rational linear programs.  Programs whose
constraint count is exponential in the frame size are solved through their
duals, which have one row per measure coordinate.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .capacity import Capacity, DempsterModel, is_k_monotone
from .errors import Infeasible, InvariantViolation, UndefinedOperation
from .kinematics import ProbabilityMeasure
from .lattice import Frame
from .simplex import EQ, GE, LE, LinearProgram, LPSolution, SimplexSolver, solve_lp

_VERTEX_FRAME_CAP = 9  # n! orderings; 9! is the desk-scale ceiling


def _indicator(frame: Frame, mask: int, size: int | None = None) -> list[Fraction]:
    size = frame.n if size is None else size
    row = [Fraction(0)] * size
    for i in range(frame.n):
        if mask >> i & 1:
            row[i] = Fraction(1)
    return row


def _domination_rows(c: Capacity, size: int | None = None) -> list:
    """Constraint rows of the credal polytope in measure coordinates.

    Rows with c(B) <= 0 are implied by nonnegativity and are presolved away;
    the feasible set is unchanged.
    """
    frame = c.frame
    rows = [(_indicator(frame, frame.full, size), EQ, Fraction(1))]
    for b in frame.subsets():
        if b in (0, frame.full):
            continue
        if c[b] > 0:
            rows.append((_indicator(frame, b, size), GE, c[b]))
    return rows


def solve_via_dual(lp: LinearProgram) -> LPSolution:
    """Solve min c.x, rows in {>=, =}, x >= 0 through its dual.

    Intended for programs with few variables and many rows: the dual tableau
    has one row per primal variable.  The primal witness is recovered from
    the dual's multipliers and re-verified exactly against the primal before
    being returned; a dual unbounded ray converts to a Farkas certificate of
    primal infeasibility.
    """
    m = len(lp.rows)
    n = lp.n_vars
    if lp.maximize:
        raise InvariantViolation("solve_via_dual expects a minimization")
    cols = []  # dual variable -> (primal row, sign); equality rows split
    for i, (_, rel, _) in enumerate(lp.rows):
        if rel == GE:
            cols.append((i, 1))
        elif rel == EQ:
            cols.append((i, 1))
            cols.append((i, -1))
        else:
            raise InvariantViolation("solve_via_dual expects >= or = rows")
    d_rows = []
    for j in range(n):
        coeffs = [sign * lp.rows[i][0][j] for (i, sign) in cols]
        d_rows.append((coeffs, LE, Fraction(lp.objective[j])))
    d_obj = [sign * Fraction(lp.rows[i][2]) for (i, sign) in cols]
    dual = LinearProgram(len(cols), d_rows, d_obj, maximize=True)
    sol = solve_lp(dual)
    if sol.status == "unbounded":
        ray = sol.certificate["ray"]
        mult = [Fraction(0)] * m
        for (i, sign), r in zip(cols, ray):
            mult[i] += sign * r
        raise Infeasible(
            "constraint set is empty", certificate={"row_multipliers": tuple(mult)}
        )
    if sol.status != "optimal":
        raise InvariantViolation("dual program unexpectedly infeasible")
    for x in (sol.duals, tuple(-d for d in sol.duals)):
        if _verifies(lp, x, sol.value):
            return LPSolution(status="optimal", value=sol.value, x=x, duals=None)
    raise InvariantViolation("primal witness recovery failed strong-duality check")


def _verifies(lp: LinearProgram, x, value) -> bool:
    if any(v < 0 for v in x):
        return False
    for coeffs, rel, rhs in lp.rows:
        lhs = sum((c * v for c, v in zip(coeffs, x) if c), Fraction(0))
        if rel == GE and lhs < rhs:
            return False
        if rel == EQ and lhs != rhs:
            return False
    return sum((c * v for c, v in zip(lp.objective, x) if c), Fraction(0)) == value


@dataclass(frozen=True)
class CredalSet:
    """The polytope of probability measures dominating a capacity."""

    capacity: Capacity

    def is_empty(self) -> bool:
        lp = LinearProgram(
            self.capacity.frame.n,
            _domination_rows(self.capacity),
            [Fraction(0)] * self.capacity.frame.n,
        )
        try:
            solve_via_dual(lp)
        except Infeasible:
            return True
        return False

    def contains(self, p: ProbabilityMeasure) -> bool:
        if p.frame != self.capacity.frame:
            raise InvariantViolation("measure lives on a different frame")
        return all(p.of(a) >= self.capacity[a] for a in self.capacity.frame.subsets())


def envelope_value(c: Capacity, a: int) -> Fraction:
    """Exact minimum of q(A) over the credal set of c."""
    frame = c.frame
    frame._check_mask(a)
    lp = LinearProgram(frame.n, _domination_rows(c), _indicator(frame, a))
    sol = solve_via_dual(lp)
    return sol.value


def envelope_witness(c: Capacity, a: int) -> tuple[Fraction, ProbabilityMeasure]:
    """Envelope value together with a minimizing measure."""
    frame = c.frame
    frame._check_mask(a)
    lp = LinearProgram(frame.n, _domination_rows(c), _indicator(frame, a))
    sol = solve_via_dual(lp)
    return sol.value, ProbabilityMeasure(frame, sol.x)


def check_coherent(c: Capacity) -> bool:
    """True iff the credal set is nonempty and its lower envelope reproduces
    c on every subset."""
    try:
        for a in c.frame.subsets():
            if a in (0, c.frame.full):
                continue
            if envelope_value(c, a) != c[a]:
                return False
    except Infeasible:
        return False
    return True


def conditional_envelope(c: Capacity, a: int, e: int) -> Fraction:
    """Exact infimum of q(A | E) over dominating q with q(E) > 0.

    Solved after the Charnes-Cooper substitution z = t q, t = 1/q(E): the
    closed feasible set in (z, t) realizes the infimum of the open condition
    q(E) > 0, so conditioning events of lower probability zero are supported
    as long as the conjugate gives E positive upper probability.
    """
    return _CharnesCooper(c, e).value_for(a)


class _CharnesCooper:
    """One conditioning event, many queried subsets; rows are shared."""

    def __init__(self, c: Capacity, e: int):
        frame = c.frame
        frame._check_mask(e)
        if c[frame.complement(e)] >= 1:
            raise UndefinedOperation(
                f"conditioning on {frame.subset_str(e)} undefined: the complement "
                f"already has lower probability {c[frame.complement(e)]}"
            )
        self.c = c
        self.e = e
        n = frame.n
        size = n + 1  # z coordinates plus the scale variable t
        rows = [(_indicator(frame, e, size), EQ, Fraction(1))]
        full_row = _indicator(frame, frame.full, size)
        full_row[n] = Fraction(-1)
        rows.append((full_row, EQ, Fraction(0)))
        for b in frame.subsets():
            if b in (0, frame.full) or c[b] == 0:
                continue
            row = _indicator(frame, b, size)
            row[n] = -c[b]
            rows.append((row, GE, Fraction(0)))
        self.rows = rows
        self.size = size

    def value_for(self, a: int) -> Fraction:
        frame = self.c.frame
        frame._check_mask(a)
        objective = _indicator(frame, a & self.e, self.size)
        lp = LinearProgram(self.size, self.rows, objective)
        return solve_via_dual(lp).value


def conditional_envelope_table(c: Capacity, e: int) -> dict[int, Fraction]:
    """Conditional envelope values for every subset A at a fixed event E."""
    program = _CharnesCooper(c, e)
    return {a: program.value_for(a) for a in c.frame.subsets()}


def core_vertices_2monotone(c: Capacity) -> list[ProbabilityMeasure]:
    """Extreme points of the credal set of a 2-monotone capacity.

    One candidate per ordering of the frame: the measure giving each element
    the capacity increment along the chain of initial segments.  Duplicates
    are removed and the result is sorted by weight vector.
    """
    frame = c.frame
    if not is_k_monotone(c, 2):
        raise InvariantViolation("core vertex enumeration requires a 2-monotone capacity")
    if frame.n > _VERTEX_FRAME_CAP:
        raise InvariantViolation(
            f"vertex enumeration is factorial; frame size {frame.n} exceeds "
            f"{_VERTEX_FRAME_CAP}"
        )
    seen = set()
    for order in permutations(range(frame.n)):
        weights = [Fraction(0)] * frame.n
        mask = 0
        prev = Fraction(0)
        for idx in order:
            mask |= 1 << idx
            cur = c[mask]
            weights[idx] = cur - prev
            prev = cur
        seen.add(tuple(weights))
    return [ProbabilityMeasure(frame, w) for w in sorted(seen)]


def joint_marginal_envelope(model: DempsterModel, a: int) -> Fraction:
    """Exact minimum of Q(A x Y) over joints compatible with the model."""
    model.x_frame._check_mask(a)
    index = {}
    for j, y in enumerate(model.y_frame.labels):
        for i in range(model.x_frame.n):
            if model.gamma[y] >> i & 1:
                index[(i, j)] = len(index)
    nv = len(index)
    rows = []
    for j, y in enumerate(model.y_frame.labels):
        coeffs = [Fraction(0)] * nv
        for i in range(model.x_frame.n):
            if (i, j) in index:
                coeffs[index[(i, j)]] = Fraction(1)
        rows.append((coeffs, EQ, model.u[y]))
    objective = [Fraction(0)] * nv
    for (i, j), k in index.items():
        if a >> i & 1:
            objective[k] = Fraction(1)
    sol = solve_lp(LinearProgram(nv, rows, objective))
    if sol.status != "optimal":
        raise InvariantViolation(f"compatibility polytope solve returned {sol.status}")
    return sol.value


class DominationOracle:
    """Warm-started linear minimization over a credal set.

    Built once per capacity; successive calls with new objectives re-optimize
    from the previous basis.  Used as the subproblem solver for the
    conditional-gradient information projection.
    """

    def __init__(self, c: Capacity):
        self.frame = c.frame
        self.capacity = c
        lp = LinearProgram(
            self.frame.n, _domination_rows(c), [Fraction(0)] * self.frame.n
        )
        self.solver = SimplexSolver(lp)
        first = self.solver.solve()
        if first.status == "infeasible":
            raise Infeasible(
                "credal set is empty", certificate=first.certificate
            )

    def minimize(self, objective) -> tuple[Fraction, ...]:
        sol = self.solver.resolve([Fraction(v) for v in objective])
        if sol.status != "optimal":
            raise InvariantViolation(f"domination oracle returned {sol.status}")
        return sol.x

    def positive_feasible_point(self) -> tuple[Fraction, ...]:
        """A feasible point maximizing the least coordinate."""
        point, _ = positive_on_family_point(self.capacity, self.frame.singletons())
        return point


def positive_on_family_point(c: Capacity, family) -> tuple[tuple[Fraction, ...], Fraction]:
    """Maximize the least q-value over a family of subsets, within the core.

    Returns (point, slack); slack > 0 means the point is strictly positive on
    every member of the family.  Raises Infeasible when the core is empty.
    """
    frame = c.frame
    size = frame.n + 1  # q coordinates plus the min-slack variable
    rows = _domination_rows(c, size)
    for member in family:
        frame._check_mask(member)
        row = _indicator(frame, member, size)
        row[frame.n] = Fraction(-1)
        rows.append((row, GE, Fraction(0)))
    objective = [Fraction(0)] * size
    objective[frame.n] = Fraction(-1)  # maximize t
    sol = solve_via_dual(LinearProgram(size, rows, objective))
    return sol.x[: frame.n], sol.x[frame.n]


# -- the bracketed revision procedure -----------------------------------------

EPSILON_MIX = Fraction(1, 2**20)


@dataclass(frozen=True)
class BracketEntry:
    lower: Fraction
    best_found: Fraction
    witness: tuple[Fraction, ...]


@dataclass(frozen=True)
class EnvelopeRevisionReport:
    """Per-subset certified brackets for the revision of one lower probability
    by another.  The true revised value lies in [lower, best_found]."""

    frame: Frame
    entries: dict[int, BracketEntry]
    epsilon: Fraction
    positive_point: tuple[Fraction, ...]

    def bracket(self, a: int) -> tuple[Fraction, Fraction]:
        entry = self.entries[a]
        return entry.lower, entry.best_found


def _revision_objective(weights, a: int, m2) -> Fraction:
    acc = Fraction(0)
    for e, me in m2.masses.items():
        pe = Fraction(0)
        pae = Fraction(0)
        for i, w in enumerate(weights):
            if e >> i & 1:
                pe += w
                if a >> i & 1:
                    pae += w
        acc += me * pae / pe
    return acc


def envelope_revise(l1: Capacity, l2: Capacity) -> EnvelopeRevisionReport:
    """Bracket the infimum, over core measures positive on the focal family
    of l2, of the generalized revision mixture.

    The objective is a sum of ratios and is not concave, so the report is a
    certified bracket: the lower bound mixes per-term conditional envelopes
    (conjugate envelopes under negative masses keep it valid) and the upper
    end is the best value over core vertices, their interior mixtures, and
    deterministic coordinate descent from the three best starts.

    Priors that are merely coherent (not 2-monotone) would need general
    polytope vertex enumeration instead of the permutation skeleton; that is
    a documented extension point, not supported here.
    """
    if l1.frame != l2.frame:
        raise InvariantViolation("capacities live on different frames")
    frame = l1.frame
    if not is_k_monotone(l1, 2):
        raise InvariantViolation("revision requires a 2-monotone prior lower probability")
    if not is_k_monotone(l2, 2):
        raise InvariantViolation("revision requires a 2-monotone evidence bound")
    m2 = l2.mobius()
    focal2 = m2.focal_sets

    try:
        p_plus, slack = positive_on_family_point(l1, focal2)
    except Infeasible as exc:
        raise UndefinedOperation("prior credal set is empty") from exc
    if slack <= 0:
        raise UndefinedOperation(
            "no dominating measure is positive on every focal element of the bound"
        )

    vertices = [tuple(v.weights) for v in core_vertices_2monotone(l1)]
    eval_points = []
    for v in vertices:
        if all(sum(v[i] for i in range(frame.n) if e >> i & 1) > 0 for e in focal2):
            eval_points.append(v)
        mixed = tuple(
            (1 - EPSILON_MIX) * v[i] + EPSILON_MIX * p_plus[i] for i in range(frame.n)
        )
        eval_points.append(mixed)
    eval_points.append(tuple(p_plus))

    # per-term envelope bounds, shared across subsets
    lower_tables = {}
    upper_tables = {}
    for e in focal2:
        if m2[e] > 0:
            lower_tables[e] = conditional_envelope_table(l1, e)
        else:
            upper_tables[e] = conditional_envelope_table(l1, e)  # of the complement below

    entries = {}
    for a in frame.subsets():
        lower = Fraction(0)
        for e in focal2:
            me = m2[e]
            if me > 0:
                lower += me * lower_tables[e][a]
            else:
                lower += me * (1 - upper_tables[e][frame.complement(a)])
        scored = sorted(
            ((_revision_objective(pt, a, m2), pt) for pt in eval_points),
            key=lambda item: (item[0], item[1]),
        )
        best_val, best_pt = scored[0]
        for _, start in scored[:3]:
            val, pt = _coordinate_descent(l1, focal2, m2, a, start)
            if val < best_val:
                best_val, best_pt = val, pt
        if lower > best_val:
            raise InvariantViolation(
                f"bracket inversion at {frame.subset_str(a)}: {lower} > {best_val}"
            )
        entries[a] = BracketEntry(lower, best_val, best_pt)
    return EnvelopeRevisionReport(frame, entries, EPSILON_MIX, tuple(p_plus))


def _feasible(l1: Capacity, focal2, weights) -> bool:
    if any(w < 0 for w in weights):
        return False
    frame = l1.frame
    for b in frame.subsets():
        if b in (0, frame.full):
            continue
        if l1[b] > 0 and sum(weights[i] for i in range(frame.n) if b >> i & 1) < l1[b]:
            return False
    for e in focal2:
        if sum(weights[i] for i in range(frame.n) if e >> i & 1) <= 0:
            return False
    return True


def _coordinate_descent(l1, focal2, m2, a, start, max_accepts: int = 200):
    """Deterministic pairwise mass-shift descent, step-halving to EPSILON_MIX."""
    n = l1.frame.n
    current = list(start)
    value = _revision_objective(current, a, m2)
    step = Fraction(1, 8)
    accepts = 0
    while step >= EPSILON_MIX:
        improved = True
        while improved and accepts < max_accepts:
            improved = False
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    cand = list(current)
                    cand[i] += step
                    cand[j] -= step
                    if not _feasible(l1, focal2, cand):
                        continue
                    cand_val = _revision_objective(cand, a, m2)
                    if cand_val < value:
                        current, value = cand, cand_val
                        improved = True
                        accepts += 1
        step /= 2
    return value, tuple(current)
