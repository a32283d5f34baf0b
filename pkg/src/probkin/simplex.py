"""Exact rational simplex kernel.

Dense tableau, two phases, Bland's anti-cycling rule throughout.  Every
coefficient is a Fraction and the solver returns exact optima, exact dual
values, and exact certificates (Farkas row multipliers for infeasibility,
an improving ray for unboundedness).  ``SimplexSolver.resolve`` re-optimizes
the same constraint set under a new objective from the previous basis, which
is what makes 2^n-objective envelope sweeps affordable.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation

GE, LE, EQ = ">=", "<=", "="

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LinearProgram:
    """min (or max) objective . x  subject to rows, x >= 0."""

    n_vars: int
    rows: list  # (coeffs: list[Fraction], rel: str, rhs: Fraction)
    objective: list
    maximize: bool = False

    def check(self):
        if len(self.objective) != self.n_vars:
            raise InvariantViolation("objective length does not match variable count")
        for coeffs, rel, _ in self.rows:
            if len(coeffs) != self.n_vars:
                raise InvariantViolation("constraint row length does not match variable count")
            if rel not in (GE, LE, EQ):
                raise InvariantViolation(f"unknown relation {rel!r}")


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple | None = None
    duals: tuple | None = None  # one multiplier per original row
    certificate: dict | None = None


class SimplexSolver:
    """Two-phase primal simplex over exact rationals."""

    def __init__(self, lp: LinearProgram):
        lp.check()
        self.lp = lp
        self.n = lp.n_vars
        self._build()

    # -- tableau construction -------------------------------------------------

    def _build(self):
        n = self.n
        self.orig_m = len(self.lp.rows)
        rows = []
        rels = []
        rhs = []
        flipped = []
        for coeffs, rel, b in self.lp.rows:
            coeffs = [Fraction(v) for v in coeffs]
            b = Fraction(b)
            if b < 0:  # keep right-hand sides nonnegative
                coeffs = [-v for v in coeffs]
                b = -b
                rel = {GE: LE, LE: GE, EQ: EQ}[rel]
                flipped.append(True)
            else:
                flipped.append(False)
            rows.append(coeffs)
            rels.append(rel)
            rhs.append(b)
        m = len(rows)
        n_slack = sum(1 for r in rels if r != EQ)
        self.m = m
        self.total = n + n_slack + m  # one artificial slot reserved per row
        self.art_start = n + n_slack
        self.rhs_col = self.total

        tab = []
        self.basis = [0] * m
        self.ident_col = []  # column that started as +e_i, for dual extraction
        self.flipped = flipped
        self.orig_index = list(range(m))
        slack_idx = 0
        for i in range(m):
            row = rows[i] + [_ZERO] * (n_slack + m) + [rhs[i]]
            if rels[i] != EQ:
                col = n + slack_idx
                row[col] = _ONE if rels[i] == LE else -_ONE
                slack_idx += 1
            art = self.art_start + i
            if rels[i] == LE:
                self.basis[i] = col
                self.ident_col.append(col)
            else:
                row[art] = _ONE
                self.basis[i] = art
                self.ident_col.append(art)
            tab.append(row)
        self.tab = tab
        self.is_artificial = [j >= self.art_start for j in range(self.total)]
        for i in range(m):
            if rels[i] == LE:
                self.is_artificial[self.art_start + i] = False  # slot unused
        self.phase1_done = False

    # -- core pivoting --------------------------------------------------------

    def _pivot(self, i, j, red):
        tab = self.tab
        row = tab[i]
        piv = row[j]
        if piv != 1:
            inv = _ONE / piv
            for l in range(self.total + 1):
                if row[l]:
                    row[l] *= inv
        nz = [l for l in range(self.total + 1) if row[l]]
        for k in range(self.m):
            if k == i:
                continue
            f = tab[k][j]
            if f:
                rk = tab[k]
                for l in nz:
                    rk[l] -= f * row[l]
        f = red[j]
        if f:
            for l in nz:
                if l < self.total:
                    red[l] -= f * row[l]
        self.basis[i] = j

    def _reduced_costs(self, cost):
        red = list(cost)
        for i in range(self.m):
            cb = cost[self.basis[i]]
            if cb:
                row = self.tab[i]
                for l in range(self.total):
                    if row[l]:
                        red[l] -= cb * row[l]
        return red

    def _iterate(self, red, allowed):
        """Bland pivoting until optimal or unbounded; returns a ray if unbounded."""
        m = self.m
        tab = self.tab
        while True:
            enter = -1
            for j in range(self.total):
                if allowed[j] and red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return None
            leave = -1
            best = None
            best_basis = None
            for i in range(m):
                a = tab[i][enter]
                if a > 0:
                    ratio = tab[i][self.rhs_col] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < best_basis):
                        best = ratio
                        best_basis = self.basis[i]
                        leave = i
            if leave < 0:
                ray = [_ZERO] * self.total
                ray[enter] = _ONE
                for i in range(m):
                    ray[self.basis[i]] = -tab[i][enter]
                return ray
            self._pivot(leave, enter, red)

    # -- public solve ---------------------------------------------------------

    def solve(self) -> LPSolution:
        cost1 = [_ONE if self.is_artificial[j] else _ZERO for j in range(self.total)]
        allowed = [True] * self.total
        red = self._reduced_costs(cost1)
        self._iterate(red, allowed)  # phase 1 is bounded below by 0
        infeas = self._objective_value(cost1)
        if infeas > 0:
            return LPSolution(
                status="infeasible",
                certificate={
                    "residual": infeas,
                    "row_multipliers": tuple(self._duals(cost1)),
                },
            )
        self._evict_artificials()
        self.phase1_done = True
        return self._optimize(self.lp.objective, self.lp.maximize)

    def resolve(self, objective, maximize=False) -> LPSolution:
        """Re-optimize with a new objective from the current feasible basis."""
        if not self.phase1_done:
            raise InvariantViolation("resolve requires a completed initial solve")
        if len(objective) != self.n:
            raise InvariantViolation("objective length does not match variable count")
        return self._optimize(objective, maximize)

    def _optimize(self, objective, maximize) -> LPSolution:
        sign = -1 if maximize else 1
        cost = [sign * Fraction(v) for v in objective] + [_ZERO] * (self.total - self.n)
        allowed = [not self.is_artificial[j] for j in range(self.total)]
        red = self._reduced_costs(cost)
        ray = self._iterate(red, allowed)
        if ray is not None:
            return LPSolution(status="unbounded", certificate={"ray": tuple(ray[: self.n])})
        value = self._objective_value(cost)
        x = self._primal()
        duals = self._duals(cost)
        return LPSolution(
            status="optimal",
            value=sign * value,
            x=tuple(x),
            duals=tuple(sign * y for y in duals),
        )

    # -- extraction -----------------------------------------------------------

    def _primal(self):
        x = [_ZERO] * self.n
        for i in range(self.m):
            if self.basis[i] < self.n:
                x[self.basis[i]] = self.tab[i][self.rhs_col]
        return x

    def _objective_value(self, cost):
        v = _ZERO
        for i in range(self.m):
            cb = cost[self.basis[i]]
            if cb:
                v += cb * self.tab[i][self.rhs_col]
        return v

    def _duals(self, cost):
        # y = c_B . B^-1; column ident_col[i] of the tableau holds B^-1 e_i.
        # Multipliers are reported against the rows as the caller stated them,
        # so sign-flipped rows flip back and dropped redundant rows get 0.
        ys = [_ZERO] * self.orig_m
        for i in range(self.m):
            col = self.ident_col[i]
            y = _ZERO
            for k in range(self.m):
                cb = cost[self.basis[k]]
                if cb:
                    v = self.tab[k][col]
                    if v:
                        y += cb * v
            orig = self.orig_index[i]
            ys[orig] = -y if self.flipped[orig] else y
        return ys

    def _evict_artificials(self):
        # swap basic artificials for any structural/slack column; a row with
        # no such column is redundant and is dropped
        cost_dummy = [_ZERO] * self.total
        drop = []
        for i in range(self.m):
            if self.basis[i] < self.art_start:
                continue
            row = self.tab[i]
            pivot_col = -1
            for j in range(self.art_start):
                if row[j]:
                    pivot_col = j
                    break
            if pivot_col < 0:
                drop.append(i)
            else:
                self._pivot(i, pivot_col, cost_dummy)
        for i in reversed(drop):
            del self.tab[i]
            del self.basis[i]
            del self.ident_col[i]
            del self.orig_index[i]
            self.m -= 1


def solve_lp(lp: LinearProgram) -> LPSolution:
    return SimplexSolver(lp).solve()
