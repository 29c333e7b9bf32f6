"""Exact linear feasibility checking and infeasible-path elimination.

Feasibility runs a phase-one simplex entirely in `Fraction` arithmetic with
Bland's anti-cycling rule, so answers near constraint boundaries (exactly
where pruning decides) are never corrupted by floating-point error.  Strict
inequalities are relaxed to non-strict before solving: pruning is therefore
conservative, keeping branches that are reachable only on a boundary of
measure zero but never discarding a feasible one.

Path pruning walks a diagram depth-first carrying the linear constraints
asserted so far (plus the declared box bounds).  Nonlinear and boolean
decisions contribute nothing and are never pruned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from .poly import IneqDec, Polynomial

if TYPE_CHECKING:  # pragma: no cover
    from .xadd import NodeRef, XaddStore


@dataclass(frozen=True)
class ConstraintSet:
    """Linear constraints (polynomial, strict, asserted truth) plus box bounds.

    Each entry asserts `poly > 0` / `poly >= 0` when truth is True and the
    negation when truth is False.  Bounds must cover every variable used.
    """

    constraints: tuple[tuple[Polynomial, bool, bool], ...]
    bounds: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    def with_constraint(self, poly: Polynomial, strict: bool, truth: bool
                        ) -> "ConstraintSet":
        return ConstraintSet(self.constraints + ((poly, strict, truth),), self.bounds)


def feasible(cs: ConstraintSet) -> bool:
    """Exact feasibility of the relaxed system within the box bounds.

    Returns False only when the system with every strict inequality weakened
    to non-strict has no solution.  Raises on nonlinear constraints.
    """
    rows: list[tuple[dict[str, Fraction], Fraction]] = []
    symbols: set[str] = set()
    for poly, strict, truth in cs.constraints:
        if not poly.is_linear():
            raise ValueError(f"nonlinear constraint: {poly}")
        # asserted as >= 0 (truth) or <= 0 (negation), strictness relaxed
        direction = poly if truth else -poly
        coeffs: dict[str, Fraction] = {}
        const = Fraction(0)
        for mono, c in direction.terms:
            if mono == ():
                const = c
            else:
                coeffs[mono[0][0]] = c
        if not coeffs:
            if const < 0:
                return False
            continue
        symbols.update(coeffs)
        rows.append((coeffs, const))
    if not rows:
        return True
    for sym in symbols:
        if sym not in cs.bounds:
            raise ValueError(f"no bounds declared for variable {sym!r}")
    ordered = sorted(symbols)
    index = {sym: j for j, sym in enumerate(ordered)}
    n = len(ordered)
    # Shift x = L + y with y >= 0; express every row as  a·y <= b.
    lp_rows: list[tuple[list[Fraction], Fraction]] = []
    for coeffs, const in rows:
        a = [Fraction(0)] * n
        shift = const
        for sym, c in coeffs.items():
            a[index[sym]] = -c  # coeffs·x + const >= 0  ->  (-coeffs)·x <= const
            shift += c * cs.bounds[sym][0]
        lp_rows.append((a, shift))
    for sym in ordered:
        lo, hi = cs.bounds[sym]
        width = hi - lo
        if width < 0:
            return False
        a = [Fraction(0)] * n
        a[index[sym]] = Fraction(1)
        lp_rows.append((a, width))
    return _phase_one_feasible(lp_rows, n)


def _phase_one_feasible(rows: list[tuple[list[Fraction], Fraction]], n: int) -> bool:
    """Feasibility of {A y <= b, y >= 0} by phase-one simplex, Bland's rule."""
    m = len(rows)
    if all(b >= 0 for _, b in rows):
        return True
    artificial_rows = [i for i, (_, b) in enumerate(rows) if b < 0]
    k = len(artificial_rows)
    width = n + m + k + 1  # y | slacks | artificials | rhs
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_col = {row: n + m + j for j, row in enumerate(artificial_rows)}
    for i, (a, b) in enumerate(rows):
        row = [Fraction(0)] * width
        sign = Fraction(-1) if b < 0 else Fraction(1)
        for j, coeff in enumerate(a):
            row[j] = sign * coeff
        row[n + i] = sign  # slack
        row[-1] = sign * b
        if b < 0:
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        tableau.append(row)
    artificial = set(art_col.values())

    def reduced_cost(col: int) -> Fraction:
        # cost 1 on artificials, 0 elsewhere
        r = Fraction(1) if col in artificial else Fraction(0)
        for i, bvar in enumerate(basis):
            if bvar in artificial:
                r -= tableau[i][col]
        return r

    while True:
        entering = -1
        for col in range(width - 1):
            if col in artificial:
                continue
            if reduced_cost(col) < 0:
                entering = col  # Bland: lowest eligible index
                break
        if entering < 0:
            break
        leaving = -1
        best: Fraction | None = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving < 0:  # pragma: no cover - phase one is bounded below by zero
            raise RuntimeError("phase-one simplex reported an unbounded problem")
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
    objective = sum(tableau[i][-1] for i, bvar in enumerate(basis) if bvar in artificial)
    return objective == 0


def _pivot(tableau: list[list[Fraction]], row: int, col: int) -> None:
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            factor = r[col]
            tableau[i] = [v - factor * p for v, p in zip(r, tableau[row])]


def prune(store: "XaddStore", f: "NodeRef",
          bounds: dict[str, tuple[Fraction, Fraction]] | None = None) -> "NodeRef":
    """Remove branches whose linear path constraints are infeasible.

    Pointwise values on in-bounds states are unchanged.  Idempotent; returns
    the same handle when nothing can be pruned.
    """
    if bounds is None:
        bounds = store.continuous_bounds()
    feas_cache: dict[frozenset, bool] = {frozenset(): True}
    memo: dict[tuple, "NodeRef"] = {}

    def path_feasible(path: frozenset) -> bool:
        hit = feas_cache.get(path)
        if hit is None:
            cs = ConstraintSet(
                tuple(
                    (store.decision(dec_id).poly, store.decision(dec_id).strict, truth)
                    for dec_id, truth in sorted(path)
                ),
                bounds,
            )
            hit = feasible(cs)
            feas_cache[path] = hit
        return hit

    def walk(ref: "NodeRef", path: frozenset) -> "NodeRef":
        if store.is_terminal(ref):
            return ref
        key = (ref, path)
        done = memo.get(key)
        if done is not None:
            return done
        dec_id, hi, lo = store.node_children(ref)
        d = store.decision(dec_id)
        if isinstance(d, IneqDec) and d.poly.is_linear():
            path_true = path | {(dec_id, True)}
            path_false = path | {(dec_id, False)}
            if not path_feasible(path_true):
                res = walk(lo, path_false)
            elif not path_feasible(path_false):
                res = walk(hi, path_true)
            else:
                res = store._node(dec_id, walk(hi, path_true), walk(lo, path_false))
        else:
            res = store._node(dec_id, walk(hi, path), walk(lo, path))
        memo[key] = res
        return res

    return walk(f, frozenset())
