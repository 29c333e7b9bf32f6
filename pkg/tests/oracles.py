"""Independent reference implementations used as test oracles.

Everything here is hand-coded straight from the problem statements with
plain `Fraction` arithmetic; nothing imports the package under test, so a
bug in the diagram machinery cannot leak into the expected values.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from random import Random
from typing import Callable, Sequence

State = tuple
StepFn = Callable[[State], tuple[State, Fraction]]


# -- generic exhaustive action-sequence enumeration ---------------------------


def best_sequence_value(steps: dict[str, StepFn], gamma: Fraction,
                        horizon: int, state: State) -> Fraction:
    """Maximum discounted reward over all action sequences of length `horizon`."""
    if horizon == 0:
        return Fraction(0)
    best = None
    for fn in steps.values():
        nxt, reward = fn(state)
        value = reward + gamma * best_sequence_value(steps, gamma, horizon - 1, nxt)
        if best is None or value > best:
            best = value
    return best


def best_first_action(steps: dict[str, StepFn], gamma: Fraction,
                      horizon: int, state: State) -> str:
    """First-declared action achieving the best `horizon`-step value."""
    best_name, best_value = None, None
    for name, fn in steps.items():
        nxt, reward = fn(state)
        value = reward + gamma * best_sequence_value(steps, gamma, horizon - 1, nxt)
        if best_value is None or value > best_value:
            best_name, best_value = name, value
    return best_name


# -- knapsack -------------------------------------------------------------------
#
# State (k, x1, x2), capacity 100.  Moving item i deposits all of x_i when
# k + x_i <= 100 and pays x_i; otherwise nothing changes.


def knapsack_steps() -> dict[str, StepFn]:
    def move(i: int) -> StepFn:
        def fn(state: State) -> tuple[State, Fraction]:
            k, x1, x2 = state
            xi = (x1, x2)[i - 1]
            if k + xi <= 100:
                if i == 1:
                    return (k + xi, Fraction(0), x2), xi
                return (k + xi, x1, Fraction(0)), xi
            return state, Fraction(0)
        return fn

    return {"move_1": move(1), "move_2": move(2)}


def knapsack_closed_form(k: Fraction, x1: Fraction, x2: Fraction) -> Fraction:
    """Optimal knapsack value by the published closed form.

    Rule order: nothing fits -> 0; only one fits -> the larger fitting item;
    both fit together -> x1 + x2 (this rule takes precedence); both fit
    individually but not together -> max(x1, x2).
    """
    fits1 = x1 + k <= 100
    fits2 = x2 + k <= 100
    if x1 + x2 + k <= 100:
        return x1 + x2
    if not fits1 and not fits2:
        return Fraction(0)
    if fits1 and not fits2:
        return x1
    if fits2 and not fits1:
        return x2
    return max(x1, x2)


# -- rover, linear variant --------------------------------------------------------
#
# State (t, e, p1, ..., pk).  Costs mirror the shipped domain files: a move
# takes 600 s and 1/2 energy when the rover is at the source (else no-op);
# a photo takes 300 s and pays 110 at the target inside the time window
# [3600, 50400] when e > 3 + 0.0002 t.


def rover_linear_steps(k: int) -> dict[str, StepFn]:
    steps: dict[str, StepFn] = {}

    def move(i: int, j: int) -> StepFn:
        def fn(state: State) -> tuple[State, Fraction]:
            t, e, *p = state
            if p[i - 1]:
                q = list(p)
                q[i - 1] = False
                q[j - 1] = True
                return (t + 600, e - Fraction(1, 2), *q), Fraction(0)
            return state, Fraction(0)
        return fn

    def pic(i: int) -> StepFn:
        def fn(state: State) -> tuple[State, Fraction]:
            t, e, *p = state
            paid = p[i - 1] and e > 3 + Fraction(1, 5000) * t and 3600 <= t <= 50400
            return (t + 300, e, *p), Fraction(110) if paid else Fraction(0)
        return fn

    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j:
                steps[f"move_{i}_{j}"] = move(i, j)
    for i in range(1, k + 1):
        steps[f"take_pic_{i}"] = pic(i)
    return steps


# -- rover, nonlinear variant -------------------------------------------------------
#
# State (x, y, h1, ..., hk).  Moving closes 1/3 of the distance to the
# origin.  A photo of target i sets h_i and pays 4 - x^2 - y^2 inside
# radius 2 when h_i was still clear.


def rover_nonlinear_steps(k: int) -> dict[str, StepFn]:
    steps: dict[str, StepFn] = {
        "move": lambda state: (
            (Fraction(2, 3) * state[0], Fraction(2, 3) * state[1], *state[2:]),
            Fraction(0),
        )
    }

    def pic(i: int) -> StepFn:
        def fn(state: State) -> tuple[State, Fraction]:
            x, y, *h = state
            r2 = x * x + y * y
            reward = 4 - r2 if (not h[i - 1] and r2 < 4) else Fraction(0)
            q = list(h)
            q[i - 1] = True
            return (x, y, *q), reward
        return fn

    for i in range(1, k + 1):
        steps[f"take_pic_{i}"] = pic(i)
    return steps


# -- linear feasibility by vertex enumeration ------------------------------------


def vertex_feasible(rows: Sequence[tuple[Sequence[Fraction], Fraction]],
                    bounds: Sequence[tuple[Fraction, Fraction]]) -> bool:
    """Feasibility of {a·x <= b} within box bounds, by enumerating vertices.

    The box makes any nonempty feasible set a bounded polytope, so it is
    nonempty exactly when some intersection of n constraint hyperplanes
    (bounds included) satisfies every constraint.
    """
    n = len(bounds)
    all_rows: list[tuple[list[Fraction], Fraction]] = [
        ([Fraction(c) for c in a], Fraction(b)) for a, b in rows
    ]
    for j, (lo, hi) in enumerate(bounds):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        all_rows.append((unit, hi))                      # x_j <= hi
        all_rows.append(([-c for c in unit], -lo))       # -x_j <= -lo
    for subset in combinations(range(len(all_rows)), n):
        point = _solve_square([all_rows[i][0] for i in subset],
                              [all_rows[i][1] for i in subset])
        if point is None:
            continue
        if all(sum(c * v for c, v in zip(a, point)) <= b for a, b in all_rows):
            return True
    return False


def _solve_square(matrix: list[list[Fraction]], rhs: list[Fraction]
                  ) -> list[Fraction] | None:
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# -- random rational helpers ----------------------------------------------------


def rand_fraction(rng: Random, lo: Fraction, hi: Fraction, grain: int = 100) -> Fraction:
    return lo + (hi - lo) * Fraction(rng.randint(0, grain), grain)


def rand_state_knapsack(rng: Random) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(rand_fraction(rng, Fraction(0), Fraction(100)) for _ in range(3))
