"""Symbolic value iteration over diagram-represented value functions.

One backup regresses the current value function through every action and
folds the per-action quality functions together with symbolic maximization.
Regression runs in three stages, in this order:

1. prime: rename every state variable to its next-state twin;
2. continuous integration: substitute each primed continuous variable through
   its action's conditional equation (equation conditions may test primed
   booleans, which is why this stage must come first);
3. discrete marginalization: for each primed boolean, multiply in the
   two-sided probability diagram and sum the variable out by restriction.

Discounting multiplies the marginalized expectation before the reward is
added.  Iteration stops at the requested horizon or as soon as two
consecutive value functions are the identical handle; with exact rationals
and canonical construction that structural test is a sound (though not
necessary) fixpoint detector.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .model import Action, DCMDP
from .poly import Polynomial, RationalLike, is_primed, prime
from .prune import prune as prune_diagram
from .xadd import ADD, MAX, MUL, SUB, NodeRef, XaddStore


@dataclass(frozen=True)
class IterStats:
    iteration: int
    nodes: int
    leaves: int
    decisions: int
    time_ms: float


@dataclass
class SolveResult:
    """Per-horizon value functions, per-action quality functions, statistics."""

    model: DCMDP
    values: list[NodeRef] = field(default_factory=list)      # index h
    qs: list[dict[str, NodeRef]] = field(default_factory=list)  # index h, empty at 0
    stats: list[IterStats] = field(default_factory=list)     # index h
    converged: bool = False
    converged_at: Optional[int] = None

    @property
    def horizon_reached(self) -> int:
        return len(self.values) - 1

    def value_diagram(self, h: int) -> NodeRef:
        if h < 0:
            raise ValueError("horizon must be non-negative")
        if h <= self.horizon_reached:
            return self.values[h]
        if self.converged:
            return self.values[-1]
        raise ValueError(
            f"horizon {h} was not computed (reached {self.horizon_reached},"
            " not converged)")

    def value_at(self, h: int, state: Mapping[str, Union[RationalLike, bool]]
                 ) -> Fraction:
        """Exact value of the h-stage-to-go value function at a state."""
        self._check_state(state)
        return self.model.store.evaluate(self.value_diagram(h), state)

    def policy_at(self, h: int, state: Mapping[str, Union[RationalLike, bool]]) -> str:
        """Greedy action at a state; ties go to the first-declared action."""
        if h < 1:
            raise ValueError("policies exist for horizons >= 1")
        self._check_state(state)
        if h <= self.horizon_reached:
            qs = self.qs[h]
        elif self.converged:
            qs = self.qs[-1]
        else:
            raise ValueError(
                f"horizon {h} was not computed (reached {self.horizon_reached},"
                " not converged)")
        store = self.model.store
        best_name, best_value = None, None
        for action in self.model.actions:
            value = store.evaluate(qs[action.name], state)
            if best_value is None or value > best_value:
                best_name, best_value = action.name, value
        return best_name

    def _check_state(self, state: Mapping[str, Union[RationalLike, bool]]) -> None:
        store = self.model.store
        for sym in self.model.state_symbols():
            if sym not in state:
                raise ValueError(f"state is missing variable {sym!r}")
            info = store.var_info(sym)
            if info.kind == "cont":
                value = Fraction(state[sym])
                if not (info.lower <= value <= info.upper):
                    raise ValueError(
                        f"{sym} = {value} outside bounds [{info.lower}, {info.upper}]")


def regress(m: DCMDP, a: Action, value: NodeRef) -> NodeRef:
    """Quality of taking `a` and then collecting `value` (one Bellman step)."""
    store = m.store
    primed_in_v = [s for s in store.diagram_vars(value) if is_primed(s)]
    if primed_in_v:
        raise ValueError(
            f"value function mentions next-state variables {sorted(primed_in_v)}")

    sigma: dict[str, Union[Polynomial, str]] = {}
    for x in m.cvars:
        sigma[x] = Polynomial.var(prime(x))
    for b in m.bvars:
        sigma[b] = prime(b)
    q = store.subst(value, sigma)

    # Continuous integration must precede discrete marginalization: equation
    # conditions may test primed booleans.
    for x in m.cvars:
        q = store.subst_conditional(q, prime(x), a.cses[x])
    for b in m.bvars:
        q = _marginalize_bool(store, q, b, a.cpts[b])

    q = store.apply(store.terminal(m.discount), q, MUL)
    q = store.apply(a.reward, q, ADD)

    leftover = [s for s in store.diagram_vars(q) if is_primed(s)]
    if leftover:  # pragma: no cover - regression must eliminate primed variables
        raise AssertionError(f"regression left primed variables {sorted(leftover)}")
    return q


def _marginalize_bool(store: XaddStore, q: NodeRef, b: str, cpt: NodeRef) -> NodeRef:
    bp = prime(b)
    if bp not in store.diagram_vars(q):
        return q  # summing the two-sided probability out yields q unchanged
    from .poly import BoolDec

    dec = BoolDec(bp)
    p_true = cpt
    p_false = store.apply(store.one, cpt, SUB)
    two_sided = store.ite(dec, False, p_true, p_false)
    weighted = store.apply(q, two_sided, MUL)
    return store.apply(
        store.restrict(weighted, bp, True),
        store.restrict(weighted, bp, False),
        ADD,
    )


def backup(m: DCMDP, value: NodeRef, use_prune: bool = False
           ) -> tuple[NodeRef, dict[str, NodeRef]]:
    """One value-iteration step: regress every action, then maximize."""
    store = m.store
    qs: dict[str, NodeRef] = {}
    for action in m.actions:
        q = regress(m, action, value)
        if use_prune:
            q = prune_diagram(store, q)
        qs[action.name] = q
    acc = None
    for action in reversed(m.actions):
        q = qs[action.name]
        acc = q if acc is None else store.apply(q, acc, MAX)
    if use_prune:
        acc = prune_diagram(store, acc)
    return acc, qs


def solve(m: DCMDP, horizon: Optional[int] = None, use_prune: bool = False,
          init: str = "zero", clear_cache_each_iteration: bool = False
          ) -> SolveResult:
    """Iterate backups from the configured initialization.

    Stops at `horizon` (default: the model's) or earlier when two consecutive
    value functions are the identical handle.  `init` is "zero" or
    "max_reward" (start from the maximum over action rewards).
    """
    if horizon is None:
        horizon = m.horizon
    if horizon is None:
        raise ValueError("an explicit horizon is required (model declares none)")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    store = m.store
    if init == "zero":
        v = store.zero
    elif init == "max_reward":
        v = None
        for action in reversed(m.actions):
            v = action.reward if v is None else store.apply(action.reward, v, MAX)
        if use_prune:
            v = prune_diagram(store, v)
    else:
        raise ValueError(f"unknown initialization {init!r}")

    result = SolveResult(model=m)
    result.values.append(v)
    result.qs.append({})
    result.stats.append(IterStats(0, *store.diagram_stats(v), 0.0))
    for h in range(1, horizon + 1):
        started = time.perf_counter()
        v_next, qs = backup(m, v, use_prune)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        result.values.append(v_next)
        result.qs.append(qs)
        nodes, leaves, decisions = store.diagram_stats(v_next)
        result.stats.append(IterStats(h, nodes, leaves, decisions, elapsed_ms))
        if v_next == v:
            result.converged = True
            result.converged_at = h
            break
        v = v_next
        if clear_cache_each_iteration:
            store.clear_cache()
    return result


def value_at(r: SolveResult, h: int, state) -> Fraction:
    return r.value_at(h, state)


def policy_at(r: SolveResult, h: int, state) -> str:
    return r.policy_at(h, state)
