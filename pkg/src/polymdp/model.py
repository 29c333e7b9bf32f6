"""The planning model: factored transitions, rewards, discount and horizon.

The transition factors into one conditional probability diagram per boolean
next-state variable (a function of the current state giving P(b' = true))
and one deterministic conditional equation per continuous next-state
variable.  Equations are stored as diagrams whose terminals are the possible
next-value polynomials, so the regression step can consume them directly.
Equation conditions may test primed booleans (the stochastic part samples
first); nothing may condition on a primed continuous variable.

Models are immutable after construction and freely shareable for reading.
`validate` reports violations as data rather than raising, so callers can
collect and present all of them at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Optional

from .poly import BoolDec, Polynomial, is_primed, prime
from .xadd import NodeRef, XaddStore

#: A conditional equation: diagram with polynomial next-value terminals.
Cse = NodeRef


@dataclass(frozen=True)
class Action:
    name: str
    cpts: dict[str, NodeRef] = field(default_factory=dict)   # bvar -> P(b'=true)
    cses: dict[str, Cse] = field(default_factory=dict)       # cvar -> next value
    reward: NodeRef = 0


@dataclass(frozen=True)
class DCMDP:
    store: XaddStore
    name: str
    bvars: list[str]
    cvars: list[str]
    actions: list[Action]
    discount: Fraction = Fraction(1)
    horizon: Optional[int] = None

    def action(self, name: str) -> Action:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(f"unknown action {name!r}")

    def state_symbols(self) -> list[str]:
        return list(self.bvars) + list(self.cvars)


def complete_action(store: XaddStore, bvars: list[str], cvars: list[str],
                    name: str, cpts: dict[str, NodeRef] | None = None,
                    cses: dict[str, Cse] | None = None,
                    reward: NodeRef | None = None) -> Action:
    """Fill unspecified dynamics with identity: x' = x and b' copies b."""
    cpts = dict(cpts or {})
    cses = dict(cses or {})
    for b in bvars:
        if b not in cpts:
            cpts[b] = store.ite(BoolDec(b), False, store.one, store.zero)
    for x in cvars:
        if x not in cses:
            cses[x] = store.terminal(Polynomial.var(x))
    return Action(name, cpts, cses, store.zero if reward is None else reward)


def validate(m: DCMDP, samples: int = 1000, seed: int = 0) -> list[str]:
    """Structural checks; returns one message per violation (empty = valid)."""
    problems: list[str] = []
    if not (0 <= m.discount <= 1):
        problems.append(f"discount {m.discount} outside [0, 1]")
    if m.horizon is not None and m.horizon < 0:
        problems.append(f"negative horizon {m.horizon}")
    if not m.actions:
        problems.append("model has no actions")
    names = [a.name for a in m.actions]
    for name in sorted({n for n in names if names.count(n) > 1}):
        problems.append(f"duplicate action name {name!r}")
    store = m.store
    for sym in m.cvars:
        info = store.var_info(sym)
        if info.lower > info.upper:
            problems.append(f"inverted bounds for {sym}: [{info.lower}, {info.upper}]")
    unprimed = set(m.bvars) | set(m.cvars)
    rng = Random(seed)
    for a in m.actions:
        prefix = f"action {a.name}"
        for b in m.bvars:
            cpt = a.cpts.get(b)
            if cpt is None:
                problems.append(f"{prefix}: missing transition for {prime(b)}")
                continue
            problems += _check_cpt(store, cpt, f"{prefix}: {prime(b)}", unprimed,
                                   rng, samples)
        for x in m.cvars:
            cse = a.cses.get(x)
            if cse is None:
                problems.append(f"{prefix}: missing equation for {prime(x)}")
                continue
            problems += _check_cse(store, cse, f"{prefix}: {prime(x)}", m)
        bad_reward = [s for s in store.diagram_vars(a.reward) if is_primed(s)]
        if bad_reward:
            problems.append(
                f"{prefix}: reward depends on next-state variables {sorted(bad_reward)}")
    return problems


def _check_cpt(store: XaddStore, cpt: NodeRef, what: str, unprimed: set[str],
               rng: Random, samples: int) -> list[str]:
    problems: list[str] = []
    primed_used = [s for s in store.diagram_vars(cpt) if is_primed(s)]
    if primed_used:
        problems.append(
            f"{what}: probability conditions on next-state variables {sorted(primed_used)}"
            " (synchronic arc)")
    sampled = False
    for ref in store.reachable(cpt):
        if not store.is_terminal(ref):
            continue
        leaf = store.terminal_poly(ref)
        if leaf.is_constant():
            value = leaf.constant_value()
            if not (0 <= value <= 1):
                problems.append(f"{what}: probability leaf {value} outside [0, 1]")
        elif not sampled:
            sampled = True
            for _ in range(samples):
                value = store.evaluate(cpt, store.sample_state(rng))
                if not (0 <= value <= 1):
                    problems.append(
                        f"{what}: probability evaluates to {value} outside [0, 1]")
                    break
    return problems


def _check_cse(store: XaddStore, cse: NodeRef, what: str, m: DCMDP) -> list[str]:
    problems: list[str] = []
    primed_cont = {prime(x) for x in m.cvars}
    used = store.diagram_vars(cse)
    bad = sorted(used & primed_cont)
    if bad:
        problems.append(
            f"{what}: equation mentions next-state continuous variables {bad}"
            " (synchronic arc)")
    for ref in store.reachable(cse):
        if store.is_terminal(ref):
            leaf_primed = [s for s in store.terminal_poly(ref).variables() if is_primed(s)]
            if leaf_primed:
                problems.append(
                    f"{what}: next value {store.terminal_poly(ref)} uses primed"
                    f" variables {sorted(leaf_primed)}")
    return problems
