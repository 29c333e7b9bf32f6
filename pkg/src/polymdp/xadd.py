"""Hash-consed decision diagrams over polynomial leaves.

A store owns three tables: the variable registry (kinds and bounds), the
decision table (boolean variables and normalized polynomial inequalities,
each with a stable order index), and the unique node table.  Node handles
are plain ints; a node is either a terminal holding a `Polynomial` or an
internal split on a decision with a high (true) and low (false) child.

Invariants maintained by construction:

* ordered: along every path, decision indices strictly increase;
* reduced: no internal node has identical children;
* shared: structurally equal nodes are the same handle.

Boolean decisions always order before inequality decisions, which keeps the
boolean restriction used during regression near the root.  Operations that
can unorder a diagram (substitution, symbolic max/min, conditional
substitution) rebuild through `reorder`, the indicator-recombination pass
that restores the order invariant without changing pointwise values.

Construction mutates the store and must stay single-threaded; a frozen store
is safe for concurrent read-only evaluation and export.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Mapping, Optional, Union

from .parsing import (
    BoolAtom,
    ParseError,
    TrueAtom,
    parse_flat_partitions,
)
from .poly import (
    BoolDec,
    ConstantComparisonError,
    Decision,
    IneqDec,
    Polynomial,
    RationalLike,
    is_primed,
    normalize_cmp,
    normalize_ineq,
    prime,
    unprime,
)

NodeRef = int

ADD, SUB, MUL, MAX, MIN = "+", "-", "*", "max", "min"
OPS = frozenset({ADD, SUB, MUL, MAX, MIN})
_COMMUTATIVE = frozenset({ADD, MUL, MAX, MIN})

# Inequality decisions live in a separate index block above all booleans.
_INEQ_BASE = 1 << 20

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


class CaseFormError(ValueError):
    """Raised by from_case on overlapping or non-exhaustive partitions."""


@dataclass(frozen=True)
class VarInfo:
    kind: str  # "bool" | "cont"
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None


def decision_text(d: Decision, truth: bool = True) -> str:
    """Human-readable form of a decision literal."""
    if isinstance(d, BoolDec):
        return d.var if truth else f"~{d.var}"
    if truth:
        return f"{d.poly} {'>' if d.strict else '>='} 0"
    return f"{d.poly} {'<=' if d.strict else '<'} 0"


class XaddStore:
    """Shared store for diagrams over one set of state variables."""

    def __init__(self):
        self._vars: dict[str, VarInfo] = {}
        self._dec_by_id: dict[int, Decision] = {}
        self._dec_ids: dict[Decision, int] = {}
        self._n_bool_decs = 0
        self._n_ineq_decs = 0
        self._nodes: list[tuple] = []
        self._unique: dict[tuple, NodeRef] = {}
        self._cache: dict[tuple, object] = {}
        self._frozen = False
        self.zero = self.terminal(Polynomial.const(0))
        self.one = self.terminal(Polynomial.const(1))

    # -- variable registry ---------------------------------------------------

    def declare_continuous(self, name: str, lower: RationalLike, upper: RationalLike) -> None:
        """Register a continuous state variable and its primed twin."""
        lo, hi = Fraction(lower), Fraction(upper)
        if lo > hi:
            raise ValueError(f"inverted bounds for {name}: [{lo}, {hi}]")
        self._declare(name, VarInfo("cont", lo, hi))
        self._declare(prime(name), VarInfo("cont", lo, hi))

    def declare_bool(self, name: str) -> None:
        """Register a boolean state variable and its primed twin."""
        self._declare(name, VarInfo("bool"))
        self._declare(prime(name), VarInfo("bool"))

    def _declare(self, symbol: str, info: VarInfo) -> None:
        if is_primed(symbol) and unprime(symbol) not in self._vars:
            raise ValueError(f"declare the base variable of {symbol!r} instead")
        if symbol in self._vars:
            raise ValueError(f"variable {symbol!r} already declared")
        self._require_mutable()
        self._vars[symbol] = info

    def var_info(self, symbol: str) -> VarInfo:
        try:
            return self._vars[symbol]
        except KeyError:
            raise KeyError(f"undeclared variable {symbol!r}") from None

    def has_var(self, symbol: str) -> bool:
        return symbol in self._vars

    def variables(self) -> dict[str, VarInfo]:
        return dict(self._vars)

    def continuous_bounds(self) -> dict[str, tuple[Fraction, Fraction]]:
        return {
            sym: (info.lower, info.upper)
            for sym, info in self._vars.items()
            if info.kind == "cont"
        }

    # -- decision table --------------------------------------------------------

    def register_decision(self, d: Decision) -> int:
        """Intern a decision; returns its stable order index."""
        existing = self._dec_ids.get(d)
        if existing is not None:
            return existing
        self._require_mutable()
        if isinstance(d, BoolDec):
            info = self.var_info(d.var)
            if info.kind != "bool":
                raise ValueError(f"{d.var!r} is not a boolean variable")
            idx = self._n_bool_decs
            self._n_bool_decs += 1
            if idx >= _INEQ_BASE:
                raise OverflowError("boolean decision table overflow")
        else:
            if not isinstance(d, IneqDec):
                raise TypeError(f"not a decision: {d!r}")
            if d.poly.is_constant():
                raise ValueError("constant polynomials cannot be decisions")
            if not d.is_normalized():
                raise ValueError(f"decision {d} is not in normalized form")
            for sym in d.poly.variables():
                if self.var_info(sym).kind != "cont":
                    raise ValueError(f"boolean variable {sym!r} inside a polynomial")
            idx = _INEQ_BASE + self._n_ineq_decs
            self._n_ineq_decs += 1
        self._dec_ids[d] = idx
        self._dec_by_id[idx] = d
        return idx

    def decision(self, dec_id: int) -> Decision:
        return self._dec_by_id[dec_id]

    def decisions(self) -> list[Decision]:
        return [self._dec_by_id[i] for i in sorted(self._dec_by_id)]

    # -- node construction -------------------------------------------------------

    def terminal(self, value: Union[Polynomial, RationalLike]) -> NodeRef:
        """Canonical shared terminal for a polynomial (or rational constant)."""
        p = value if isinstance(value, Polynomial) else Polynomial.const(value)
        key = ("t", p)
        ref = self._unique.get(key)
        if ref is None:
            self._require_mutable()
            self._nodes.append(("t", p))
            ref = len(self._nodes) - 1
            self._unique[key] = ref
        return ref

    def _node(self, dec_id: int, hi: NodeRef, lo: NodeRef) -> NodeRef:
        # Reduce rule plus hash consing; does not check ordering.
        if hi == lo:
            return hi
        key = ("i", dec_id, hi, lo)
        ref = self._unique.get(key)
        if ref is None:
            self._require_mutable()
            self._nodes.append(("i", dec_id, hi, lo))
            ref = len(self._nodes) - 1
            self._unique[key] = ref
        return ref

    def internal(self, d: Decision, flipped: bool, high: NodeRef, low: NodeRef) -> NodeRef:
        """Ordered construction: children must only test later decisions."""
        dec_id = self.register_decision(d)
        if flipped:
            high, low = low, high
        for child in (high, low):
            node = self._nodes[child]
            if node[0] == "i" and node[1] <= dec_id:
                raise ValueError(
                    f"decision order violation: child tests {self.decision(node[1])} "
                    f"at or before {d}"
                )
        return self._node(dec_id, high, low)

    def ite(self, d: Decision, flipped: bool, high: NodeRef, low: NodeRef) -> NodeRef:
        """Order-safe if-then-else via indicator recombination."""
        dec_id = self.register_decision(d)
        if flipped:
            high, low = low, high
        t = self._apply_rec(self._indicator(dec_id, True), high, MUL)
        f = self._apply_rec(self._indicator(dec_id, False), low, MUL)
        return self._apply_rec(t, f, ADD)

    def _indicator(self, dec_id: int, truth: bool) -> NodeRef:
        if truth:
            return self._node(dec_id, self.one, self.zero)
        return self._node(dec_id, self.zero, self.one)

    def is_terminal(self, f: NodeRef) -> bool:
        return self._nodes[f][0] == "t"

    def terminal_poly(self, f: NodeRef) -> Polynomial:
        node = self._nodes[f]
        if node[0] != "t":
            raise ValueError("not a terminal node")
        return node[1]

    def node_children(self, f: NodeRef) -> tuple[int, NodeRef, NodeRef]:
        node = self._nodes[f]
        if node[0] != "i":
            raise ValueError("not an internal node")
        return node[1], node[2], node[3]

    def _require_mutable(self) -> None:
        if self._frozen:
            raise RuntimeError("store is frozen; construction is disabled")

    def freeze(self) -> None:
        """Disable construction; the store becomes safe for concurrent reads."""
        self._frozen = True

    def clear_cache(self) -> None:
        """Drop the operation cache (memory pressure relief between solves)."""
        self._cache.clear()

    # -- apply ----------------------------------------------------------------

    def apply(self, f: NodeRef, g: NodeRef, op: str) -> NodeRef:
        """Pointwise binary operation; max/min results are reordered."""
        if op not in OPS:
            raise ValueError(f"unsupported operation {op!r}")
        res = self._apply_rec(f, g, op)
        if op in (MAX, MIN):
            res = self.reorder(res)
        return res

    def _apply_rec(self, f: NodeRef, g: NodeRef, op: str) -> NodeRef:
        if op == ADD:
            if f == self.zero:
                return g
            if g == self.zero:
                return f
        elif op == SUB:
            if g == self.zero:
                return f
            if f == g:
                return self.zero
        elif op == MUL:
            if f == self.zero or g == self.zero:
                return self.zero
            if f == self.one:
                return g
            if g == self.one:
                return f
        else:
            if f == g:
                return f
        if op in _COMMUTATIVE and g < f:
            f, g = g, f
        key = ("ap", op, f, g)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        nf, ng = self._nodes[f], self._nodes[g]
        if nf[0] == "t" and ng[0] == "t":
            res = self._leaf_combine(nf[1], ng[1], op)
        else:
            fd = nf[1] if nf[0] == "i" else None
            gd = ng[1] if ng[0] == "i" else None
            if gd is None or (fd is not None and fd <= gd):
                top = fd
            else:
                top = gd
            fh, fl = (nf[2], nf[3]) if fd == top else (f, f)
            gh, gl = (ng[2], ng[3]) if gd == top else (g, g)
            res = self._node(top, self._apply_rec(fh, gh, op),
                             self._apply_rec(fl, gl, op))
        self._cache[key] = res
        return res

    def _leaf_combine(self, p: Polynomial, q: Polynomial, op: str) -> NodeRef:
        if op == ADD:
            return self.terminal(p + q)
        if op == SUB:
            return self.terminal(p - q)
        if op == MUL:
            return self.terminal(p * q)
        diff = p - q
        if diff.is_constant():
            c = diff.constant_value()
            if op == MAX:
                return self.terminal(p if c > 0 else q)
            return self.terminal(q if c > 0 else p)
        # New comparison decision, oriented so its polynomial is normalized;
        # ties land on the low branch regardless of operand order.
        direction, negated = diff.normalized_direction()
        dec_id = self.register_decision(IneqDec(direction, strict=True))
        hi_wins, lo_wins = (q, p) if negated else (p, q)
        if op == MIN:
            hi_wins, lo_wins = lo_wins, hi_wins
        return self._node(dec_id, self.terminal(hi_wins), self.terminal(lo_wins))

    # -- reorder ----------------------------------------------------------------

    def reorder(self, f: NodeRef) -> NodeRef:
        """Restore the order invariant by indicator recombination.

        Pointwise identity: each decision is multiplied back in as a 1/0
        indicator diagram and the two sides are summed, which re-sorts every
        decision into its registered position.  Already-ordered input comes
        back as the identical handle.
        """
        key = ("ro", f)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        node = self._nodes[f]
        if node[0] == "t":
            res = f
        else:
            dec_id = node[1]
            hi = self._apply_rec(self.reorder(node[2]), self._indicator(dec_id, True), MUL)
            lo = self._apply_rec(self.reorder(node[3]), self._indicator(dec_id, False), MUL)
            res = self._apply_rec(hi, lo, ADD)
        self._cache[key] = res
        return res

    # -- restriction and substitution ------------------------------------------

    def restrict(self, f: NodeRef, var: str, value: bool) -> NodeRef:
        """Set a boolean variable; its decisions disappear from the result."""
        info = self.var_info(var)
        if info.kind != "bool":
            raise ValueError(f"restrict needs a boolean variable, got {var!r}")
        key = ("rs", f, var, value)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        node = self._nodes[f]
        if node[0] == "t":
            res = f
        else:
            d = self.decision(node[1])
            if isinstance(d, BoolDec) and d.var == var:
                res = self.restrict(node[2] if value else node[3], var, value)
            else:
                res = self._node(node[1], self.restrict(node[2], var, value),
                                 self.restrict(node[3], var, value))
        self._cache[key] = res
        return res

    def subst(self, f: NodeRef, sigma: Mapping[str, Union[Polynomial, RationalLike, str]]
              ) -> NodeRef:
        """Substitute continuous variables by polynomials and rename booleans.

        Continuous keys map to polynomials (rationals are promoted); boolean
        keys may only map to boolean variable names.  No key may occur in any
        replacement.  Decisions whose polynomial folds to a constant are
        resolved in place; the result is reordered.
        """
        cont_sigma: dict[str, Polynomial] = {}
        bool_sigma: dict[str, str] = {}
        for key, value in sigma.items():
            info = self.var_info(key)
            if info.kind == "bool":
                if not isinstance(value, str):
                    raise ValueError(
                        f"boolean variable {key!r} may only be renamed, got {value!r}")
                if self.var_info(value).kind != "bool":
                    raise ValueError(f"{value!r} is not a boolean variable")
                bool_sigma[key] = value
            else:
                p = value if isinstance(value, Polynomial) else Polynomial.const(value)
                for sym in p.variables():
                    if self.var_info(sym).kind != "cont":
                        raise ValueError(f"boolean variable {sym!r} inside a polynomial")
                cont_sigma[key] = p
        rhs_vars: set[str] = set(bool_sigma.values())
        for p in cont_sigma.values():
            rhs_vars |= p.variables()
        clash = rhs_vars & (set(cont_sigma) | set(bool_sigma))
        if clash:
            raise ValueError(f"substitution keys occur in replacements: {sorted(clash)}")

        support = self.diagram_vars(f)
        cont_sigma = {k: v for k, v in cont_sigma.items() if k in support}
        bool_sigma = {k: v for k, v in bool_sigma.items() if k in support}
        if not cont_sigma and not bool_sigma:
            return f
        cache_key = ("su", f,
                     tuple(sorted(cont_sigma.items())),
                     tuple(sorted(bool_sigma.items())))
        hit = self._cache.get(cache_key)
        if hit is not None:
            return hit

        memo: dict[NodeRef, NodeRef] = {}

        def walk(ref: NodeRef) -> NodeRef:
            done = memo.get(ref)
            if done is not None:
                return done
            node = self._nodes[ref]
            if node[0] == "t":
                res = self.terminal(node[1].substitute(cont_sigma))
            else:
                d = self.decision(node[1])
                hi, lo = walk(node[2]), walk(node[3])
                if isinstance(d, BoolDec):
                    nd = BoolDec(bool_sigma.get(d.var, d.var))
                    res = self._node(self.register_decision(nd), hi, lo)
                else:
                    p = d.poly.substitute(cont_sigma)
                    try:
                        nd, flipped = normalize_ineq(p, d.strict)
                    except ConstantComparisonError as fold:
                        res = hi if fold.truth else lo
                    else:
                        if flipped:
                            hi, lo = lo, hi
                        res = self._node(self.register_decision(nd), hi, lo)
            memo[ref] = res
            return res

        res = self.reorder(walk(f))
        self._cache[cache_key] = res
        return res

    def subst_conditional(self, f: NodeRef, var: str, cse: NodeRef) -> NodeRef:
        """Substitute `var` by a condition-dependent polynomial.

        `cse` is a diagram whose terminals are the replacement polynomials;
        each of its decisions becomes a decision of the result, and under it
        `f` is rebuilt with `var` replaced by that branch's terminal.  This
        is the delta-function integration step of regression: the integral
        of f against a unit spike at the equation's value is f with the
        variable substituted.
        """
        info = self.var_info(var)
        if info.kind != "cont":
            raise ValueError(f"conditional substitution needs a continuous variable, got {var!r}")
        if var in self.diagram_vars(cse):
            raise ValueError(f"conditional equation for {var!r} mentions {var!r}")
        if var not in self.diagram_vars(f):
            return f
        key = ("sc", f, var, cse)
        hit = self._cache.get(key)
        if hit is not None:
            return hit

        memo: dict[NodeRef, NodeRef] = {}

        def walk(ref: NodeRef) -> NodeRef:
            done = memo.get(ref)
            if done is not None:
                return done
            node = self._nodes[ref]
            if node[0] == "t":
                res = self.subst(f, {var: node[1]})
            else:
                res = self._node(node[1], walk(node[2]), walk(node[3]))
            memo[ref] = res
            return res

        res = self.reorder(walk(cse))
        self._cache[key] = res
        return res

    # -- evaluation ---------------------------------------------------------------

    def evaluate(self, f: NodeRef, assignment: Mapping[str, Union[RationalLike, bool]]
                 ) -> Fraction:
        """Follow decisions at a state and evaluate the reached terminal."""
        ref = f
        while True:
            node = self._nodes[ref]
            if node[0] == "t":
                return node[1].evaluate(assignment)
            d = self.decision(node[1])
            if isinstance(d, BoolDec):
                try:
                    truth = bool(assignment[d.var])
                except KeyError:
                    raise ValueError(f"no value assigned for variable {d.var!r}") from None
            else:
                value = d.poly.evaluate(assignment)
                truth = value > 0 if d.strict else value >= 0
            ref = node[2] if truth else node[3]

    # -- diagram inspection ----------------------------------------------------------

    def diagram_vars(self, f: NodeRef) -> frozenset[str]:
        """All variable symbols tested or used by the diagram."""
        key = ("dv", f)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        node = self._nodes[f]
        if node[0] == "t":
            res = node[1].variables()
        else:
            d = self.decision(node[1])
            own = frozenset((d.var,)) if isinstance(d, BoolDec) else d.poly.variables()
            res = own | self.diagram_vars(node[2]) | self.diagram_vars(node[3])
        self._cache[key] = res
        return res

    def reachable(self, f: NodeRef) -> list[NodeRef]:
        seen: set[NodeRef] = set()
        order: list[NodeRef] = []

        def walk(ref: NodeRef) -> None:
            if ref in seen:
                return
            seen.add(ref)
            node = self._nodes[ref]
            if node[0] == "i":
                walk(node[2])
                walk(node[3])
            order.append(ref)

        walk(f)
        return order

    def diagram_stats(self, f: NodeRef) -> tuple[int, int, int]:
        """(node count, terminal count, distinct decision count)."""
        nodes = self.reachable(f)
        leaves = sum(1 for r in nodes if self._nodes[r][0] == "t")
        decisions = len({self._nodes[r][1] for r in nodes if self._nodes[r][0] == "i"})
        return len(nodes), leaves, decisions

    def validate_diagram(self, f: NodeRef) -> None:
        """Walk the diagram checking order, reduction and sharing invariants."""
        for ref in self.reachable(f):
            node = self._nodes[ref]
            if node[0] == "t":
                if self._unique.get(("t", node[1])) != ref:
                    raise AssertionError(f"terminal {ref} not in the unique table")
                continue
            dec_id, hi, lo = node[1], node[2], node[3]
            if hi == lo:
                raise AssertionError(f"node {ref} is redundant (equal children)")
            if self._unique.get(("i", dec_id, hi, lo)) != ref:
                raise AssertionError(f"node {ref} not in the unique table")
            if dec_id not in self._dec_by_id:
                raise AssertionError(f"node {ref} tests unregistered decision {dec_id}")
            for child in (hi, lo):
                cnode = self._nodes[child]
                if cnode[0] == "i" and cnode[1] <= dec_id:
                    raise AssertionError(
                        f"order violation under node {ref}: {dec_id} -> {cnode[1]}")

    # -- case statement I/O --------------------------------------------------------------

    def to_case(self, f: NodeRef) -> str:
        """Flat case text, one mutually-exclusive partition per path."""
        lines: list[str] = []

        def walk(ref: NodeRef, literals: list[str]) -> None:
            node = self._nodes[ref]
            if node[0] == "t":
                cond = " & ".join(literals) if literals else "⊤"
                lines.append(f"{cond} : {node[1]}")
                return
            d = self.decision(node[1])
            walk(node[2], literals + [decision_text(d, True)])
            walk(node[3], literals + [decision_text(d, False)])

        walk(f, [])
        return "\n".join(lines)

    def from_case(self, text: str, filename: str = "<case>",
                  samples: int = 10_000, seed: int = 0) -> NodeRef:
        """Build a diagram from flat case text.

        Partitions must be pairwise disjoint and cover the whole state space.
        With only linear comparison atoms this is checked exactly through the
        feasibility pruner; otherwise the indicator sum is sampled at
        `samples` in-bounds states.
        """
        partitions = parse_flat_partitions(text, filename)
        if not partitions:
            raise CaseFormError("empty case statement")
        result = self.zero
        indicator_sum = self.zero
        all_linear = True
        for atoms, leaf_poly, span in partitions:
            for sym in leaf_poly.variables():
                if not self.has_var(sym):
                    raise ParseError(f"unknown variable {sym!r}", span)
                if self.var_info(sym).kind != "cont":
                    raise ParseError(f"boolean variable {sym!r} used in a value", span)
            indicator = self.one
            for atom in atoms:
                if isinstance(atom, TrueAtom):
                    continue
                if isinstance(atom, BoolAtom):
                    if not self.has_var(atom.symbol):
                        raise ParseError(f"unknown variable {atom.symbol!r}", atom.span)
                    if self.var_info(atom.symbol).kind != "bool":
                        raise ParseError(
                            f"{atom.symbol!r} is not a boolean variable", atom.span)
                    dec_id = self.register_decision(BoolDec(atom.symbol))
                    lit = self._indicator(dec_id, not atom.negated)
                else:
                    for sym in (atom.lhs.variables() | atom.rhs.variables()):
                        if not self.has_var(sym):
                            raise ParseError(f"unknown variable {sym!r}", atom.span)
                        if self.var_info(sym).kind != "cont":
                            raise ParseError(
                                f"boolean variable {sym!r} in a comparison", atom.span)
                    try:
                        dec, flipped = normalize_cmp(atom.lhs, atom.op, atom.rhs)
                    except ConstantComparisonError as fold:
                        lit = self.one if fold.truth else self.zero
                    else:
                        if not dec.poly.is_linear():
                            all_linear = False
                        dec_id = self.register_decision(dec)
                        lit = self._indicator(dec_id, not flipped)
                indicator = self._apply_rec(indicator, lit, MUL)
            result = self._apply_rec(
                result, self._apply_rec(indicator, self.terminal(leaf_poly), MUL), ADD)
            indicator_sum = self._apply_rec(indicator_sum, indicator, ADD)
        self._check_partition_cover(indicator_sum, all_linear, samples, seed)
        return result

    def _check_partition_cover(self, indicator_sum: NodeRef, all_linear: bool,
                               samples: int, seed: int) -> None:
        if all_linear:
            from .prune import prune as prune_diagram

            pruned = prune_diagram(self, indicator_sum)
            if pruned == self.one:
                return
            values = {self._nodes[r][1].constant_value()
                      for r in self.reachable(pruned) if self._nodes[r][0] == "t"}
        else:
            rng = Random(seed)
            values = set()
            for _ in range(samples):
                count = self.evaluate(indicator_sum, self.sample_state(rng))
                if count != 1:
                    values.add(count)
                    break
            if not values:
                return
        bad = sorted(str(v) for v in values if v != 1)
        if any(v > 1 for v in values):
            raise CaseFormError(f"overlapping partitions (indicator sum reaches {bad})")
        raise CaseFormError(f"non-exhaustive partitions (indicator sum reaches {bad})")

    def sample_state(self, rng: Random, grain: int = 1000
                     ) -> dict[str, Union[Fraction, bool]]:
        """Uniform-ish random in-bounds rational state over all variables."""
        state: dict[str, Union[Fraction, bool]] = {}
        for sym, info in self._vars.items():
            if info.kind == "bool":
                state[sym] = bool(rng.getrandbits(1))
            else:
                t = Fraction(rng.randint(0, grain), grain)
                state[sym] = info.lower + (info.upper - info.lower) * t
        return state

    # -- DOT export ------------------------------------------------------------------------

    def export_dot(self, f: NodeRef) -> str:
        """DOT digraph; true branches solid, false branches dashed."""
        lines = ["digraph xadd {"]
        refs = sorted(self.reachable(f))
        for ref in refs:
            node = self._nodes[ref]
            if node[0] == "t":
                lines.append(f'  n{ref} [shape=box, label="{node[1]}"];')
            else:
                label = decision_text(self.decision(node[1]))
                lines.append(f'  n{ref} [shape=ellipse, label="{label}"];')
        for ref in refs:
            node = self._nodes[ref]
            if node[0] == "i":
                lines.append(f"  n{ref} -> n{node[2]} [style=solid];")
                lines.append(f"  n{ref} -> n{node[3]} [style=dashed];")
        lines.append("}")
        return "\n".join(lines) + "\n"
