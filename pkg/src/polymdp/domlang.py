"""Parser and serializer for the `.dcmdp` domain language.

Grammar (whitespace-insensitive, `#` comments to end of line)::

    file      := "domain" IDENT decl* action+ settings?
    decl      := "cvar" IDENT "[" NUM "," NUM "]"  |  "bvar" IDENT
    action    := "action" IDENT "{" stmt* "}"
    stmt      := IDENT "'" "=" case          # continuous equation
               | IDENT "'" "~" case          # boolean P(b' = true)
               | "reward" "=" case
    case      := "(" "[" cond "]" case case ")"  |  "(" poly ")"  |  poly
    cond      := poly REL poly | IDENT | IDENT"'"   # REL in {<, <=, >, >=}
    poly      := infix over +, -, *, ^ (positive integer powers), NUM, IDENT
    settings  := ("discount" NUM)? ("horizon" (NUM | "inf"))?

NUM is an unsigned integer, an unsigned decimal, or a rational `a/b`; decl
bounds and settings additionally accept a leading minus.  Decimal literals
become exact rationals at parse time (0.0002 is exactly 1/5000).

Unmentioned primed variables get identity dynamics (x' = x, b' copies b) and
a missing reward is zero.  Every parse error carries a file:line:column
location, and the resulting model is validated before it is returned.
"""
from __future__ import annotations

from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from . import model as _model
from .parsing import (
    BoolAtom,
    CaseLeaf,
    CaseTree,
    CmpAtom,
    ParseError,
    SourceSpan,
    TokenStream,
    parse_case_tree,
    tokenize,
)
from .poly import (
    BoolDec,
    ConstantComparisonError,
    Polynomial,
    is_primed,
    normalize_cmp,
    prime,
    unprime,
)
from .xadd import NodeRef, XaddStore, decision_text

__all__ = [
    "DomainValidationError",
    "ParseError",
    "SourceSpan",
    "builtin_domain_path",
    "parse_case",
    "parse_domain",
    "parse_domain_file",
    "serialize_domain",
]


class DomainValidationError(Exception):
    """The parsed model violates a structural rule of the planning model."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def builtin_domain_path(name: str) -> Path:
    """Path of a domain file shipped with the package (no extension needed)."""
    if not name.endswith(".dcmdp"):
        name += ".dcmdp"
    path = resources.files("polymdp").joinpath("domains", name)
    return Path(str(path))


def parse_domain_file(path: str | Path) -> "_model.DCMDP":
    p = Path(path)
    return parse_domain(p.read_text(encoding="utf-8"), filename=str(p))


def parse_domain(text: str, filename: str = "<domain>") -> "_model.DCMDP":
    """Parse and validate a domain; returns the model with a fresh store."""
    ts = TokenStream(tokenize(text, filename))
    store = XaddStore()
    ts.expect("domain", "file header")
    name = ts.expect_kind("ident", "domain name").text
    bvars: list[str] = []
    cvars: list[str] = []
    while ts.peek().text in ("cvar", "bvar"):
        tok = ts.next()
        var = ts.expect_kind("ident", "variable name")
        if is_primed(var.text):
            raise ParseError("declare the unprimed variable; primed twins are implicit",
                             var.span)
        if tok.text == "cvar":
            ts.expect("[", "bounds")
            lo = _parse_signed_number(ts)
            ts.expect(",", "bounds")
            hi = _parse_signed_number(ts)
            close = ts.expect("]", "bounds")
            if lo > hi:
                raise ParseError(f"inverted bounds [{lo}, {hi}]", close.span)
            try:
                store.declare_continuous(var.text, lo, hi)
            except ValueError as exc:
                raise ParseError(str(exc), var.span) from None
            cvars.append(var.text)
        else:
            try:
                store.declare_bool(var.text)
            except ValueError as exc:
                raise ParseError(str(exc), var.span) from None
            bvars.append(var.text)

    actions: list[_model.Action] = []
    while ts.at("action"):
        actions.append(_parse_action(ts, store, bvars, cvars))
    if not actions:
        raise ts.error("expected at least one action")

    discount = Fraction(1)
    horizon: Optional[int] = None
    if ts.accept("discount"):
        tok = ts.peek()
        discount = _parse_signed_number(ts)
        if not (0 <= discount <= 1):
            raise ParseError(f"discount {discount} outside [0, 1]", tok.span)
    if ts.accept("horizon"):
        tok = ts.next()
        if tok.text == "inf":
            horizon = None
        elif tok.kind == "num" and tok.value.denominator == 1:
            horizon = int(tok.value)
        else:
            raise ParseError("horizon must be an integer or 'inf'", tok.span)
    tail = ts.peek()
    if tail.kind != "eof":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.span)

    m = _model.DCMDP(store, name, bvars, cvars, actions, discount, horizon)
    violations = _model.validate(m)
    if violations:
        raise DomainValidationError(violations)
    return m


def _parse_signed_number(ts: TokenStream) -> Fraction:
    negative = ts.accept("-")
    tok = ts.expect_kind("num", "number")
    value = tok.value
    if ts.accept("/"):
        den = ts.expect_kind("num", "denominator")
        if den.value == 0 or den.value.denominator != 1:
            raise ParseError("denominator must be a non-zero integer", den.span)
        value = value / den.value
    return -value if negative else value


def _parse_action(ts: TokenStream, store: XaddStore,
                  bvars: list[str], cvars: list[str]) -> "_model.Action":
    ts.expect("action")
    name = ts.expect_kind("ident", "action name").text
    ts.expect("{", f"action {name}")
    cpts: dict[str, NodeRef] = {}
    cses: dict[str, NodeRef] = {}
    reward: Optional[NodeRef] = None
    while not ts.accept("}"):
        tok = ts.peek()
        if tok.kind == "eof":
            raise ParseError(f"unterminated action {name!r}", tok.span)
        if ts.accept("reward"):
            ts.expect("=", "reward statement")
            if reward is not None:
                raise ParseError(f"duplicate reward in action {name!r}", tok.span)
            reward = _build_case(ts, store, context="reward")
            continue
        target = ts.expect_kind("ident", "primed variable or 'reward'")
        if not is_primed(target.text):
            raise ParseError(
                f"statements assign primed variables; got {target.text!r}", target.span)
        base = unprime(target.text)
        if ts.accept("="):
            if base not in cvars:
                raise ParseError(
                    f"{target.text!r} is not a continuous variable ('=' needs one)",
                    target.span)
            if base in cses:
                raise ParseError(f"duplicate equation for {target.text!r}", target.span)
            cses[base] = _build_case(ts, store, context="cse", target=base)
        elif ts.accept("~"):
            if base not in bvars:
                raise ParseError(
                    f"{target.text!r} is not a boolean variable ('~' needs one)",
                    target.span)
            if base in cpts:
                raise ParseError(f"duplicate distribution for {target.text!r}", target.span)
            cpts[base] = _build_case(ts, store, context="cpt")
        else:
            raise ParseError("expected '=' or '~' after the primed variable",
                             ts.peek().span)
    return _model.complete_action(store, bvars, cvars, name, cpts, cses, reward)


def parse_case(store: XaddStore, text: str, filename: str = "<case>",
               context: str = "reward", target: str | None = None) -> NodeRef:
    """Parse a nested case expression into a diagram on the given store.

    `context` selects the statement rules: "cse" (equation for `target`),
    "cpt" (probability of a primed boolean) or "reward".
    """
    ts = TokenStream(tokenize(text, filename))
    ref = _build_case(ts, store, context=context, target=target)
    tail = ts.peek()
    if tail.kind != "eof":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.span)
    return ref


def _build_case(ts: TokenStream, store: XaddStore, context: str,
                target: str | None = None) -> NodeRef:
    tree = parse_case_tree(ts)
    return _case_to_diagram(store, tree, context, target)


def _case_to_diagram(store: XaddStore, tree: CaseTree, context: str,
                     target: str | None) -> NodeRef:
    if isinstance(tree, CaseLeaf):
        _check_leaf(store, tree, context)
        return store.terminal(tree.poly)
    # Register the branch decision before building the children so decision
    # indices follow the textual nesting; serialization then round-trips to
    # byte-identical text.
    cond = tree.cond
    if isinstance(cond, BoolAtom):
        sym = cond.symbol
        _check_cond_var(store, sym, cond.span, context, target)
        if store.var_info(sym).kind != "bool":
            raise ParseError(f"{sym!r} is not a boolean variable", cond.span)
        dec, flipped = BoolDec(sym), cond.negated
        store.register_decision(dec)
    else:
        assert isinstance(cond, CmpAtom)
        for sym in sorted(cond.lhs.variables() | cond.rhs.variables()):
            _check_cond_var(store, sym, cond.span, context, target)
            if store.var_info(sym).kind != "cont":
                raise ParseError(
                    f"boolean variable {sym!r} cannot appear in a comparison", cond.span)
        try:
            dec, flipped = normalize_cmp(cond.lhs, cond.op, cond.rhs)
        except ConstantComparisonError as fold:
            branch = tree.high if fold.truth else tree.low
            return _case_to_diagram(store, branch, context, target)
        store.register_decision(dec)
    high = _case_to_diagram(store, tree.high, context, target)
    low = _case_to_diagram(store, tree.low, context, target)
    return store.ite(dec, flipped, high, low)


def _check_cond_var(store: XaddStore, sym: str, span: SourceSpan,
                    context: str, target: str | None) -> None:
    if not store.has_var(sym):
        raise ParseError(f"unknown variable {sym!r}", span)
    if is_primed(sym):
        if context in ("reward", "cpt"):
            raise ParseError(
                f"next-state variable {sym!r} cannot appear here", span)
        if store.var_info(sym).kind == "cont":
            raise ParseError(
                f"equation conditions cannot test next-state continuous"
                f" variable {sym!r}", span)
        if target is not None and sym == prime(target):
            raise ParseError(f"equation for {sym!r} cannot condition on itself", span)


def _check_leaf(store: XaddStore, leaf: CaseLeaf, context: str) -> None:
    for sym in sorted(leaf.poly.variables()):
        if not store.has_var(sym):
            raise ParseError(f"unknown variable {sym!r}", leaf.span)
        if store.var_info(sym).kind != "cont":
            raise ParseError(
                f"boolean variable {sym!r} cannot appear in a value", leaf.span)
        if is_primed(sym):
            raise ParseError(f"next-state variable {sym!r} cannot appear in a value",
                             leaf.span)
    if context == "cpt" and leaf.poly.is_constant():
        value = leaf.poly.constant_value()
        if not (0 <= value <= 1):
            raise ParseError(f"probability leaf {value} outside [0, 1]", leaf.span)


# -- serialization ------------------------------------------------------------


def serialize_domain(m: "_model.DCMDP") -> str:
    """Canonical text for a model; parsing it back is pointwise faithful."""
    store = m.store
    lines = [f"domain {m.name}", ""]
    for x in m.cvars:
        info = store.var_info(x)
        lines.append(f"cvar {x} [{info.lower}, {info.upper}]")
    for b in m.bvars:
        lines.append(f"bvar {b}")
    for a in m.actions:
        lines.append("")
        lines.append(f"action {a.name} {{")
        for x in m.cvars:
            cse = a.cses[x]
            if cse == store.terminal(Polynomial.var(x)):
                continue  # identity default
            lines.append(f"  {prime(x)} = {_case_text(store, cse)}")
        copy_cache: dict[str, NodeRef] = {}
        for b in m.bvars:
            cpt = a.cpts[b]
            if b not in copy_cache:
                copy_cache[b] = store.ite(BoolDec(b), False, store.one, store.zero)
            if cpt == copy_cache[b]:
                continue  # copy default
            lines.append(f"  {prime(b)} ~ {_case_text(store, cpt)}")
        if a.reward != store.zero:
            lines.append(f"  reward = {_case_text(store, a.reward)}")
        lines.append("}")
    lines.append("")
    lines.append(f"discount {m.discount}")
    if m.horizon is not None:
        lines.append(f"horizon {m.horizon}")
    else:
        lines.append("horizon inf")
    return "\n".join(lines) + "\n"


def _case_text(store: XaddStore, ref: NodeRef) -> str:
    if store.is_terminal(ref):
        return f"({store.terminal_poly(ref)})"
    dec_id, hi, lo = store.node_children(ref)
    cond = decision_text(store.decision(dec_id))
    return f"([{cond}] {_case_text(store, hi)} {_case_text(store, lo)})"
