"""Products and limits: finite exact products, representable elements of
countable products, the order decision procedure, compact-element
classification, and finite limits through the Q-side completion.

A representable product element is an increasing chain of described functions
in sum normal form: an explicit chain with constant tail, cut-down chains of
anchors (stage n takes the n-th compact approximant pointwise), constant
chains at closure-backed pointwise-compact functions, and opaque rule chains.
Exact forms decide the order by comparing pointwise suprema: chain levels are
uniformly bounded per stage, so a dominating stage can always be uniformized,
except across unbounded constant chains, which are handled by cancellation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .completions import Completion, tau_complete
from .core import INF, ExtNatSemigroup, FiniteOrderedStructure
from .diagrams import Diagram
from .functions import (
    Descriptor,
    Family,
    Fn,
    all_indices,
    get_rule,
    leq_descriptor,
    pointwise_descriptor,
    window_of,
    zero_fn,
)
from .kinds import (
    Config,
    DEFAULT_CONFIG,
    Decision,
    StructuralError,
    Tri,
    false_decision,
    true_decision,
    unknown_decision,
)


# ---------------------------------------------------------------------------
# cut-down levels


def approx_fn(anchor: Fn, n: int) -> Fn:
    """Stage-n compact approximant of an anchor, taken pointwise."""
    family = anchor.family
    if family.finite:
        return Fn.tuple_fn(
            family,
            tuple(family.component_at(j).approx(anchor.value_at(j), n) for j in range(family.size)),
        )
    if anchor.windowable():
        lp, pp = anchor.window()
        comp = family.component
        vals = [comp.approx(anchor.value_at(j), n) for j in range(lp + pp)]
        return Fn.evp(family, vals[:lp], vals[lp:])
    return Fn(family, ("cutlevel", anchor, n))


# ---------------------------------------------------------------------------
# product elements


@dataclass(frozen=True)
class ProductElement:
    """Increasing level chain of described functions, in sum normal form.

    parts: ("chain", levels), ("cut", anchor), ("ctop", fn), ("rule", id, params).
    Consecutive materialized levels are certified pointwise way-below.
    """

    family: Family
    parts: tuple

    def level(self, n: int) -> Fn:
        acc = None
        for part in self.parts:
            if part[0] == "chain":
                levels = part[1]
                f = levels[min(n, len(levels) - 1)]
            elif part[0] == "cut":
                f = approx_fn(part[1], n)
            elif part[0] == "ctop":
                f = part[1]
            else:
                f = _rule_level(self.family, part, n)
            acc = f if acc is None else acc.add(f)
        if acc is None:
            acc = zero_fn(self.family)
        return acc

    def has_rules(self) -> bool:
        return any(p[0] == "rule" for p in self.parts)

    def ctops(self) -> list[Fn]:
        return [p[1] for p in self.parts if p[0] == "ctop"]

    def cut_anchor(self) -> Fn | None:
        for p in self.parts:
            if p[0] == "cut":
                return p[1]
        return None

    def chain_levels(self) -> tuple[Fn, ...] | None:
        for p in self.parts:
            if p[0] == "chain":
                return p[1]
        return None

    def stable_stage(self) -> int | None:
        """Stage after which windowable data stops changing, None with rules."""
        if self.has_rules():
            return None
        stage = 1
        ch = self.chain_levels()
        if ch is not None:
            stage = max(stage, len(ch))
        a = self.cut_anchor()
        if a is not None:
            vals = a.values_on_window() if a.windowable() else []
            finite = [v for v in vals if v != INF]
            stage = max(stage, max(finite, default=0) + 1)
        return stage

    def sup_fn(self) -> Fn | None:
        """Pointwise supremum of the chain; exact unless rule-backed."""
        if self.has_rules():
            return None
        acc = None
        for part in self.parts:
            if part[0] == "chain":
                f = part[1][-1]
            elif part[0] in ("cut", "ctop"):
                f = part[1]
            acc = f if acc is None else acc.add(f)
        return zero_fn(self.family) if acc is None else acc

    def sup_value_at(self, j: int):
        comp = self.family.component_at(j)
        acc = comp.zero
        for part in self.parts:
            if part[0] == "chain":
                acc = comp.add(acc, part[1][-1].value_at(j))
            elif part[0] in ("cut", "ctop"):
                acc = comp.add(acc, part[1].value_at(j))
            else:
                raise StructuralError("rule-backed element has no described supremum")
        return acc

    def add(self, other: "ProductElement") -> "ProductElement":
        if self.family != other.family:
            raise StructuralError("elements over different families")
        return _normal_form(self.family, list(self.parts) + list(other.parts))

    def times(self, n: int) -> "ProductElement":
        acc = zero_element(self.family)
        for _ in range(n):
            acc = acc.add(self)
        return acc

    def infinity(self) -> "ProductElement":
        """sup_n n*x: the cut-down chain of the pointwise infinite multiple."""
        sup = self.sup_fn()
        if sup is None:
            raise StructuralError("rule-backed element has no described supremum")
        inf_anchor = _pointwise_infinity(sup)
        return ProductElement(self.family, (("cut", inf_anchor),))

    def to_json(self) -> dict:
        parts = []
        for p in self.parts:
            if p[0] == "chain":
                parts.append({"part": "chain", "levels": [f.to_json() for f in p[1]]})
            elif p[0] == "cut":
                parts.append({"part": "cut", "anchor": p[1].to_json()})
            elif p[0] == "ctop":
                parts.append({"part": "ctop", "fn": p[1].to_json()})
            else:
                parts.append({"part": "rule", "rule": p[1], "params": list(p[2])})
        return {"family": self.family.label(), "parts": parts}


def _rule_level(family: Family, part: tuple, n: int) -> Fn:
    rule, params = part[1], part[2]
    return Fn.closure(family, rule, params + (n,))


def _pointwise_infinity(f: Fn) -> Fn:
    """The pointwise supremum of n*f: zero where f vanishes, the infinite
    multiple elsewhere."""
    family = f.family
    if family.finite:
        vals = tuple(
            _inf_times_value(family.component_at(j), f.value_at(j)) for j in range(family.size)
        )
        return Fn.tuple_fn(family, vals)
    if f.windowable():
        lp, pp = f.window()
        comp = family.component
        vals = [_inf_times_value(comp, f.value_at(j)) for j in range(lp + pp)]
        return Fn.evp(family, vals[:lp], vals[lp:])
    supp = f.support()
    if supp is None:
        raise StructuralError("cannot form infinite multiple without a support certificate")
    comp = family.component
    lp = len(supp.prefix)
    pp = len(supp.pattern)
    prefix = tuple(INF if supp.contains(j) else comp.zero for j in range(lp))
    pattern = tuple(INF if supp.contains(lp + i) else comp.zero for i in range(pp))
    return Fn.evp(family, prefix, pattern)


def _inf_times_value(component, v):
    if isinstance(component, ExtNatSemigroup):
        return component.zero if v == 0 else INF
    if isinstance(component, FiniteOrderedStructure):
        return component.infinity_times(v)
    raise StructuralError(f"unsupported component {component!r}")


def _normal_form(family: Family, parts: list) -> ProductElement:
    chains = [p for p in parts if p[0] == "chain"]
    cuts = [p for p in parts if p[0] == "cut"]
    ctops = [p for p in parts if p[0] == "ctop"]
    rules = [p for p in parts if p[0] == "rule"]
    out = []
    if chains:
        merged = chains[0][1]
        for p in chains[1:]:
            merged = _add_chains(family, merged, p[1])
        out.append(("chain", merged))
    if cuts:
        anchor = cuts[0][1]
        for p in cuts[1:]:
            anchor = anchor.add(p[1])
        out.append(("cut", anchor))
    out.extend(sorted(ctops, key=lambda p: repr(p[1].form)))
    out.extend(sorted(rules, key=lambda p: (p[1], p[2])))
    return ProductElement(family, tuple(out))


def _add_chains(family: Family, a: tuple[Fn, ...], b: tuple[Fn, ...]) -> tuple[Fn, ...]:
    k = max(len(a), len(b))
    pad_a = a + (a[-1],) * (k - len(a))
    pad_b = b + (b[-1],) * (k - len(b))
    return _normalize_levels(tuple(x.add(y) for x, y in zip(pad_a, pad_b)))


def _normalize_levels(levels: tuple[Fn, ...]) -> tuple[Fn, ...]:
    """Drop a level when it already dominates the next one (stable hashing)."""
    out = [levels[0]]
    for f in levels[1:]:
        d = leq_descriptor(f, out[-1])
        if d is not None and d.is_all():
            continue
        out.append(f)
    return tuple(out)


def zero_element(family: Family) -> ProductElement:
    return ProductElement(family, (("chain", (zero_fn(family),)),))


def chain_element(family: Family, levels: list[Fn]) -> ProductElement:
    """Explicit chain with constant tail; validates the chain laws."""
    if not levels:
        raise StructuralError("chain needs at least one level")
    for f in levels:
        if not f.windowable():
            return closure_top(family, f) if len(levels) == 1 else _raise_closure_chain()
    for a, b in zip(levels, levels[1:]):
        d = pointwise_descriptor([a, b], lambda comp, v: comp.way_below(v[0], v[1]))
        if not d.is_all():
            raise StructuralError("chain levels are not pointwise way-below increasing")
    last = levels[-1]
    d = pointwise_descriptor([last], lambda comp, v: comp.is_compact(v[0]))
    if not d.is_all():
        raise StructuralError("constant tail requires a pointwise compact last level")
    return ProductElement(family, (("chain", _normalize_levels(tuple(levels))),))


def _raise_closure_chain():
    raise StructuralError("closure-backed levels are only supported as single constant chains")


def closure_top(family: Family, fn: Fn) -> ProductElement:
    """Constant chain at a closure-backed, pointwise compact function."""
    if fn.windowable():
        return chain_element(family, [fn])
    if fn.bounded() is True:
        raise StructuralError("bounded functions should use an eventually periodic form")
    return ProductElement(family, (("ctop", fn),))


def phi_anchor(family: Family, anchor: Fn) -> ProductElement:
    """Cut-down chain of an anchor: stage n is the pointwise n-th compact
    approximant, the canonical image of the anchor in the completed product."""
    if anchor.family != family:
        raise StructuralError("anchor over the wrong family")
    return ProductElement(family, (("cut", anchor),))


def rule_element(family: Family, rule: str, params: tuple = ()) -> ProductElement:
    get_rule(rule)
    return ProductElement(family, (("rule", rule, params),))


# ---------------------------------------------------------------------------
# order


def _strip_common_ctops(x: ProductElement, y: ProductElement):
    xct = list(x.parts)
    yct = list(y.parts)
    for p in [p for p in xct if p[0] == "ctop"]:
        match = next((q for q in yct if q[0] == "ctop" and q[1].form == p[1].form), None)
        if match is not None:
            xct.remove(p)
            yct.remove(match)
    return ProductElement(x.family, tuple(xct)), ProductElement(y.family, tuple(yct))


def product_leq(x: ProductElement, y: ProductElement,
                config: Config = DEFAULT_CONFIG) -> Decision:
    """Order between representable elements: every stage of x is pointwise
    way-below some stage of y.

    Exact forms reduce to a pointwise comparison of suprema: stages of x are
    uniformly bounded, so a dominating stage of y can be uniformized over the
    window; unbounded constant chains must cancel or refute.  False carries
    the least failing (level, index); rule-backed forms exhaust the budget.
    """
    if x.family != y.family:
        raise StructuralError("elements over different families")
    if x.has_rules() or y.has_rules():
        return _sampled_leq(x, y, config)
    x2, y2 = _strip_common_ctops(x, y)
    for g in x2.ctops():
        # any fixed stage of a ctop-free right side is bounded, so an
        # unbounded left constant chain can never be dominated
        if y2.ctops():
            return unknown_decision(config.budget, (0, 0))
        return _ctop_refutation(g, y2, config)
    supx, supy = x2.sup_fn(), y2.sup_fn()
    d = leq_descriptor(supx, supy)
    if d is None:
        return unknown_decision(config.budget, (0, 0))
    if d.is_all():
        return true_decision()
    j = d.complement().min_member()
    n, val, bound = _first_failing_level(x, j, y)
    return false_decision({"level": n, "index": j, "value": val, "bound": bound})


def _ctop_refutation(g: Fn, y: ProductElement, config: Config) -> Decision:
    supy = y.sup_fn()
    d = leq_descriptor(g, supy)
    if d is not None and not d.is_all():
        j = d.complement().min_member()
        n, val, bound = _first_failing_level_value(g.value_at(j), j, y)
        return false_decision({"level": 0, "index": j, "value": val, "bound": bound})
    if g.bounded() is False:
        # dominated stages would have to exceed every value of g
        cap = _stage_value_cap(y, config.budget)
        below = g.sublevel_set(cap)
        if below is not None and below.is_finite_set():
            j = below.complement().min_member()
            comp = g.family.component
            return false_decision(
                {"level": 0, "index": j, "value": comp.label(g.value_at(j)),
                 "reason": "no bounded stage dominates an unbounded constant chain"}
            )
    return unknown_decision(config.budget, (0, 0))


def _stage_value_cap(y: ProductElement, budget: int) -> int:
    vals: list[int] = [budget]
    sup = y.sup_fn()
    if sup is not None and sup.windowable():
        vals.extend(int(v) for v in sup.values_on_window() if v != INF)
    return max(vals) + 1


def _first_failing_level(x: ProductElement, j: int, y: ProductElement):
    bound = y.sup_value_at(j)
    comp = x.family.component_at(j)
    n = 0
    while True:
        v = x.level(n).value_at(j)
        if not comp.leq(v, bound):
            return n, comp.label(v), comp.label(bound)
        n += 1


def _first_failing_level_value(v, j: int, y: ProductElement):
    comp = y.family.component_at(j)
    bound = y.sup_value_at(j)
    return 0, comp.label(v), comp.label(bound)


def _sampled_leq(x: ProductElement, y: ProductElement, config: Config) -> Decision:
    """Budgeted probe of the stage search; rule-backed forms cannot certify
    either a uniform dominating stage or its absence, so the answer is
    Unknown with the frontier reached."""
    spent = 0
    n = m = 0
    indices = range(x.family.size) if x.family.finite else range(min(config.budget, 32))
    while spent < config.budget:
        ok_m = None
        for m in range(config.budget):
            spent += 1
            if all(
                x.family.component_at(j).way_below(
                    x.level(n).value_at(j), y.level(m).value_at(j)
                )
                for j in indices
            ):
                ok_m = m
                break
            if spent >= config.budget:
                break
        if ok_m is None:
            break
        n += 1
    return unknown_decision(spent, (n, m))


def product_eq(x: ProductElement, y: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
    a = product_leq(x, y, config)
    if not a.is_true:
        return a
    return product_leq(y, x, config)


def product_way_below(x: ProductElement, y: ProductElement,
                      config: Config = DEFAULT_CONFIG) -> Decision:
    """x is way below y when a single stage of y dominates every stage of x."""
    if x.has_rules() or y.has_rules():
        return unknown_decision(config.budget, (0, 0))
    x2, y2 = _strip_common_ctops(x, y)
    supx = x2.sup_fn()
    stage = y2.stable_stage() or 0
    spent = 0
    for m in range(max(stage + 1, 1) + config.budget):
        spent += 1
        d = leq_descriptor(supx, y2.level(m))
        if d is not None and d.is_all():
            return true_decision(spent)
        if m >= stage and _stage_stopped_growing(y2, m):
            break
    verdict = _not_way_below_certain(x2, y2)
    if verdict is not None:
        return false_decision(verdict, spent)
    return unknown_decision(spent, (0, stage))


def _stage_stopped_growing(y: ProductElement, m: int) -> bool:
    anchor = y.cut_anchor()
    if anchor is None:
        return True
    if not anchor.windowable():
        return False
    return all(v == INF or v <= m for v in anchor.values_on_window())


def _not_way_below_certain(x: ProductElement, y: ProductElement) -> dict | None:
    """After stages stop growing on the window, failure is definite."""
    supx, supy = x.sup_fn(), y.sup_fn()
    if x.ctops() and not y.ctops():
        return {"reason": "unbounded constant chain on the left"}
    anchor = y.cut_anchor()
    if anchor is not None and not anchor.windowable():
        return None
    stage = y.stable_stage()
    if stage is None:
        return None
    d = leq_descriptor(supx, y.level(stage))
    if d is None:
        return None
    j = d.complement().min_member()
    if j is None:
        return None
    comp = x.family.component_at(j)
    return {"index": j, "value": comp.label(x.sup_value_at(j))}


def is_compact(x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
    """x is way below itself iff its cut anchors stabilize pointwise at a
    bounded stage (constant chains and explicit chains always do)."""
    if x.has_rules():
        return unknown_decision(config.budget, (0, 0))
    anchor = x.cut_anchor()
    if anchor is None:
        return true_decision()
    b = _anchor_stabilizes(x.family, anchor)
    if b is True:
        return true_decision()
    if b is False:
        w = _nonstabilizing_witness(x.family, anchor)
        return false_decision(w)
    return unknown_decision(config.budget, (0, 0))


def _anchor_stabilizes(family: Family, anchor: Fn) -> bool | None:
    if family.finite:
        return True
    comp = family.component
    if isinstance(comp, FiniteOrderedStructure):
        return True
    return anchor.bounded()


def _nonstabilizing_witness(family: Family, anchor: Fn) -> dict:
    if anchor.windowable():
        lp, pp = anchor.window()
        for j in range(lp + pp):
            if anchor.value_at(j) == INF:
                return {"index": j, "value": "inf",
                        "reason": "no stage of the cut-down chain attains the supremum"}
    return {"reason": "anchor is unbounded; no stage dominates all later stages"}


# ---------------------------------------------------------------------------
# finite products


@dataclass(frozen=True)
class FiniteProduct:
    structure: FiniteOrderedStructure
    components: tuple[FiniteOrderedStructure, ...]
    label_of: dict
    tuple_of: dict

    def projection(self, i: int) -> dict[str, str]:
        return {lbl: tup[i] for lbl, tup in self.tuple_of.items()}


def cu_product_finite(components: list[FiniteOrderedStructure]) -> FiniteProduct:
    """Set-theoretic product with componentwise order and addition."""
    comps = tuple(components)
    tuples = list(itertools.product(*(c.elements for c in comps))) or [()]
    label_of = {t: "(" + ",".join(t) + ")" for t in tuples}
    labels = [label_of[t] for t in tuples]
    index = {t: i for i, t in enumerate(tuples)}
    zero = label_of[tuple(c.zero for c in comps)]
    add_table = tuple(
        tuple(
            index[tuple(c.add(a, b) for c, a, b in zip(comps, ta, tb))]
            for tb in tuples
        )
        for ta in tuples
    )
    leq_rows = tuple(
        sum(
            1 << index[tb]
            for tb in tuples
            if all(c.leq(a, b) for c, a, b in zip(comps, ta, tb))
        )
        for ta in tuples
    )
    structure = FiniteOrderedStructure(tuple(labels), zero, add_table, leq_rows, None)
    return FiniteProduct(structure, comps, label_of, {v: k for k, v in label_of.items()})


# ---------------------------------------------------------------------------
# compacts of products


@dataclass(frozen=True)
class CompactsBijection:
    """Compact classes of the completed product correspond to described
    functions into the component compacts: constant chains both ways."""

    family: Family

    def to_element(self, fn: Fn) -> ProductElement:
        if fn.windowable():
            return chain_element(self.family, [fn])
        return closure_top(self.family, fn)

    def from_element(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Fn | None:
        d = is_compact(x, config)
        if not d.is_true:
            return None
        return x.sup_fn()


def product_compacts_bijection(family: Family) -> CompactsBijection:
    return CompactsBijection(family)


# ---------------------------------------------------------------------------
# limits


@dataclass(frozen=True)
class CuLimit:
    structure: FiniteOrderedStructure
    completion: Completion
    tuple_of: dict
    projections: tuple[dict, ...]


def cu_limit(d: Diagram) -> CuLimit:
    """Limit of a finite diagram of finite Cu-semigroups: compatible tuples
    with the pointwise auxiliary relation, completed on the Q side.

    The empty diagram yields the one-point semigroup.
    """
    d.validate()
    names = d.node_names()
    comps = [d.node(n) for n in names]
    pos = {n: i for i, n in enumerate(names)}
    arrows = [(a, a.as_dict()) for a in d.arrows]
    tuples = [
        t
        for t in (itertools.product(*(c.elements for c in comps)) if comps else [()])
        if all(m[t[pos[a.source]]] == t[pos[a.target]] for a, m in arrows)
    ]
    label_of = {t: "(" + ",".join(t) + ")" for t in tuples}
    labels = [label_of[t] for t in tuples]
    index = {t: i for i, t in enumerate(tuples)}
    zero = label_of[tuple(c.zero for c in comps)]
    add_table = tuple(
        tuple(index[tuple(c.add(x, y) for c, x, y in zip(comps, ta, tb))] for tb in tuples)
        for ta in tuples
    )
    leq_rows = tuple(
        sum(
            1 << index[tb]
            for tb in tuples
            if all(c.leq(x, y) for c, x, y in zip(comps, ta, tb))
        )
        for ta in tuples
    )
    # the pointwise auxiliary relation is componentwise way-below, which on
    # finite nodes coincides with the componentwise order
    q_structure = FiniteOrderedStructure(
        tuple(labels), zero, add_table, leq_rows, leq_rows
    )
    comp = tau_complete(q_structure)
    tuple_of = {label_of[t]: t for t in tuples}
    projections = tuple(
        {cls: tuple_of[comp.endpoint[cls]][i] for cls in comp.structure.elements}
        for i in range(len(names))
    )
    return CuLimit(comp.structure, comp, tuple_of, projections)
