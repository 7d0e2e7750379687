"""Scaled Cu-semigroups, algebra models, scaled (ultra)products, and the
order-property checkers: the bounded-comparison property, simplicity, pure
infiniteness, unperforation variants, total order, and the projection
semigroup of stably finite model families.

Scale membership and ideal membership in products reduce to pointwise tests
against the componentwise scale: scales are downward hereditary and closed
under suprema, so a chain lies levelwise in the scale product iff its
pointwise supremum does, and it lies in the generated ideal iff the supremum
is pointwise reachable by a capped number of scale summands.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .colimits import CuColimit, cu_colimit
from .core import (
    EXT_NAT,
    INF,
    ExtNatSemigroup,
    FiniteOrderedStructure,
    two_point,
)
from .diagrams import Diagram
from .functions import Descriptor, Family, Fn, constant_family, leq_descriptor, list_family, periodic_set, pointwise_descriptor
from .kinds import (
    Config,
    DEFAULT_CONFIG,
    Decision,
    StructuralError,
    Tri,
    UndecidableError,
    false_decision,
    true_decision,
    unknown_decision,
)
from .products import (
    ProductElement,
    chain_element,
    closure_top,
    phi_anchor,
    product_leq,
    zero_element,
)
from .ultra import UltrafilterOracle, cU_membership, uf_contains, ultra_leq


# ---------------------------------------------------------------------------
# scaled carriers and models


@dataclass(frozen=True)
class ScaledCu:
    """A semigroup with a decidable scale and an optional model tag.

    scale is ("set", frozenset) on finite carriers, ("upto", k) or ("all",)
    on the extended naturals.
    """

    semigroup: object
    scale: tuple
    model_tag: tuple | None = None

    def scale_contains(self, v) -> bool:
        kind = self.scale[0]
        if kind == "all":
            return True
        if kind == "set":
            return v in self.scale[1]
        if kind == "upto":
            return v != INF and v <= self.scale[1]
        raise StructuralError(f"unknown scale form {self.scale[0]!r}")

    def scale_bound(self):
        """Least upper bound usable for numeric membership tests (extnat)."""
        kind = self.scale[0]
        if kind == "upto":
            return self.scale[1]
        if kind == "all":
            return INF
        raise StructuralError("finite scales have no numeric bound")

    def validate(self) -> None:
        s = self.semigroup
        if isinstance(s, ExtNatSemigroup):
            if self.scale[0] not in ("upto", "all"):
                raise StructuralError("extnat scales are ('upto', k) or ('all',)")
            return
        if not isinstance(s, FiniteOrderedStructure):
            raise StructuralError(f"unsupported scaled carrier {s!r}")
        if self.scale[0] != "set":
            raise StructuralError("finite scales are explicit sets")
        sigma = self.scale[1]
        if s.zero not in sigma:
            raise StructuralError("scale must contain zero")
        for x in sigma:
            for y in s.elements:
                if s.leq(y, x) and y not in sigma:
                    raise StructuralError(f"scale not downward hereditary at ({y}, {x})")
        # generates the carrier as an ideal: every element sits below a sum
        # of scale elements
        reachable = _sum_closure(s, sigma)
        for x in s.elements:
            if not any(s.leq(x, r) for r in reachable):
                raise StructuralError(f"scale does not generate the carrier at {x}")


def _sum_closure(s: FiniteOrderedStructure, seed) -> frozenset:
    out = set(seed) | {s.zero}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in seed:
                c = s.add(a, b)
                if c not in out:
                    out.add(c)
                    changed = True
    return frozenset(out)


def trivially_scaled(s: FiniteOrderedStructure) -> ScaledCu:
    return ScaledCu(s, ("set", frozenset(s.elements)))


def matrix_model(k: int) -> ScaledCu:
    """Scaled Cu-semigroup of a k-by-k matrix algebra: the extended naturals
    scaled by {0..k}."""
    if k < 1:
        raise StructuralError("matrix size must be positive")
    return ScaledCu(EXT_NAT, ("upto", k), ("matrix", k))


def spi_model() -> ScaledCu:
    """Simple purely infinite model: {0, inf} with the full scale."""
    return ScaledCu(two_point(), ("set", frozenset(["0", "inf"])), ("spi",))


def custom_model(semigroup, scale: tuple) -> ScaledCu:
    m = ScaledCu(semigroup, scale, ("custom",))
    m.validate()
    return m


# ---------------------------------------------------------------------------
# model families


@dataclass(frozen=True)
class ModelFamily:
    """Scaled components over the index set: a finite list, or an eventually
    periodic tag assignment over the naturals (constant carriers)."""

    prefix: tuple[ScaledCu, ...]
    pattern: tuple[ScaledCu, ...] | None = None

    @property
    def finite(self) -> bool:
        return self.pattern is None

    def component_at(self, j: int) -> ScaledCu:
        if self.pattern is None:
            return self.prefix[j]
        if j < len(self.prefix):
            return self.prefix[j]
        return self.pattern[(j - len(self.prefix)) % len(self.pattern)]

    def distinct_models(self) -> list[ScaledCu]:
        out = []
        for m in self.prefix + (self.pattern or ()):
            if m not in out:
                out.append(m)
        return out

    def family(self) -> Family:
        if self.pattern is None:
            return list_family([m.semigroup for m in self.prefix])
        carriers = {m.semigroup for m in self.prefix + self.pattern}
        if len(carriers) != 1:
            raise StructuralError(
                "eventually periodic model families need one carrier; "
                "use a finite list for mixed carriers"
            )
        return constant_family(next(iter(carriers)))

    def positions_of(self, model: ScaledCu) -> Descriptor:
        if self.pattern is None:
            mask = sum(1 << j for j, m in enumerate(self.prefix) if m == model)
            return Descriptor(len(self.prefix), mask)
        return periodic_set(
            [m == model for m in self.prefix],
            [m == model for m in self.pattern],
        )

    def scale_bound_fn(self) -> Fn:
        """Pointwise numeric scale bound (extnat carriers only)."""
        fam = self.family()
        if self.pattern is None:
            return Fn.tuple_fn(fam, tuple(m.scale_bound() for m in self.prefix))
        return Fn.evp(
            fam,
            [m.scale_bound() for m in self.prefix],
            [m.scale_bound() for m in self.pattern],
        )

    def to_json(self) -> dict:
        def tag(m: ScaledCu):
            return list(m.model_tag) if m.model_tag else ["custom"]

        doc: dict = {"prefix": [tag(m) for m in self.prefix]}
        if self.pattern is not None:
            doc["pattern"] = [tag(m) for m in self.pattern]
        return doc


def constant_models(model: ScaledCu) -> ModelFamily:
    return ModelFamily((), (model,))


def periodic_models(prefix: list[ScaledCu], pattern: list[ScaledCu]) -> ModelFamily:
    if not pattern:
        raise StructuralError("pattern must be nonempty")
    return ModelFamily(tuple(prefix), tuple(pattern))


def list_models(models: list[ScaledCu]) -> ModelFamily:
    return ModelFamily(tuple(models), None)


# ---------------------------------------------------------------------------
# scaled products and ultraproducts


@dataclass(frozen=True)
class ScaledProduct:
    """Scaled product of a model family, optionally quotiented along an
    ultrafilter.  Elements are product elements over the carrier family;
    scale and carrier membership are decided pointwise against the
    componentwise scale and its capped sum closure."""

    models: ModelFamily
    oracle: UltrafilterOracle | None = None

    @property
    def family(self) -> Family:
        return self.models.family()

    def _decide(self, d: Descriptor | None, config: Config, witness) -> Decision:
        if d is None:
            return unknown_decision(config.budget, (0, 0))
        if self.oracle is None:
            if d.is_all():
                return true_decision()
            j = d.complement().min_member()
            return false_decision(dict(witness, index=j))
        if uf_contains(self.oracle, d):
            return true_decision()
        return false_decision(dict(witness, set=d.to_json()))

    def in_scale(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
        """All levels lie in the componentwise scale: by heredity and
        sup-closure, the pointwise supremum does."""
        if x.has_rules():
            return unknown_decision(config.budget, (0, 0))
        sup = x.sup_fn()
        d = self._scale_descriptor(sup)
        return self._decide(d, config, {"reason": "supremum escapes the scale"})

    def _scale_descriptor(self, sup: Fn) -> Descriptor | None:
        if sup.windowable():
            return _modelwise_descriptor(self.models, sup, lambda m, v: m.scale_contains(v))
        return leq_descriptor(sup, self.models.scale_bound_fn())

    def in_carrier(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
        """Membership in the ideal generated by the scale: the supremum is
        pointwise dominated by config.summand_cap scale summands."""
        if x.has_rules():
            return unknown_decision(config.budget, (0, 0))
        sup = x.sup_fn()
        cap = config.summand_cap
        if sup.windowable():
            d = _modelwise_descriptor(
                self.models, sup, lambda m, v: _reachable(m, v, cap)
            )
        else:
            d = leq_descriptor(sup, self._reach_bound_fn(cap))
        return self._decide(
            d, config, {"reason": f"not dominated by {cap} scale summands"}
        )

    def _reach_bound_fn(self, cap: int) -> Fn:
        fam = self.family
        models = self.models
        if models.pattern is None:
            vals = tuple(_reach_bound(m, cap) for m in models.prefix)
            return Fn.tuple_fn(fam, vals)
        return Fn.evp(
            fam,
            [_reach_bound(m, cap) for m in models.prefix],
            [_reach_bound(m, cap) for m in models.pattern],
        )

    def leq(self, x: ProductElement, y: ProductElement,
            config: Config = DEFAULT_CONFIG) -> Decision:
        if self.oracle is None:
            return product_leq(x, y, config)
        return ultra_leq(x, y, self.oracle, config)

    def nonzero(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
        if self.oracle is None:
            d = product_leq(x, zero_element(self.family), config)
        else:
            d = cU_membership(x, self.oracle, config)
        if d.is_true:
            return false_decision({"reason": "zero class"})
        if d.is_false:
            return true_decision()
        return d


def _modelwise_descriptor(models: ModelFamily, f: Fn, pred) -> Descriptor:
    fam = f.family
    if fam.finite:
        mask = sum(
            1 << j
            for j in range(fam.size)
            if pred(models.component_at(j), f.value_at(j))
        )
        return Descriptor(fam.size, mask)
    lp, pp = f.window()
    period = pp
    if models.pattern is not None:
        import math

        lp = max(lp, len(models.prefix))
        period = math.lcm(pp, len(models.pattern))
    return Descriptor(
        None,
        prefix=tuple(pred(models.component_at(j), f.value_at(j)) for j in range(lp)),
        pattern=tuple(
            pred(models.component_at(lp + i), f.value_at(lp + i)) for i in range(period)
        ),
    )


def _reachable(model: ScaledCu, v, cap: int) -> bool:
    """Whether v is way below a sum of at most cap scale elements."""
    s = model.semigroup
    if isinstance(s, ExtNatSemigroup):
        bound = _reach_bound(model, cap)
        return s.way_below(v, bound) if v != INF else bound == INF
    sigma = model.scale[1] if model.scale[0] == "set" else frozenset(s.elements)
    sums = {s.zero}
    for _ in range(cap):
        sums |= {s.add(a, b) for a in sums for b in sigma}
    return any(s.way_below(v, r) for r in sums)


def _reach_bound(model: ScaledCu, cap: int):
    if not isinstance(model.semigroup, ExtNatSemigroup):
        raise StructuralError("numeric reach bound needs an extnat carrier")
    b = model.scale_bound()
    return INF if b == INF else cap * b


def scaled_product(models: ModelFamily) -> ScaledProduct:
    return ScaledProduct(models, None)


def scaled_ultraproduct(models: ModelFamily, u: UltrafilterOracle) -> ScaledProduct:
    if models.finite and u.kind != "principal":
        raise StructuralError("free oracles need an infinite index set")
    return ScaledProduct(models, u)


# ---------------------------------------------------------------------------
# deterministic probes


def scale_probes(sp: ScaledProduct, count: int = 8) -> list[ProductElement]:
    """Deterministic scale elements of a scaled (ultra)product: the maximal
    scale tuple, unit-height tuples, and residue-class maskings."""
    models = sp.models
    fam = sp.family
    comp = fam.component_at(0) if fam.finite else fam.component
    out: list[ProductElement] = [zero_element(fam)]
    if not fam.finite and isinstance(comp, ExtNatSemigroup):
        bound = models.scale_bound_fn()
        capped = _cap_fn(bound, 8)
        out.append(phi_anchor(fam, capped))
        out.append(phi_anchor(fam, _min_fn(capped, 1)))
        for mod, res in ((2, 0), (2, 1), (3, 1)):
            out.append(phi_anchor(fam, _mask_residue(capped, mod, res)))
    elif not fam.finite:
        out.append(chain_element(fam, [_top_fn(models)]))
        for mod, res in ((2, 0), (2, 1), (3, 2)):
            out.append(chain_element(fam, [_mask_residue_labels(models, mod, res)]))
    else:
        tops = [_top_value(models.component_at(j), 8) for j in range(fam.size)]
        zeros = [models.component_at(j).semigroup.zero if not isinstance(
            models.component_at(j).semigroup, ExtNatSemigroup) else 0 for j in range(fam.size)]
        out.append(chain_element(fam, [Fn.tuple_fn(fam, tuple(tops))]))
        for i in range(fam.size):
            masked = tuple(tops[j] if j == i else zeros[j] for j in range(fam.size))
            out.append(chain_element(fam, [Fn.tuple_fn(fam, masked)]))
    return out[: max(count, 2)]


def _top_value(m: ScaledCu, cap: int):
    if isinstance(m.semigroup, ExtNatSemigroup):
        b = m.scale_bound()
        return cap if b == INF else min(b, cap)
    return _top_label(m)


def _cap_fn(f: Fn, cap: int) -> Fn:
    fam = f.family
    if fam.finite:
        return Fn.tuple_fn(fam, tuple(min(f.value_at(j), cap) for j in range(fam.size)))
    lp, pp = f.window()
    vals = [min(f.value_at(j), cap) for j in range(lp + pp)]
    return Fn.evp(fam, vals[:lp], vals[lp:])


def _min_fn(f: Fn, v) -> Fn:
    fam = f.family
    if fam.finite:
        return Fn.tuple_fn(fam, tuple(min(f.value_at(j), v) for j in range(fam.size)))
    lp, pp = f.window()
    vals = [min(f.value_at(j), v) for j in range(lp + pp)]
    return Fn.evp(fam, vals[:lp], vals[lp:])


def _mask_residue(f: Fn, mod: int, res: int) -> Fn:
    fam = f.family
    lp, pp = f.window()
    import math

    period = math.lcm(pp, mod)
    vals = [f.value_at(j) if j % mod == res else 0 for j in range(lp + period)]
    return Fn.evp(fam, vals[:lp], vals[lp:])


def _top_fn(models: ModelFamily) -> Fn:
    fam = models.family()
    if models.pattern is None:
        return Fn.tuple_fn(fam, tuple(_top_label(m) for m in models.prefix))
    return Fn.evp(
        fam,
        [_top_label(m) for m in models.prefix],
        [_top_label(m) for m in models.pattern],
    )


def _top_label(m: ScaledCu) -> str:
    s = m.semigroup
    elems = [e for e in s.elements if m.scale_contains(e)]
    top = elems[0]
    for e in elems:
        if s.leq(top, e):
            top = e
    return top


def _mask_residue_labels(models: ModelFamily, mod: int, res: int) -> Fn:
    fam = models.family()
    top = _top_fn(models)
    lp, pp = top.window()
    import math

    period = math.lcm(pp, mod)
    zero = fam.component.zero
    vals = [top.value_at(j) if j % mod == res else zero for j in range(lp + period)]
    return Fn.evp(fam, vals[:lp], vals[lp:])


# ---------------------------------------------------------------------------
# property checkers


def has_Cn(target, n: int, config: Config = DEFAULT_CONFIG) -> Decision:
    """Bounded comparison: all scale elements x, y with y nonzero satisfy
    x <= n*y.  Exact on finite and model carriers; scaled (ultra)products are
    semi-decided over deterministic generated scale elements."""
    if isinstance(target, ScaledCu):
        return _has_cn_model(target, n)
    if isinstance(target, ScaledProduct):
        return _has_cn_product(target, n, config)
    raise StructuralError(f"unsupported carrier {target!r}")


def _has_cn_model(m: ScaledCu, n: int) -> Decision:
    s = m.semigroup
    if isinstance(s, ExtNatSemigroup):
        if m.scale[0] == "all":
            return false_decision({"x": "inf", "y": "1"})
        k = m.scale[1]
        if k <= n:
            return true_decision()
        return false_decision({"x": str(k), "y": "1"})
    sigma = [x for x in s.elements if m.scale_contains(x)]
    for x in sigma:
        for y in sigma:
            if y == s.zero:
                continue
            if not s.leq(x, s.times(n, y)):
                return false_decision({"x": x, "y": y})
    return true_decision()


def _has_cn_product(sp: ScaledProduct, n: int, config: Config) -> Decision:
    probes = scale_probes(sp)
    spent = 0
    for x in probes:
        for y in probes:
            nz = sp.nonzero(y, config)
            if not nz.is_true:
                continue
            d = sp.leq(x, y.times(n), config)
            spent += d.budget_spent + 1
            if d.is_false:
                return Decision(
                    Tri.FALSE,
                    witness={"x": x.to_json(), "y": y.to_json(), "detail": d.witness},
                    budget_spent=spent,
                )
            if d.is_unknown:
                return unknown_decision(spent, d.frontier or (0, 0))
    return true_decision(spent)


def is_simple(target, config: Config = DEFAULT_CONFIG) -> Decision:
    """x <= infinity*y for all x and nonzero y; exhaustive on finite
    carriers (largest candidates first), probe-based on (ultra)products."""
    if isinstance(target, FiniteOrderedStructure):
        return _is_simple_finite(target)
    if isinstance(target, ExtNatSemigroup):
        return true_decision()
    if isinstance(target, ScaledCu):
        return is_simple(target.semigroup, config)
    if isinstance(target, ScaledProduct):
        return _is_simple_product(target, config)
    raise StructuralError(f"unsupported carrier {target!r}")


def _is_simple_finite(s: FiniteOrderedStructure) -> Decision:
    order = list(reversed(s.elements))
    for x in order:
        for y in s.elements:
            if y == s.zero:
                continue
            if not s.leq(x, s.infinity_times(y)):
                return false_decision({"x": x, "y": y})
    return true_decision()


def _carrier_probes(sp: ScaledProduct, config: Config) -> list[ProductElement]:
    probes = list(scale_probes(sp))
    fam = sp.family
    comp = fam.component_at(0) if fam.finite else fam.component
    if isinstance(comp, ExtNatSemigroup) and not fam.finite:
        probes.append(closure_top(fam, Fn.closure(fam, "ident")))
        probes.append(phi_anchor(fam, Fn.constant(fam, INF)))
    out = []
    for p in probes:
        d = sp.in_carrier(p, config)
        if d.is_true:
            out.append(p)
    return out


def _is_simple_product(sp: ScaledProduct, config: Config) -> Decision:
    probes = _carrier_probes(sp, config)
    spent = 0
    for x in reversed(probes):
        for y in probes:
            nz = sp.nonzero(y, config)
            if not nz.is_true:
                continue
            d = sp.leq(x, y.infinity(), config)
            spent += d.budget_spent + 1
            if d.is_false:
                return Decision(
                    Tri.FALSE,
                    witness={"x": x.to_json(), "y": y.to_json(), "detail": d.witness},
                    budget_spent=spent,
                )
            if d.is_unknown:
                return unknown_decision(spent, d.frontier or (0, 0))
    return true_decision(spent)


def is_pi_n(s, n: int) -> bool:
    """Whether 2n*x = n*x for every x."""
    if isinstance(s, ExtNatSemigroup):
        return False
    if not isinstance(s, FiniteOrderedStructure):
        raise StructuralError(f"unsupported carrier {s!r}")
    return all(s.times(2 * n, x) == s.times(n, x) for x in s.elements)


def is_weakly_purely_infinite(s) -> tuple[bool, int | None]:
    """pi-n for some n, searched up to the carrier size."""
    if isinstance(s, ExtNatSemigroup):
        return False, None
    for n in range(1, s.size + 1):
        if is_pi_n(s, n):
            return True, n
    return False, None


def _multiples_cycle(s: FiniteOrderedStructure, x: str):
    """All pairs (n, n*x) until the multiples cycle."""
    seen = {}
    cur = s.zero
    n = 0
    while True:
        n += 1
        cur = s.add(cur, x)
        if cur in seen:
            return n, seen
        seen[cur] = n


def comparability_check(target, kind: str, config: Config = DEFAULT_CONFIG) -> Decision:
    """Order cancellation: unperforated (nx <= ny implies x <= y), almost
    ((n+1)x <= ny implies x <= y), near (nx <= ny for all large n implies
    x <= y).  Exhaustive on finite carriers, where multiples cycle with
    period at most the carrier size."""
    if isinstance(target, ExtNatSemigroup):
        return true_decision()
    if isinstance(target, ScaledProduct):
        return _comparability_product(target, kind, config)
    s = target
    if not isinstance(s, FiniteOrderedStructure):
        raise StructuralError(f"unsupported carrier {s!r}")
    bound = s.size + 2
    for x in s.elements:
        for y in s.elements:
            if s.leq(x, y):
                continue
            if kind == "unperforated":
                for n in range(1, bound + 1):
                    if s.leq(s.times(n, x), s.times(n, y)):
                        return false_decision({"x": x, "y": y, "n": n})
            elif kind == "almost":
                for n in range(1, bound + 1):
                    if s.leq(s.times(n + 1, x), s.times(n, y)):
                        return false_decision({"x": x, "y": y, "n": n})
            elif kind == "near":
                # multiples enter a cycle by step |S| with period at most
                # |S|; "for all large n" holds iff it holds on one combined
                # cycle past that point
                start = s.size + 1
                px = _multiple_period(s, x, start)
                py = _multiple_period(s, y, start)
                import math

                period = math.lcm(px, py)
                if all(
                    s.leq(s.times(start + i, x), s.times(start + i, y))
                    for i in range(period)
                ):
                    return false_decision({"x": x, "y": y, "from": start})
            else:
                raise StructuralError(f"unknown comparability kind {kind!r}")
    return true_decision()


def _multiple_period(s: FiniteOrderedStructure, x: str, start: int) -> int:
    base = s.times(start, x)
    cur = base
    for p in range(1, s.size + 1):
        cur = s.add(cur, x)
        if cur == base:
            return p
    raise StructuralError("multiples did not cycle within the carrier size")


def _comparability_product(sp: ScaledProduct, kind: str, config: Config) -> Decision:
    """Componentwise verdict: the cancellation properties pass to products,
    quotients, and hence ultraproducts."""
    for m in sp.models.distinct_models():
        d = comparability_check(m.semigroup, kind, config)
        if not d.is_true:
            return Decision(Tri.FALSE, witness={"component": d.witness},
                            budget_spent=d.budget_spent)
    return true_decision()


def is_totally_ordered(target, config: Config = DEFAULT_CONFIG) -> Decision:
    """Pairwise comparability: exhaustive on finite carriers; ultraproducts
    of totally ordered components are totally ordered (theorem-backed), and
    plain products fail as soon as two disjointly supported probes exist."""
    if isinstance(target, ExtNatSemigroup):
        return true_decision()
    if isinstance(target, FiniteOrderedStructure):
        for x, y in itertools.combinations(target.elements, 2):
            if not (target.leq(x, y) or target.leq(y, x)):
                return false_decision({"x": x, "y": y})
        return true_decision()
    if isinstance(target, ScaledProduct):
        for m in target.models.distinct_models():
            d = is_totally_ordered(m.semigroup, config)
            if not d.is_true:
                return Decision(Tri.UNKNOWN, budget_spent=d.budget_spent,
                                witness={"component": d.witness})
        if target.oracle is not None and target.oracle.free:
            return true_decision()
        if target.oracle is not None:
            return true_decision()  # principal: the component itself
        return _product_incomparable_pair(target, config)
    raise StructuralError(f"unsupported carrier {target!r}")


def _product_incomparable_pair(sp: ScaledProduct, config: Config) -> Decision:
    probes = [p for p in scale_probes(sp) if sp.nonzero(p, config).is_true]
    for x, y in itertools.combinations(probes, 2):
        a = sp.leq(x, y, config)
        b = sp.leq(y, x, config)
        if a.is_false and b.is_false:
            return false_decision({"x": x.to_json(), "y": y.to_json()})
    return unknown_decision(0, (0, 0))


# ---------------------------------------------------------------------------
# projection semigroups of stably finite families


@dataclass(frozen=True)
class MvnSemigroup:
    """Compact tuples bounded by a multiple of the unit tuple: the projection
    monoid of a product or ultraproduct of matrix-algebra models."""

    models: ModelFamily
    oracle: UltrafilterOracle | None = None

    def __post_init__(self):
        for m in self.models.distinct_models():
            if m.model_tag is None or m.model_tag[0] != "matrix":
                raise StructuralError(
                    "projection semigroups need stably finite (matrix) models"
                )

    @property
    def family(self) -> Family:
        return self.models.family()

    def unit_fn(self) -> Fn:
        return self.models.scale_bound_fn()

    def contains(self, f: Fn, config: Config = DEFAULT_CONFIG) -> Decision:
        """Whether the compact tuple f is bounded by n copies of the unit."""
        if self.oracle is not None and self.oracle.kind == "principal":
            v = f.value_at(self.oracle.j0)
            if v != INF:
                return true_decision()
            return false_decision({"index": self.oracle.j0, "value": "inf"})
        unit = self.unit_fn()
        bound = unit
        for n in range(1, config.summand_cap + 1):
            d = leq_descriptor(f, bound)
            if d is not None:
                if self.oracle is None and d.is_all():
                    return Decision(Tri.TRUE, witness={"n": n})
                if self.oracle is not None and uf_contains(self.oracle, d):
                    return Decision(Tri.TRUE, witness={"n": n})
            bound = bound.add(unit)
        if f.bounded() is False:
            return false_decision({"reason": "unbounded relative to the unit"})
        if f.windowable():
            j = _unbounded_witness(f, unit)
            if j is not None:
                return false_decision({"index": j, "value": "inf"})
        return unknown_decision(config.summand_cap, (0, config.summand_cap))

    def add(self, f: Fn, g: Fn) -> Fn:
        return f.add(g)

    def leq(self, f: Fn, g: Fn, config: Config = DEFAULT_CONFIG) -> Decision:
        d = leq_descriptor(f, g)
        if d is None:
            return unknown_decision(config.budget, (0, 0))
        if self.oracle is None or self.oracle.kind == "principal":
            if self.oracle is not None:
                ok = d.contains(self.oracle.j0)
            else:
                ok = d.is_all()
        else:
            ok = uf_contains(self.oracle, d)
        return true_decision() if ok else false_decision({"set": d.to_json()})


def _unbounded_witness(f: Fn, unit: Fn) -> int | None:
    lp, pp = f.window()
    for j in range(lp + pp):
        if f.value_at(j) == INF:
            return j
    return None


def mvn_semigroup(models: ModelFamily, oracle: UltrafilterOracle | None = None) -> MvnSemigroup:
    return MvnSemigroup(models, oracle)


# ---------------------------------------------------------------------------
# simplicity of ultrapowers through tags


@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    clause: str
    n: int | None = None

    def to_json(self) -> dict:
        out = {"simple": self.simple, "clause": self.clause}
        if self.n is not None:
            out["n"] = self.n
        return out


def ultrapower_simplicity_verdict(
    models: ModelFamily, u: UltrafilterOracle, config: Config = DEFAULT_CONFIG
) -> SimplicityVerdict:
    """Tag-level simplicity clause for an ultraproduct of model families.

    The ultraproduct is simple iff the components carry a uniform bounded
    comparison along the filter: concretely, iff the tag concentrated by the
    oracle is simple-purely-infinite, a fixed matrix size, or a custom model
    with the bounded comparison property.  Needs a countably incomplete
    oracle.
    """
    if not u.countably_incomplete:
        raise StructuralError("the simplicity characterization needs a countably incomplete oracle")
    concentrated = None
    for m in models.distinct_models():
        if uf_contains(u, models.positions_of(m)):
            concentrated = m
            break
    if concentrated is None:
        raise UndecidableError("no tag class lies in the ultrafilter")
    tag = concentrated.model_tag or ("custom",)
    if tag[0] == "spi":
        return SimplicityVerdict(True, "all-spi")
    if tag[0] == "matrix":
        return SimplicityVerdict(True, f"all-matrix({tag[1]})", n=tag[1])
    for n in range(1, config.summand_cap + 1):
        if _has_cn_model(concentrated, n).is_true:
            return SimplicityVerdict(True, f"cn({n})", n=n)
    return SimplicityVerdict(False, "no-bounded-comparison")


# ---------------------------------------------------------------------------
# scaled colimits


@dataclass(frozen=True)
class ScaledColimit:
    scaled: ScaledCu
    colimit: CuColimit


def scaled_colimit(d: Diagram, scales: dict[str, frozenset]) -> ScaledColimit:
    """Colimit of finite scaled Cu-semigroups: the colimit carrier with the
    downward-hereditary, sup-closed hull of the pushed-forward scales."""
    col = cu_colimit(d)
    s = col.structure
    pushed = set()
    for i, name in enumerate(d.node_names()):
        sigma = scales[name]
        node = d.node(name)
        for x in sigma:
            node.idx(x)
            pushed.add(col.cocone[i][x])
    hull = frozenset(
        x for x in s.elements if any(s.leq(x, y) for y in pushed)
    )
    scaled = ScaledCu(s, ("set", hull))
    scaled.validate()
    return ScaledColimit(scaled, col)
