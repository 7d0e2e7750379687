"""Ultrafilter oracles, the vanishing-along-the-filter ideal, and
ultraproducts of Cu-semigroups in the quotient picture.

A free ultrafilter on the naturals is not constructible, but its trace on the
eventually periodic algebra is determined by a point of the profinite
completion: a set with eventual period p lies in the filter iff the point's
residue mod p falls in the eventual pattern.  Queries outside that algebra
raise rather than guess.  The quotient order is decided through the sets
D(n, m) = {j : stage n of x is below stage m of y at j}: the class of x is
below the class of y iff every n admits an m with D(n, m) in the filter,
which for exact forms collapses to the filter membership of the pointwise
supremum comparison.
"""
from __future__ import annotations

from dataclasses import dataclass

from .colimits import level_supports
from .core import FiniteOrderedStructure
from .functions import Descriptor, Family, Fn, leq_descriptor
from .kinds import (
    Config,
    DEFAULT_CONFIG,
    Decision,
    StructuralError,
    UndecidableError,
    false_decision,
    true_decision,
    unknown_decision,
)
from .products import ProductElement, _strip_common_ctops, _stage_value_cap, chain_element


# ---------------------------------------------------------------------------
# oracles


def _fundamental_pattern(pattern: tuple[bool, ...]) -> tuple[bool, ...]:
    n = len(pattern)
    for p in range(1, n + 1):
        if n % p == 0 and pattern == pattern[:p] * (n // p):
            return pattern[:p]
    return pattern


@dataclass(frozen=True)
class UltrafilterOracle:
    """Membership oracle for a fixed ultrafilter.

    Principal oracles decide everything through their base point.  Profinite
    points carry coherent residues along a divisibility tower of moduli and
    decide exactly the eventually periodic sets whose period divides some
    modulus; they are free and countably incomplete (the nested residue
    classes have empty intersection in the naturals).
    """

    kind: str
    j0: int = 0
    moduli: tuple[int, ...] = ()
    residues: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind == "principal":
            return
        if self.kind != "profinite":
            raise StructuralError(f"unknown ultrafilter kind {self.kind!r}")
        if not self.moduli:
            raise StructuralError("profinite point needs at least one modulus")
        prev_m, prev_r = 1, 0
        for m, r in zip(self.moduli, self.residues, strict=True):
            if m % prev_m != 0 or m <= 0:
                raise StructuralError("moduli must form a divisibility tower")
            if not 0 <= r < m or r % prev_m != prev_r:
                raise StructuralError("residues are not coherent along the tower")
            prev_m, prev_r = m, r

    @staticmethod
    def principal(j0: int) -> "UltrafilterOracle":
        return UltrafilterOracle("principal", j0=j0)

    @staticmethod
    def profinite(moduli, residues) -> "UltrafilterOracle":
        return UltrafilterOracle("profinite", moduli=tuple(moduli), residues=tuple(residues))

    @staticmethod
    def factorial_point(depth: int = 16, offset: int = -1) -> "UltrafilterOracle":
        """The profinite point with residue offset mod k! at every level;
        decides every set whose eventual period divides depth factorial."""
        moduli = []
        m = 1
        for k in range(1, depth + 1):
            m *= k
            moduli.append(m)
        residues = [offset % m for m in moduli]
        return UltrafilterOracle.profinite(moduli, residues)

    @property
    def free(self) -> bool:
        return self.kind == "profinite"

    @property
    def countably_incomplete(self) -> bool:
        # nested residue classes intersected with tails have empty intersection
        return self.kind == "profinite"

    def residue_mod(self, p: int) -> int:
        for m, r in zip(self.moduli, self.residues):
            if m % p == 0:
                return r % p
        raise UndecidableError(
            f"period {p} is outside the oracle's divisibility tower"
        )

    def contains(self, d: Descriptor) -> bool:
        if self.kind == "principal":
            return d.contains(self.j0)
        if d.finite_size is not None:
            raise StructuralError("profinite oracles live on the naturals")
        pattern = _fundamental_pattern(d.pattern)
        p = len(pattern)
        r = self.residue_mod(p)
        # membership of all large j congruent to the point's residue
        base = len(d.prefix)
        return pattern[(r - base) % p]

    def to_json(self) -> dict:
        if self.kind == "principal":
            return {"kind": "principal", "j0": self.j0}
        return {"kind": "profinite", "moduli": list(self.moduli), "residues": list(self.residues)}

    @staticmethod
    def from_json(doc: dict) -> "UltrafilterOracle":
        if doc["kind"] == "principal":
            return UltrafilterOracle.principal(doc["j0"])
        return UltrafilterOracle.profinite(doc["moduli"], doc["residues"])


def uf_contains(u: UltrafilterOracle, d: Descriptor) -> bool:
    """Exact filter membership; raises UndecidableError outside the oracle's
    algebra, never guesses."""
    return u.contains(d)


# ---------------------------------------------------------------------------
# the vanishing ideal


def cU_membership(x: ProductElement, u: UltrafilterOracle,
                  config: Config = DEFAULT_CONFIG) -> Decision:
    """Whether every level's support misses the ultrafilter."""
    for stage, supp in level_supports(x):
        if supp is None:
            return unknown_decision(config.budget, (stage, 0))
        if uf_contains(u, supp):
            return false_decision({"level": stage, "support": supp.to_json()})
    return true_decision()


# ---------------------------------------------------------------------------
# quotient order


def ultra_leq(x: ProductElement, y: ProductElement, u: UltrafilterOracle,
              config: Config = DEFAULT_CONFIG) -> Decision:
    """Order between classes in the quotient by the vanishing ideal.

    Principal oracles reduce to the component at the base point.  For free
    oracles and exact forms, the stage search uniformizes on the window and
    the criterion becomes filter membership of {j : sup x <= sup y at j}.
    """
    if x.family != y.family:
        raise StructuralError("elements over different families")
    if u.kind == "principal":
        return _principal_leq(x, y, u.j0, config)
    if x.family.finite:
        raise StructuralError("free oracles need an infinite index set")
    if x.has_rules() or y.has_rules():
        return unknown_decision(config.budget, (0, 0))
    x2, y2 = _strip_common_ctops(x, y)
    for g in x2.ctops():
        if y2.ctops():
            return unknown_decision(config.budget, (0, 0))
        return _ctop_ultra_refutation(g, y2, u, config)
    d = leq_descriptor(x2.sup_fn(), y2.sup_fn())
    if d is None:
        return unknown_decision(config.budget, (0, 0))
    if uf_contains(u, d):
        return true_decision()
    n = _failing_level(x2, y2, u)
    return false_decision({"level": n, "set": d.to_json()})


def _principal_leq(x: ProductElement, y: ProductElement, j0: int, config: Config) -> Decision:
    comp = x.family.component_at(j0)
    if x.has_rules() or y.has_rules():
        return _principal_sampled(x, y, j0, comp, config)
    sx, sy = x.sup_value_at(j0), y.sup_value_at(j0)
    if comp.leq(sx, sy):
        return true_decision()
    n = 0
    while comp.leq(x.level(n).value_at(j0), sy):
        n += 1
    return false_decision(
        {"level": n, "index": j0, "value": comp.label(x.level(n).value_at(j0)),
         "bound": comp.label(sy)}
    )


def _principal_sampled(x, y, j0, comp, config: Config) -> Decision:
    spent = 0
    n = 0
    while spent < config.budget:
        ok = None
        for m in range(config.budget):
            spent += 1
            if comp.way_below(x.level(n).value_at(j0), y.level(m).value_at(j0)):
                ok = m
                break
        if ok is None:
            return unknown_decision(spent, (n, config.budget))
        n += 1
    return unknown_decision(spent, (n, 0))


def _ctop_ultra_refutation(g: Fn, y: ProductElement, u: UltrafilterOracle,
                           config: Config) -> Decision:
    """x carries a constant chain at g while every fixed stage of y is
    bounded; if g properly diverges, every comparison set D(n, m) is finite
    and misses the free filter.  The supremum comparison alone is only
    necessary here, never sufficient."""
    if g.diverges() is True:
        return false_decision(
            {"level": 0,
             "reason": "stage comparison sets are finite and the oracle is free"}
        )
    d = leq_descriptor(g, y.sup_fn())
    if d is not None and not uf_contains(u, d):
        return false_decision({"level": 0, "set": d.to_json()})
    return unknown_decision(config.budget, (0, 0))


def _failing_level(x: ProductElement, y: ProductElement, u: UltrafilterOracle) -> int:
    """Least stage n whose comparison set D(n, .) already misses the filter;
    exists whenever the stabilized comparison fails, at latest at the window
    stabilization stage."""
    sy = y.sup_fn()
    n = 0
    while n < 100_000:
        dn = leq_descriptor(x.level(n), sy)
        if dn is None or not uf_contains(u, dn):
            return n
        n += 1
    raise StructuralError("failing level search did not stabilize")


def ultra_eq(x: ProductElement, y: ProductElement, u: UltrafilterOracle,
             config: Config = DEFAULT_CONFIG) -> Decision:
    a = ultra_leq(x, y, u, config)
    if not a.is_true:
        return a
    return ultra_leq(y, x, u, config)


# ---------------------------------------------------------------------------
# the quotient handle


@dataclass(frozen=True)
class Ultraproduct:
    """Quotient of the representable product by the vanishing ideal: classes
    are represented by product elements, with order decided along the filter."""

    family: Family
    oracle: UltrafilterOracle

    def zero(self) -> ProductElement:
        from .products import zero_element

        return zero_element(self.family)

    def leq(self, x: ProductElement, y: ProductElement,
            config: Config = DEFAULT_CONFIG) -> Decision:
        return ultra_leq(x, y, self.oracle, config)

    def eq(self, x: ProductElement, y: ProductElement,
           config: Config = DEFAULT_CONFIG) -> Decision:
        return ultra_eq(x, y, self.oracle, config)

    def is_zero(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
        return cU_membership(x, self.oracle, config)

    def add(self, x: ProductElement, y: ProductElement) -> ProductElement:
        return x.add(y)

    def component_iso(self):
        """For principal oracles, the canonical identification with the base
        component: a class maps to the supremum of its chain at the point."""
        if self.oracle.kind != "principal":
            raise StructuralError("only principal ultraproducts collapse to a component")
        j0 = self.oracle.j0

        def to_component(x: ProductElement):
            return x.sup_value_at(j0)

        return to_component


def ultraproduct(family: Family, u: UltrafilterOracle) -> Ultraproduct:
    if family.finite and u.kind != "principal":
        raise StructuralError("ultrafilters on a finite index set are principal")
    return Ultraproduct(family, u)


# ---------------------------------------------------------------------------
# compact classes


def ultra_is_compact(x: ProductElement, u: UltrafilterOracle,
                     config: Config = DEFAULT_CONFIG) -> Decision:
    """A class is compact iff some stage already dominates the whole chain
    along the filter."""
    if x.has_rules():
        return unknown_decision(config.budget, (0, 0))
    if u.kind == "principal":
        comp = x.family.component_at(u.j0)
        sx = x.sup_value_at(u.j0)
        n = 0
        while n <= config.budget:
            if comp.leq(sx, x.level(n).value_at(u.j0)):
                return true_decision()
            n += 1
        return false_decision({"index": u.j0, "value": comp.label(sx)})
    sup = x.sup_fn()
    stage = x.stable_stage() or 0
    for m in range(stage + 2):
        d = leq_descriptor(sup, x.level(m))
        if d is not None and uf_contains(u, d):
            return true_decision()
    anchor = x.cut_anchor()
    if anchor is not None and not anchor.windowable():
        cap = config.budget
        below = anchor.sublevel_set(cap)
        if below is not None and below.is_finite_set() and anchor.bounded() is False:
            return false_decision(
                {"reason": "no stage set along the filter dominates the chain",
                 "stage_cap": cap}
            )
        return unknown_decision(config.budget, (0, stage))
    d = leq_descriptor(sup, x.level(stage + 1))
    if d is None:
        return unknown_decision(config.budget, (0, stage))
    return false_decision({"set": d.to_json()})


def compact_preimage(x: ProductElement, u: UltrafilterOracle,
                     config: Config = DEFAULT_CONFIG) -> ProductElement | None:
    """For a compact class, a pointwise-compact element of the plain product
    mapping onto it: a stage masked to the filter set where it is stable."""
    if not ultra_is_compact(x, u, config).is_true:
        return None
    if u.kind == "principal":
        return x
    sup = x.sup_fn()
    stage = x.stable_stage() or 0
    for m in range(stage + 2):
        d = leq_descriptor(sup, x.level(m))
        if d is not None and uf_contains(u, d):
            # on the filter set, stage m is way below stage m+1 and above the
            # supremum, hence pointwise compact there; mask the rest to zero
            masked = _mask_fn(x.level(m), d)
            if masked is not None:
                return chain_element(x.family, [masked])
    return None


def _mask_fn(f: Fn, d: Descriptor) -> Fn | None:
    if not f.windowable():
        return None
    family = f.family
    if family.finite:
        return Fn.tuple_fn(
            family,
            tuple(
                f.value_at(j) if d.contains(j) else family.component_at(j).zero
                for j in range(family.size)
            ),
        )
    from .functions import window_of

    lp, pp = window_of([f])
    lp = max(lp, len(d.prefix))
    import math

    pp = math.lcm(pp, len(d.pattern))
    comp = family.component
    vals = [f.value_at(j) if d.contains(j) else comp.zero for j in range(lp + pp)]
    return Fn.evp(family, vals[:lp], vals[lp:])


# ---------------------------------------------------------------------------
# quotients by ideals


@dataclass(frozen=True)
class QuotientHandle:
    """Quotient of the representable product by a support-style ideal; the
    order rule allows correction by an ideal element, which for support
    ideals means the refutation set must be small."""

    family: Family
    ideal: tuple  # ("zero",) | ("all",) | ("c0",) | ("cU", oracle)

    def _small(self, d: Descriptor) -> bool:
        kind = self.ideal[0]
        if kind == "zero":
            return d.is_empty()
        if kind == "all":
            return True
        if kind == "c0":
            return d.is_finite_set()
        if kind == "cU":
            return not uf_contains(self.ideal[1], d)
        raise StructuralError(f"unknown ideal {kind!r}")

    def leq(self, x: ProductElement, y: ProductElement,
            config: Config = DEFAULT_CONFIG) -> Decision:
        if self.ideal[0] == "all":
            return true_decision()
        if self.ideal[0] == "zero":
            from .products import product_leq

            return product_leq(x, y, config)
        if self.ideal[0] == "cU":
            return ultra_leq(x, y, self.ideal[1], config)
        # finite-support correction
        if x.has_rules() or y.has_rules():
            return unknown_decision(config.budget, (0, 0))
        x2, y2 = _strip_common_ctops(x, y)
        if x2.ctops():
            if y2.ctops():
                return unknown_decision(config.budget, (0, 0))
            g = x2.ctops()[0]
            if g.diverges() is True:
                # stages of y are bounded, so every refutation set is
                # cofinite, never finite-support
                return false_decision(
                    {"level": 0,
                     "reason": "refutation set is cofinite, not finite-support"}
                )
            return unknown_decision(config.budget, (0, 0))
        d = leq_descriptor(x2.sup_fn(), y2.sup_fn())
        if d is None:
            return unknown_decision(config.budget, (0, 0))
        if self._small(d.complement()):
            return true_decision()
        return false_decision({"set": d.to_json()})

    def eq(self, x: ProductElement, y: ProductElement,
           config: Config = DEFAULT_CONFIG) -> Decision:
        a = self.leq(x, y, config)
        if not a.is_true:
            return a
        return self.leq(y, x, config)

    def is_zero(self, x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
        kind = self.ideal[0]
        if kind == "all":
            return true_decision()
        if kind == "c0":
            from .colimits import c0_membership

            return c0_membership(x, config)
        if kind == "cU":
            return cU_membership(x, self.ideal[1], config)
        supp_levels = level_supports(x)
        for stage, supp in supp_levels:
            if supp is None:
                return unknown_decision(config.budget, (stage, 0))
            if not supp.is_empty():
                return false_decision({"level": stage, "support": supp.to_json()})
        return true_decision()


def quotient_by_ideal(family: Family, ideal: tuple) -> QuotientHandle:
    if ideal[0] not in ("zero", "all", "c0", "cU"):
        raise StructuralError(f"unknown ideal kind {ideal[0]!r}")
    return QuotientHandle(family, ideal)
