"""Coproducts and coequalizers of W-semigroups, finite colimits of
Cu-semigroups through the W-side completion, and the finite-support ideal of
a product.

The coequalizer of a pair (phi, psi) quotients the target by the congruence
generated by identifying phi(d) with psi(d); the quotient relation descends
from x ~ a < b ~ y.  The congruence is computed by a worklist that propagates
every merge additively, which produces the same partition as the direct
swap-triple enumeration (kept as the test oracle) in quadratic rather than
cubic time.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .completions import Completion, gamma_complete, is_morphism
from .core import FiniteOrderedStructure, as_w_structure, check_w_axioms
from .diagrams import Diagram
from .kinds import Decision, StructuralError, false_decision, true_decision, unknown_decision
from .products import ProductElement
from .kinds import Config, DEFAULT_CONFIG


@dataclass(frozen=True)
class WCoproduct:
    structure: FiniteOrderedStructure
    injections: tuple[dict, ...]
    tuple_of: dict


def w_coproduct(components: list[FiniteOrderedStructure]) -> WCoproduct:
    """Direct-sum monoid with the componentwise auxiliary relation; for a
    finite family this is also the product carrier."""
    comps = tuple(components)
    for c in comps:
        if not c.has_aux():
            raise StructuralError("W coproduct needs auxiliary relations on every part")
    tuples = list(itertools.product(*(c.elements for c in comps))) or [()]
    label_of = {t: "(" + ",".join(t) + ")" for t in tuples}
    labels = [label_of[t] for t in tuples]
    index = {t: i for i, t in enumerate(tuples)}
    zero_t = tuple(c.zero for c in comps)
    add_table = tuple(
        tuple(index[tuple(c.add(a, b) for c, a, b in zip(comps, ta, tb))] for tb in tuples)
        for ta in tuples
    )
    aux_rows = tuple(
        sum(
            1 << index[tb]
            for tb in tuples
            if all(c.aux(a, b) for c, a, b in zip(comps, ta, tb))
        )
        for ta in tuples
    )
    leq_rows = None
    if all(c.has_order() for c in comps):
        leq_rows = tuple(
            sum(
                1 << index[tb]
                for tb in tuples
                if all(c.leq(a, b) for c, a, b in zip(comps, ta, tb))
            )
            for ta in tuples
        )
    structure = FiniteOrderedStructure(
        tuple(labels), label_of[zero_t], add_table, leq_rows, aux_rows
    )
    injections = tuple(
        {
            x: label_of[zero_t[:i] + (x,) + zero_t[i + 1:]]
            for x in comps[i].elements
        }
        for i in range(len(comps))
    )
    return WCoproduct(structure, injections, {v: k for k, v in label_of.items()})


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def swap_congruence(
    source: FiniteOrderedStructure,
    target: FiniteOrderedStructure,
    phi: dict[str, str],
    psi: dict[str, str],
) -> dict[str, str]:
    """Smallest monoid congruence on the target identifying phi with psi;
    returns the canonical-representative map."""
    uf = _UnionFind(target.elements)
    work = []
    for d in source.elements:
        if uf.union(phi[d], psi[d]):
            work.append((phi[d], psi[d]))
    while work:
        a, b = work.pop()
        for t in target.elements:
            x, y = target.add(a, t), target.add(b, t)
            if uf.union(x, y):
                work.append((x, y))
    canon = {}
    for x in target.elements:
        root = uf.find(x)
        cls = [y for y in target.elements if uf.find(y) == root]
        canon[x] = min(cls, key=target.idx)
    return canon


@dataclass(frozen=True)
class WCoequalizer:
    structure: FiniteOrderedStructure
    eta: dict[str, str]


def w_coequalizer(
    source: FiniteOrderedStructure,
    target: FiniteOrderedStructure,
    phi: dict[str, str],
    psi: dict[str, str],
) -> WCoequalizer:
    """Quotient of the target by the swap congruence, with the descended
    auxiliary relation [x] < [y] iff x ~ a < b ~ y up to transitivity."""
    for f, name in ((phi, "phi"), (psi, "psi")):
        if not is_morphism(f, source, target, "w"):
            raise StructuralError(f"{name} is not a W-morphism")
    canon = swap_congruence(source, target, phi, psi)
    reps = sorted({canon[x] for x in target.elements}, key=target.idx)
    index = {r: i for i, r in enumerate(reps)}
    members = {r: [x for x in target.elements if canon[x] == r] for r in reps}
    add_table = tuple(
        tuple(index[canon[target.add(a, b)]] for b in reps) for a in reps
    )
    # class-level relation from any cross pair, then transitive closure
    base = [
        [
            any(target.aux(a, b) for a in members[ra] for b in members[rb])
            for rb in reps
        ]
        for ra in reps
    ]
    n = len(reps)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for k in range(n):
                if base[i][k]:
                    for j in range(n):
                        if base[k][j] and not base[i][j]:
                            base[i][j] = True
                            changed = True
    aux_rows = tuple(
        sum(1 << j for j in range(n) if base[i][j]) for i in range(n)
    )
    structure = FiniteOrderedStructure(
        tuple(reps), canon[target.zero], add_table, None, aux_rows
    )
    return WCoequalizer(structure, {x: canon[x] for x in target.elements})


def swap_congruence_oracle(
    source: FiniteOrderedStructure,
    target: FiniteOrderedStructure,
    phi: dict[str, str],
    psi: dict[str, str],
) -> dict[str, str]:
    """Reference construction by direct enumeration of swap triples
    x = z + phi(a) + psi(b), y = z + phi(b) + psi(a), closed transitively."""
    uf = _UnionFind(target.elements)
    for z in target.elements:
        for a in source.elements:
            for b in source.elements:
                x = target.add(z, target.add(phi[a], psi[b]))
                y = target.add(z, target.add(phi[b], psi[a]))
                uf.union(x, y)
    canon = {}
    for x in target.elements:
        root = uf.find(x)
        cls = [y for y in target.elements if uf.find(y) == root]
        canon[x] = min(cls, key=target.idx)
    return canon


@dataclass(frozen=True)
class CuColimit:
    structure: FiniteOrderedStructure
    cocone: tuple[dict, ...]
    completion: Completion


def cu_colimit(d: Diagram) -> CuColimit:
    """Colimit of a finite diagram of finite Cu-semigroups: coequalize the
    arrow relations inside the coproduct of the nodes viewed as W-semigroups,
    then complete back into Cu."""
    d.validate()
    names = d.node_names()
    nodes = [as_w_structure(d.node(n)) for n in names]
    for s in nodes:
        rep = check_w_axioms(s)
        if not rep.passed:
            raise StructuralError(f"diagram node fails W axioms: {rep.law}")
    cop = w_coproduct(nodes)
    pos = {n: i for i, n in enumerate(names)}
    if d.arrows:
        dom = w_coproduct([as_w_structure(d.node(a.source)) for a in d.arrows])
        phi: dict[str, str] = {}
        psi: dict[str, str] = {}
        arrow_maps = [a.as_dict() for a in d.arrows]
        for lbl, t in dom.tuple_of.items():
            img_phi = cop.structure.zero
            img_psi = cop.structure.zero
            for k, a in enumerate(d.arrows):
                x = t[k]
                img_phi = cop.structure.add(img_phi, cop.injections[pos[a.target]][arrow_maps[k][x]])
                img_psi = cop.structure.add(img_psi, cop.injections[pos[a.source]][x])
            phi[lbl] = img_phi
            psi[lbl] = img_psi
        coeq = w_coequalizer(dom.structure, cop.structure, phi, psi)
        quotient = coeq.structure
        eta = coeq.eta
    else:
        quotient = cop.structure
        eta = {x: x for x in cop.structure.elements}
    comp = gamma_complete(quotient)
    cocone = tuple(
        {x: comp.unit[eta[cop.injections[i][x]]] for x in nodes[i].elements}
        for i in range(len(nodes))
    )
    return CuColimit(comp.structure, cocone, comp)


# ---------------------------------------------------------------------------
# the finite-support ideal of a product


def level_supports(x: ProductElement):
    """Support descriptors of the materialized levels: (stage, descriptor or
    None when the form carries no certificate)."""
    out = []
    for part in x.parts:
        if part[0] == "chain":
            for i, f in enumerate(part[1]):
                out.append((i, f.support()))
        elif part[0] == "cut":
            out.append((1, part[1].support()))
        elif part[0] == "ctop":
            out.append((0, part[1].support()))
        else:
            out.append((0, None))
    return out


def c0_membership(x: ProductElement, config: Config = DEFAULT_CONFIG) -> Decision:
    """Whether every level has finite support (membership in the image of the
    direct sum inside the product)."""
    if x.family.finite:
        return true_decision()
    for stage, supp in level_supports(x):
        if supp is None:
            return unknown_decision(config.budget, (stage, 0))
        if not supp.is_finite_set():
            return false_decision({"level": stage, "support": supp.to_json()})
    return true_decision()
