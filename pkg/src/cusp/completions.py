"""Completions of W- and Q-semigroups, the antisymmetrization functor, and
exhaustive morphism enumeration for finite carriers.

On a finite carrier an aux-increasing sequence eventually cycles through
elements t with t aux t, and its class is determined by the downset of any
cycle element.  The completion of a W-semigroup therefore has one element per
distinct downset x^< = {z : z aux x}, ordered by inclusion.  Dually, paths in
a finite Q-semigroup are step functions whose values are round (r aux r), and
a class is pinned by its largest value, so the Q-side completion is the set of
round elements under the restricted auxiliary relation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import FiniteOrderedStructure, check_q_axioms, check_w_axioms
from .kinds import BudgetError, Config, DEFAULT_CONFIG, StructuralError


@dataclass(frozen=True)
class Completion:
    """A completed structure together with the universal maps.

    `unit` sends a carrier element to its class (the cofinal-sequence class on
    the W side, the round-element class on the Q side); `endpoint` sends a
    class back to a canonical representative where one exists.
    """

    structure: FiniteOrderedStructure
    unit: dict[str, str]
    endpoint: dict[str, str] | None = None
    downsets: dict[str, frozenset] | None = None


def gamma_complete(s: FiniteOrderedStructure) -> Completion:
    """Cu-completion of a finite W-semigroup.

    Elements are the realizable round downsets D(x) = x^<, ordered by
    inclusion, with D(x) + D(y) = D(x+y); the unit map sends x to the class of
    a cofinal aux-increasing sequence inside x^<.
    """
    rep = check_w_axioms(s)
    if not rep.passed:
        raise StructuralError(f"input fails W axioms: {rep.law} at {rep.witness}")
    downs = {x: s.downset(x, use_aux=True) for x in s.elements}
    distinct = sorted(
        {d for d in downs.values()},
        key=lambda d: (len(d), sorted(s.idx(e) for e in d)),
    )
    names = {d: f"c{i}" for i, d in enumerate(distinct)}
    elements = [names[d] for d in distinct]
    dset = {names[d]: d for d in distinct}
    rep_of: dict[str, str] = {}
    for x in s.elements:
        rep_of.setdefault(names[downs[x]], x)
    zero = names[downs[s.zero]]
    index = {e: i for i, e in enumerate(elements)}
    add_table = tuple(
        tuple(
            index[names[downs[s.add(rep_of[a], rep_of[b])]]]
            for b in elements
        )
        for a in elements
    )
    leq_rows = tuple(
        sum(1 << index[b] for b in elements if dset[a] <= dset[b])
        for a in elements
    )
    structure = FiniteOrderedStructure(tuple(elements), zero, add_table, leq_rows, None)
    alpha = {x: names[downs[x]] for x in s.elements}
    return Completion(structure, alpha, endpoint=rep_of, downsets=dset)


def tau_complete(s: FiniteOrderedStructure) -> Completion:
    """Cu-completion of a finite Q-semigroup through its round elements.

    Mutual-aux equivalence classes of round elements are singletons when the
    auxiliary relation sits below a partial order, so the carrier is the set
    {r : r aux r} with the restricted relation as its order; the endpoint map
    sends each class to its representative.  An independent step-path oracle
    cross-checks this closed form in the test suite.
    """
    rep = check_q_axioms(s)
    if not rep.passed:
        raise StructuralError(f"input fails Q axioms: {rep.law} at {rep.witness}")
    rounds = [x for x in s.elements if s.aux(x, x)]
    if s.zero not in rounds:
        raise StructuralError("zero is not round")
    # quotient by mutual aux (trivial on valid inputs, kept for uniformity)
    canon: dict[str, str] = {}
    for r in rounds:
        for r2 in rounds:
            if s.aux(r, r2) and s.aux(r2, r):
                canon[r] = min(canon.get(r, r), r2, key=s.idx)
    reps = sorted({canon[r] for r in rounds}, key=s.idx)
    index = {e: i for i, e in enumerate(reps)}
    add_table = tuple(
        tuple(index[canon[s.add(a, b)]] for b in reps) for a in reps
    )
    leq_rows = tuple(
        sum(1 << index[b] for b in reps if s.aux(a, b)) for a in reps
    )
    structure = FiniteOrderedStructure(tuple(reps), canon[s.zero], add_table, leq_rows, None)
    unit = {r: canon[r] for r in rounds}
    return Completion(structure, unit, endpoint={c: c for c in reps})


@dataclass(frozen=True)
class Antisymmetrization:
    structure: FiniteOrderedStructure
    class_of: dict[str, str]


def antisymmetrize(s: FiniteOrderedStructure) -> Antisymmetrization:
    """Partial-order quotient of a W-semigroup.

    The preorder x <= y iff x^< is contained in y^< is antisymmetrized; the
    derived relation x <+ y iff x <= y' aux y for some y' descends to the
    quotient, which carries the induced order and addition.
    """
    rep = check_w_axioms(s)
    if not rep.passed:
        raise StructuralError(f"input fails W axioms: {rep.law} at {rep.witness}")
    downs = {x: s.downset(x, use_aux=True) for x in s.elements}

    def pre_leq(a, b):
        return downs[a] <= downs[b]

    canon: dict[str, str] = {}
    for x in s.elements:
        cls = [y for y in s.elements if pre_leq(x, y) and pre_leq(y, x)]
        canon[x] = min(cls, key=s.idx)
    reps = sorted({canon[x] for x in s.elements}, key=s.idx)
    index = {e: i for i, e in enumerate(reps)}

    def aux_plus(a, b):
        return any(pre_leq(a, yp) and s.aux(yp, b) for yp in s.elements)

    add_table = tuple(
        tuple(index[canon[s.add(a, b)]] for b in reps) for a in reps
    )
    leq_rows = tuple(
        sum(1 << index[b] for b in reps if pre_leq(a, b)) for a in reps
    )
    aux_rows = tuple(
        sum(1 << index[b] for b in reps if aux_plus(a, b)) for a in reps
    )
    structure = FiniteOrderedStructure(
        tuple(reps), canon[s.zero], add_table, leq_rows, aux_rows
    )
    return Antisymmetrization(structure, {x: canon[x] for x in s.elements})


# ---------------------------------------------------------------------------
# morphisms


def is_additive(f: dict[str, str], a: FiniteOrderedStructure, b: FiniteOrderedStructure) -> bool:
    if f[a.zero] != b.zero:
        return False
    return all(
        f[a.add(x, y)] == b.add(f[x], f[y])
        for x, y in itertools.combinations_with_replacement(a.elements, 2)
    )


def preserves(f, a, b, rel_a: str, rel_b: str) -> bool:
    ra = (lambda x, y: a.aux(x, y)) if rel_a == "aux" else (lambda x, y: a.leq(x, y))
    rb = (lambda x, y: b.aux(x, y)) if rel_b == "aux" else (lambda x, y: b.leq(x, y))
    return all(
        rb(f[x], f[y])
        for x, y in itertools.product(a.elements, repeat=2)
        if ra(x, y)
    )


def is_continuous(f, a, b) -> bool:
    """For y aux f(x) there must be x' aux x with y aux f(x')."""
    for x in a.elements:
        for y in b.elements:
            if b.aux(y, f[x]):
                if not any(a.aux(xp, x) and b.aux(y, f[xp]) for xp in a.elements):
                    return False
    return True


def is_morphism(f: dict[str, str], a, b, kind: str) -> bool:
    """Morphism laws per category; on finite carriers suprema of increasing
    sequences are eventual values, so sup-preservation follows from order
    preservation and needs no separate scan."""
    if not is_additive(f, a, b):
        return False
    if kind in ("pom", "cu"):
        return preserves(f, a, b, "leq", "leq")
    if kind == "q":
        return preserves(f, a, b, "leq", "leq") and preserves(f, a, b, "aux", "aux")
    if kind == "w":
        return preserves(f, a, b, "aux", "aux") and is_continuous(f, a, b)
    raise StructuralError(f"unknown morphism kind {kind!r}")


def hom_set(
    a: FiniteOrderedStructure,
    b: FiniteOrderedStructure,
    kind: str,
    config: Config = DEFAULT_CONFIG,
) -> list[dict[str, str]]:
    """All morphisms a -> b of the given kind, by backtracking enumeration.

    Images of elements expressible as sums of already-assigned elements are
    forced, so branching happens only on additive generators.  The number of
    candidate maps explored is capped by config.hom_cap.
    """
    els = a.elements
    sums = [
        (x, y, a.add(x, y))
        for x, y in itertools.combinations_with_replacement(els, 2)
        if x != a.zero and y != a.zero
    ]
    out: list[dict[str, str]] = []
    explored = 0

    def extend(assigned: dict[str, str]):
        nonlocal explored
        forced = True
        while forced:
            forced = False
            for x, y, z in sums:
                if x in assigned and y in assigned and z not in assigned:
                    assigned[z] = b.add(assigned[x], assigned[y])
                    forced = True
                elif x in assigned and y in assigned and z in assigned:
                    if assigned[z] != b.add(assigned[x], assigned[y]):
                        return
        todo = [x for x in els if x not in assigned]
        if not todo:
            f = dict(assigned)
            if is_morphism(f, a, b, kind):
                out.append(f)
            return
        pivot = todo[0]
        for img in b.elements:
            explored += 1
            if explored > config.hom_cap:
                raise BudgetError(
                    f"hom enumeration exceeded cap {config.hom_cap}"
                )
            child = dict(assigned)
            child[pivot] = img
            extend(child)

    extend({a.zero: b.zero})
    out.sort(key=lambda f: tuple(b.idx(f[x]) for x in els))
    return out


def compose(g: dict[str, str], f: dict[str, str]) -> dict[str, str]:
    """g after f."""
    return {x: g[y] for x, y in f.items()}


def find_isomorphism(
    a: FiniteOrderedStructure, b: FiniteOrderedStructure, kind: str = "cu",
    config: Config = DEFAULT_CONFIG,
) -> dict[str, str] | None:
    """A bijective morphism whose inverse is a morphism, or None."""
    if a.size != b.size:
        return None
    for f in hom_set(a, b, kind, config):
        if len(set(f.values())) != a.size:
            continue
        inv = {v: k for k, v in f.items()}
        if is_morphism(inv, b, a, kind):
            return f
    return None
