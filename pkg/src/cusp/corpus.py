"""Deterministic corpora of small finite structures used across the test and
acceptance suites.  Everything here is built once, validated, and cached."""
from __future__ import annotations

from functools import lru_cache

from .core import (
    FiniteOrderedStructure,
    as_w_structure,
    build_structure,
    check_cu_axioms,
    check_q_axioms,
    check_w_axioms,
    trunc_nat,
    two_point,
)
from .kinds import StructuralError


def o6_counterexample() -> FiniteOrderedStructure:
    """Four-element Cu-semigroup {0, x, y, inf} with the algebraic order, where
    y is idempotent and x, y are incomparable; fails the O6 decomposition."""
    return build_structure(
        ["0", "x", "y", "inf"],
        "0",
        {
            ("x", "x"): "inf",
            ("x", "y"): "inf",
            ("y", "y"): "y",
            ("x", "inf"): "inf",
            ("y", "inf"): "inf",
            ("inf", "inf"): "inf",
        },
        order="algebraic",
    )


def perforated_example() -> FiniteOrderedStructure:
    """{0, a, b, t} with 2a = 2b = t but a, b incomparable: 2a <= 2b while
    a is not below b, so every unperforation variant fails."""
    return build_structure(
        ["0", "a", "b", "t"],
        "0",
        {
            ("a", "a"): "t",
            ("a", "b"): "t",
            ("b", "b"): "t",
            ("a", "t"): "t",
            ("b", "t"): "t",
            ("t", "t"): "t",
        },
        order=[("0", "a"), ("0", "b"), ("a", "t"), ("b", "t")],
    )


def ext_nat_trunc(k: int) -> FiniteOrderedStructure:
    """{0..k, inf}: sums above k overflow to infinity."""
    labels = [str(i) for i in range(k + 1)] + ["inf"]
    add = {}
    for i in range(k + 1):
        for j in range(i, k + 1):
            add[(str(i), str(j))] = str(i + j) if i + j <= k else "inf"
        add[(str(i), "inf")] = "inf"
    add[("inf", "inf")] = "inf"
    order = [(str(i), str(i + 1)) for i in range(k)] + [(str(k), "inf")]
    return build_structure(labels, "0", add, order=order)


def crown_with_top() -> FiniteOrderedStructure:
    """{0, a, b, t} where a, b are incomparable idempotents below an absorbing
    top; a valid Cu-semigroup that is far from a lattice."""
    return build_structure(
        ["0", "a", "b", "t"],
        "0",
        {
            ("a", "a"): "a",
            ("b", "b"): "b",
            ("a", "b"): "t",
            ("a", "t"): "t",
            ("b", "t"): "t",
            ("t", "t"): "t",
        },
        order=[("0", "a"), ("0", "b"), ("a", "t"), ("b", "t")],
    )


def diamond_idempotent() -> FiniteOrderedStructure:
    """{0, a, t}: one idempotent middle element under an absorbing top."""
    return build_structure(
        ["0", "a", "t"],
        "0",
        {("a", "a"): "a", ("a", "t"): "t", ("t", "t"): "t"},
        order=[("0", "a"), ("a", "t")],
    )


def product_structure(a: FiniteOrderedStructure, b: FiniteOrderedStructure) -> FiniteOrderedStructure:
    from .products import cu_product_finite

    return cu_product_finite([a, b]).structure


@lru_cache(maxsize=None)
def corpus_cu(max_size: int = 6) -> tuple[FiniteOrderedStructure, ...]:
    """At least twenty pairwise distinct finite Cu-semigroups of size <= 6."""
    singles = [
        trunc_nat(0),
        trunc_nat(1),
        trunc_nat(2),
        trunc_nat(3),
        trunc_nat(4),
        trunc_nat(5),
        two_point(),
        ext_nat_trunc(1),
        ext_nat_trunc(2),
        ext_nat_trunc(3),
        ext_nat_trunc(4),
        diamond_idempotent(),
        o6_counterexample(),
        perforated_example(),
        crown_with_top(),
    ]
    prods = [
        product_structure(two_point(), two_point()),
        product_structure(two_point(), trunc_nat(1)),
        product_structure(two_point(), trunc_nat(2)),
        product_structure(trunc_nat(1), trunc_nat(1)),
        product_structure(trunc_nat(1), trunc_nat(2)),
        product_structure(two_point(), ext_nat_trunc(1)),
        product_structure(trunc_nat(1), diamond_idempotent()),
    ]
    out = [s for s in singles + prods if s.size <= max_size]
    for s in out:
        rep = check_cu_axioms(s)
        if not rep.passed:
            raise StructuralError(f"corpus structure failed Cu axioms: {rep}")
    return tuple(out)


def w_from_zero_aux(n: int) -> FiniteOrderedStructure:
    """{0..n-1} with saturating addition and x aux y iff x = 0; the classical
    example whose completion collapses to a point."""
    base = trunc_nat(n - 1)
    aux = [("0", lbl) for lbl in base.elements]
    return build_structure(
        list(base.elements),
        "0",
        {
            (a, b): base.add(a, b)
            for a in base.elements
            for b in base.elements
        },
        order=[(str(i), str(i + 1)) for i in range(n - 1)],
        aux=aux,
    )


def w_half_round() -> FiniteOrderedStructure:
    """{0, a, t}: aux relates 0 below everything and t below itself, so a is
    not round and its class falls together with the class of 0."""
    base = diamond_idempotent()
    return build_structure(
        list(base.elements),
        "0",
        {(x, y): base.add(x, y) for x in base.elements for y in base.elements},
        order=[("0", "a"), ("a", "t")],
        aux=[("0", "0"), ("0", "a"), ("0", "t"), ("a", "t"), ("t", "t")],
    )


@lru_cache(maxsize=None)
def corpus_w(max_size: int = 4) -> tuple[FiniteOrderedStructure, ...]:
    """W-semigroups: small Cu-semigroups viewed through way-below, plus
    structures whose auxiliary relation is strictly finer than the order."""
    out: list[FiniteOrderedStructure] = []
    for s in corpus_cu():
        if s.size <= max_size:
            out.append(as_w_structure(s))
    out.append(w_from_zero_aux(4))
    out.append(w_half_round())
    for s in out:
        rep = check_w_axioms(s)
        if not rep.passed:
            raise StructuralError(f"corpus W-structure failed axioms: {rep}")
    return tuple(out)


def q_not_round_middle() -> FiniteOrderedStructure:
    """{0, x, inf} where x is not aux-round; its completion drops x."""
    return build_structure(
        ["0", "x", "inf"],
        "0",
        {("x", "x"): "inf", ("x", "inf"): "inf", ("inf", "inf"): "inf"},
        order=[("0", "x"), ("x", "inf")],
        aux=[("0", "0"), ("0", "x"), ("0", "inf"), ("x", "inf"), ("inf", "inf")],
    )


@lru_cache(maxsize=None)
def corpus_q(max_size: int = 4) -> tuple[FiniteOrderedStructure, ...]:
    out: list[FiniteOrderedStructure] = []
    for s in corpus_cu():
        if s.size <= max_size:
            out.append(as_w_structure(s))
    out.append(q_not_round_middle())
    for s in out:
        rep = check_q_axioms(s)
        if not rep.passed:
            raise StructuralError(f"corpus Q-structure failed axioms: {rep}")
    return tuple(out)
