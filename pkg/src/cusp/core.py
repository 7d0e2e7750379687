"""Carriers for positively ordered monoids, builtin semigroups, and axiom checkers.

Finite structures store precomputed tables (O(1) queries during enumeration);
the builtin family uses closed-form predicates.  On a finite carrier every
increasing sequence stabilizes, so the way-below relation coincides with the
order and finite Cu-semigroups are stored without a separate auxiliary matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .kinds import Report, StructuralError

INF = float("inf")


def ext_add(a, b):
    if a == 0:
        return b
    if b == 0:
        return a
    return INF if a is INF or b is INF or a == INF or b == INF else a + b


def ext_times(n, a):
    """n copies of a, with 0*inf = 0 (repeated addition, not multiplication)."""
    if n == 0 or a == 0:
        return 0
    if n == INF or a == INF or a is INF:
        return INF
    return n * a


def ext_label(v) -> str:
    return "inf" if v == INF else str(int(v))


def ext_parse(text: str):
    return INF if text == "inf" else int(text)


# ---------------------------------------------------------------------------
# finite carriers


@dataclass(frozen=True)
class FiniteOrderedStructure:
    """Finite commutative monoid with optional order and auxiliary relation.

    `elements` are opaque interned labels.  `add` is a row-major index table.
    `leq` and `aux` are bitmask rows (bit j of row i set iff element i relates
    to element j).  `leq` may be None for order-free carriers (W-semigroups
    arising from quotients carry only the auxiliary relation).
    """

    elements: tuple[str, ...]
    zero: str
    add_table: tuple[tuple[int, ...], ...]
    leq_rows: tuple[int, ...] | None
    aux_rows: tuple[int, ...] | None = None
    builtin_kind: str | None = None

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise StructuralError("duplicate element labels")
        if self.zero not in self.elements:
            raise StructuralError(f"zero label {self.zero!r} not among elements")
        if len(self.add_table) != n or any(len(r) != n for r in self.add_table):
            raise StructuralError("addition table is not total")
        if any(not (0 <= v < n) for r in self.add_table for v in r):
            raise StructuralError("addition table references unknown element")
        for rows, name in ((self.leq_rows, "leq"), (self.aux_rows, "aux")):
            if rows is not None and len(rows) != n:
                raise StructuralError(f"{name} matrix is not total")

    # -- basic queries ------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def idx(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise StructuralError(f"unknown element {label!r}") from None

    def add(self, a: str, b: str) -> str:
        return self.elements[self.add_table[self.idx(a)][self.idx(b)]]

    def leq(self, a: str, b: str) -> bool:
        if self.leq_rows is None:
            raise StructuralError("structure carries no order relation")
        return bool(self.leq_rows[self.idx(a)] >> self.idx(b) & 1)

    def aux(self, a: str, b: str) -> bool:
        if self.aux_rows is None:
            raise StructuralError("structure carries no auxiliary relation")
        return bool(self.aux_rows[self.idx(a)] >> self.idx(b) & 1)

    def has_order(self) -> bool:
        return self.leq_rows is not None

    def has_aux(self) -> bool:
        return self.aux_rows is not None

    def times(self, n: int, a: str) -> str:
        acc = self.zero
        for _ in range(n):
            acc = self.add(acc, a)
        return acc

    def sum(self, labels: Iterable[str]) -> str:
        acc = self.zero
        for x in labels:
            acc = self.add(acc, x)
        return acc

    def infinity_times(self, a: str) -> str:
        """sup_n n*a; on a finite carrier the multiples stabilize into a cycle."""
        seen = []
        cur = self.zero
        while cur not in seen:
            seen.append(cur)
            cur = self.add(cur, a)
        # the multiples n*a are increasing (0 <= a is translation invariant),
        # so the cycle is a fixed point and equals the supremum
        return seen[-1]

    # -- relation views -----------------------------------------------------

    def rel(self, a: str, b: str, use_aux: bool) -> bool:
        return self.aux(a, b) if use_aux else self.leq(a, b)

    def way_below(self, a: str, b: str) -> bool:
        """On finite carriers increasing sequences stabilize, so << equals <=."""
        return self.leq(a, b)

    def is_compact(self, a: str) -> bool:
        return True

    def approx(self, a: str, n: int) -> str:
        """n-th compact stage below a; every element of a finite Cu is compact."""
        return a

    def label(self, v: str) -> str:
        return v

    def parse_value(self, text: str) -> str:
        self.idx(text)
        return text

    @property
    def is_finite(self) -> bool:
        return True

    def downset(self, a: str, use_aux: bool) -> frozenset[str]:
        return frozenset(z for z in self.elements if self.rel(z, a, use_aux))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "type": "structure",
            "elements": list(self.elements),
            "zero": self.elements.index(self.zero),
            "add": [list(r) for r in self.add_table],
            "leq": list(self.leq_rows) if self.leq_rows is not None else None,
            "aux": list(self.aux_rows) if self.aux_rows is not None else None,
        }

    @staticmethod
    def from_json(doc: dict) -> "FiniteOrderedStructure":
        elements = tuple(doc["elements"])
        return FiniteOrderedStructure(
            elements=elements,
            zero=elements[doc["zero"]],
            add_table=tuple(tuple(r) for r in doc["add"]),
            leq_rows=tuple(doc["leq"]) if doc.get("leq") is not None else None,
            aux_rows=tuple(doc["aux"]) if doc.get("aux") is not None else None,
        )

    def to_dsl(self, name: str) -> str:
        """Canonical text form; parses back to an equal structure."""
        lines = [f"semigroup {name} = finite {{"]
        lines.append("  elements: " + ", ".join(self.elements) + ";")
        lines.append(f"  zero: {self.zero};")
        parts = []
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements[i:], start=i):
                parts.append(f"{a} + {b} = {self.elements[self.add_table[i][j]]};")
        lines.append("  add { " + " ".join(parts) + " }")
        if self.leq_rows is not None:
            rel = [
                f"{a} <= {b};"
                for a in self.elements
                for b in self.elements
                if a != b and self.leq(a, b)
            ]
            lines.append("  order { " + " ".join(rel) + " }")
        if self.aux_rows is not None:
            rel = [f"{a} < {b};" for a in self.elements for b in self.elements if self.aux(a, b)]
            lines.append("  aux { " + " ".join(rel) + " }")
        lines.append("}")
        return "\n".join(lines)


def _close_relation(n: int, pairs: set[tuple[int, int]], reflexive: bool) -> tuple[int, ...]:
    rows = [0] * n
    for a, b in pairs:
        rows[a] |= 1 << b
    if reflexive:
        for i in range(n):
            rows[i] |= 1 << i
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = rows[i]
            m = rows[i]
            j = 0
            while m:
                if m & 1:
                    acc |= rows[j]
                m >>= 1
                j += 1
            if acc != rows[i]:
                rows[i] = acc
                changed = True
    return tuple(rows)


def build_structure(
    elements: list[str],
    zero: str,
    add: dict[tuple[str, str], str],
    order: list[tuple[str, str]] | str | None = None,
    aux: list[tuple[str, str]] | None = None,
    builtin_kind: str | None = None,
) -> FiniteOrderedStructure:
    """Assemble a structure from partial data.

    Addition is completed by commutativity and the zero row; `order` is either
    a generator list (closed under reflexivity and transitivity), the keyword
    "algebraic" (x <= y iff x + u = y for some u), or None for an order-free
    carrier.  The auxiliary generator list is closed under transitivity only.
    """
    n = len(elements)
    index = {e: i for i, e in enumerate(elements)}
    if zero not in index:
        raise StructuralError(f"zero label {zero!r} not among elements")
    table: list[list[int | None]] = [[None] * n for _ in range(n)]
    zi = index[zero]
    for i in range(n):
        table[i][zi] = i
        table[zi][i] = i
    for (a, b), c in add.items():
        for lbl in (a, b, c):
            if lbl not in index:
                raise StructuralError(f"unknown element {lbl!r} in addition table")
        table[index[a]][index[b]] = index[c]
        table[index[b]][index[a]] = index[c]
    for i in range(n):
        for j in range(n):
            if table[i][j] is None:
                raise StructuralError(
                    f"addition table is not total: {elements[i]} + {elements[j]} missing"
                )
    add_table = tuple(tuple(r) for r in table)  # type: ignore[arg-type]

    leq_rows: tuple[int, ...] | None = None
    if order == "algebraic":
        pairs = {
            (i, add_table[i][j])
            for i in range(n)
            for j in range(n)
        }
        leq_rows = _close_relation(n, pairs, reflexive=True)
    elif order is not None:
        pairs = {(index[a], index[b]) for a, b in order}
        leq_rows = _close_relation(n, pairs, reflexive=True)

    aux_rows: tuple[int, ...] | None = None
    if aux is not None:
        pairs = {(index[a], index[b]) for a, b in aux}
        aux_rows = _close_relation(n, pairs, reflexive=False)

    return FiniteOrderedStructure(
        tuple(elements), zero, add_table, leq_rows, aux_rows, builtin_kind
    )


# ---------------------------------------------------------------------------
# builtins


class ExtNatSemigroup:
    """Extended naturals N u {inf}: the prototypical countably based algebraic
    Cu-semigroup.  m << n iff m is finite and m <= n; compacts are the finite
    values and every element is the supremum of its cut-down chain."""

    kind = "extnat"
    zero = 0
    is_finite = False

    def add(self, a, b):
        return ext_add(a, b)

    def leq(self, a, b) -> bool:
        return a <= b

    def way_below(self, a, b) -> bool:
        return a != INF and a <= b

    def is_compact(self, a) -> bool:
        return a != INF

    def approx(self, a, n: int):
        return min(a, n)

    def times(self, n, a):
        return ext_times(n, a)

    def label(self, v) -> str:
        return ext_label(v)

    def parse_value(self, text: str):
        return ext_parse(text)

    def __repr__(self) -> str:
        return "ExtNat"

    def to_json(self) -> dict:
        return {"type": "builtin", "kind": "extnat"}


EXT_NAT = ExtNatSemigroup()


def two_point() -> FiniteOrderedStructure:
    """{0, inf} with 0 + inf = inf; all elements compact, << equals <=."""
    return build_structure(
        ["0", "inf"], "0", {("inf", "inf"): "inf"}, order=[("0", "inf")],
        builtin_kind="twopoint",
    )


def trunc_nat(k: int) -> FiniteOrderedStructure:
    """{0..k} with saturating addition; a finite totally ordered Cu-semigroup."""
    if k < 0:
        raise StructuralError("truncnat level must be >= 0")
    labels = [str(i) for i in range(k + 1)]
    add = {
        (str(i), str(j)): str(min(i + j, k))
        for i in range(k + 1)
        for j in range(i, k + 1)
    }
    order = [(str(i), str(i + 1)) for i in range(k)]
    return build_structure(labels, "0", add, order=order, builtin_kind=f"truncnat {k}")


def builtin(kind: str, k: int | None = None):
    if kind == "extnat":
        return EXT_NAT
    if kind == "twopoint":
        return two_point()
    if kind == "truncnat":
        if k is None:
            raise StructuralError("truncnat requires a level")
        return trunc_nat(k)
    raise StructuralError(f"unknown builtin kind {kind!r}")


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainDescriptor:
    """Finitely described increasing chain: explicit levels plus a tail.

    tail is ("const",) to repeat the last level forever (which must then be
    compact / round), or ("cutdown", anchor) for the stage-n compact
    approximants of a fixed anchor value.
    """

    levels: tuple
    tail: tuple

    def level(self, component, n: int):
        if self.tail[0] == "cutdown":
            return component.approx(self.tail[1], n)
        k = len(self.levels)
        return self.levels[min(n, k - 1)]

    def sup(self, component):
        if self.tail[0] == "cutdown":
            return self.tail[1]
        return self.levels[-1]

    def validate(self, component) -> None:
        if self.tail[0] == "const":
            if not self.levels:
                raise StructuralError("constant-tail chain needs at least one level")
            last = self.levels[-1]
            if not component.is_compact(last):
                raise StructuralError("constant-tail chain must end at a compact element")
            for a, b in zip(self.levels, self.levels[1:]):
                if not component.way_below(a, b):
                    raise StructuralError("chain levels are not way-below increasing")
        elif self.tail[0] != "cutdown":
            raise StructuralError(f"unknown chain tail {self.tail[0]!r}")


# ---------------------------------------------------------------------------
# axiom checkers


def check_pom_axioms(s: FiniteOrderedStructure) -> Report:
    """Commutative monoid laws plus a translation-invariant partial order with
    zero minimal.  The witness names the failing law and elements."""
    if s.leq_rows is None:
        raise StructuralError("PoM check requires an order relation")
    els = s.elements
    z = s.zero
    for a in els:
        if s.add(z, a) != a:
            return Report.fail("zero-neutral", (a,))
    for a, b in itertools.combinations_with_replacement(els, 2):
        if s.add(a, b) != s.add(b, a):
            return Report.fail("commutativity", (a, b))
    for a, b, c in itertools.product(els, repeat=3):
        if s.add(s.add(a, b), c) != s.add(a, s.add(b, c)):
            return Report.fail("associativity", (a, b, c))
    for a in els:
        if not s.leq(a, a):
            return Report.fail("order-reflexive", (a,))
        if not s.leq(z, a):
            return Report.fail("zero-minimal", (a,))
    for a, b in itertools.product(els, repeat=2):
        if s.leq(a, b) and s.leq(b, a) and a != b:
            return Report.fail("order-antisymmetric", (a, b))
    for a, b, c in itertools.product(els, repeat=3):
        if s.leq(a, b) and s.leq(b, c) and not s.leq(a, c):
            return Report.fail("order-transitive", (a, b, c))
    for a, b, c in itertools.product(els, repeat=3):
        if s.leq(a, b) and not s.leq(s.add(a, c), s.add(b, c)):
            return Report.fail("translation-invariance", (a, b, c))
    return Report.ok()


def _chain_subsets(s: FiniteOrderedStructure):
    els = s.elements
    for r in range(1, len(els) + 1):
        for sub in itertools.combinations(els, r):
            if all(s.leq(a, b) or s.leq(b, a) for a, b in itertools.combinations(sub, 2)):
                yield sub


def check_cu_axioms(s: FiniteOrderedStructure) -> Report:
    """Suprema of increasing sequences, way-below approximation and additivity,
    and compatibility of addition with suprema, on a finite carrier.

    Increasing sequences stabilize, so the content of the supremum axiom is a
    brute-force least-upper-bound scan over order chains; the approximation
    axiom reduces to reflexivity of the computed way-below relation.  Any
    declared auxiliary relation must coincide with the computed way-below.
    """
    pom = check_pom_axioms(s)
    if not pom.passed:
        return Report.fail("pom:" + (pom.law or ""), pom.witness or ())
    els = s.elements
    # O1: every chain has a least upper bound (its stabilization value)
    for sub in _chain_subsets(s):
        ubs = [u for u in els if all(s.leq(a, u) for a in sub)]
        lubs = [u for u in ubs if all(s.leq(u, v) for v in ubs)]
        if len(lubs) != 1:
            return Report.fail("O1-supremum", sub)
    # O2: every element is a sup of a way-below increasing sequence
    for a in els:
        if not s.way_below(a, a):
            return Report.fail("O2-approximation", (a,))
    # O3: way-below is additive
    for a, b, c, d in itertools.product(els, repeat=4):
        if s.way_below(a, b) and s.way_below(c, d):
            if not s.way_below(s.add(a, c), s.add(b, d)):
                return Report.fail("O3-additivity", (a, b, c, d))
    # O4: sups of increasing sequences add; sequences stabilize, so the law
    # amounts to termwise sums of two-step chains staying chains with the
    # expected eventual value
    for a, b, c, d in itertools.product(els, repeat=4):
        if s.leq(a, b) and s.leq(c, d):
            if not s.leq(s.add(a, c), s.add(b, d)):
                return Report.fail("O4-sup-additivity", (a, b, c, d))
    if s.aux_rows is not None:
        for a, b in itertools.product(els, repeat=2):
            if s.aux(a, b) != s.way_below(a, b):
                return Report.fail("aux-vs-way-below", (a, b))
    return Report.ok()


def check_w_axioms(s: FiniteOrderedStructure) -> Report:
    """Cofinality, additivity, and sum-decomposition laws of the transitive
    auxiliary relation; any order on the carrier is ignored."""
    if s.aux_rows is None:
        raise StructuralError("W check requires an auxiliary relation")
    els = s.elements
    for a, b, c in itertools.product(els, repeat=3):
        if s.aux(a, b) and s.aux(b, c) and not s.aux(a, c):
            raise StructuralError(f"auxiliary relation is not transitive at ({a}, {b}, {c})")
    for a in els:
        if not s.aux(s.zero, a):
            return Report.fail("W0-zero-below", (a,))
    # W1: a cofinal aux-increasing sequence below x exists iff some round t
    # (t aux t) with t aux x dominates the downset of x
    for x in els:
        down = s.downset(x, use_aux=True)
        found = any(
            s.aux(t, t) and s.aux(t, x) and all(s.aux(z, t) for z in down)
            for t in els
        )
        if not found:
            return Report.fail("W1-cofinality", (x,))
    for a, b, c, d in itertools.product(els, repeat=4):
        if s.aux(a, b) and s.aux(c, d) and not s.aux(s.add(a, c), s.add(b, d)):
            return Report.fail("W3-additivity", (a, b, c, d))
    for x, y, z in itertools.product(els, repeat=3):
        if s.aux(x, s.add(y, z)):
            ok = any(
                s.aux(yp, y) and s.aux(zp, z) and s.aux(x, s.add(yp, zp))
                for yp in els
                for zp in els
            )
            if not ok:
                return Report.fail("W4-decomposition", (x, y, z))
    return Report.ok()


def check_q_axioms(s: FiniteOrderedStructure) -> Report:
    """PoM laws plus an additive auxiliary relation compatible with the order.

    Suprema of increasing sequences exist automatically on a finite carrier and
    addition respects them, so those two axioms carry no extra content here.
    """
    if s.aux_rows is None:
        raise StructuralError("Q check requires an auxiliary relation")
    pom = check_pom_axioms(s)
    if not pom.passed:
        return Report.fail("pom:" + (pom.law or ""), pom.witness or ())
    els = s.elements
    for a, b in itertools.product(els, repeat=2):
        if s.aux(a, b) and not s.leq(a, b):
            return Report.fail("aux-below-order", (a, b))
    for w, x, y, z in itertools.product(els, repeat=4):
        if s.leq(w, x) and s.aux(x, y) and s.leq(y, z) and not s.aux(w, z):
            return Report.fail("aux-order-stability", (w, x, y, z))
    for a in els:
        if not s.aux(s.zero, a):
            return Report.fail("aux-zero-below", (a,))
    for a, b, c, d in itertools.product(els, repeat=4):
        if s.aux(a, b) and s.aux(c, d) and not s.aux(s.add(a, c), s.add(b, d)):
            return Report.fail("aux-additivity", (a, b, c, d))
    return Report.ok()


def check_O6(s: FiniteOrderedStructure) -> Report:
    """Exhaustive check of the almost-Riesz decomposition: for x' << x <= y+z
    there are e <= x,y and f <= x,z with x' <= e+f."""
    cu = check_cu_axioms(s)
    if not cu.passed:
        return cu
    els = s.elements
    for xp, x, y, z in itertools.product(els, repeat=4):
        if not (s.way_below(xp, x) and s.leq(x, s.add(y, z))):
            continue
        ok = any(
            s.leq(e, x) and s.leq(e, y) and s.leq(f, x) and s.leq(f, z)
            and s.leq(xp, s.add(e, f))
            for e in els
            for f in els
        )
        if not ok:
            return Report.fail("O6", (xp, x, y, z))
    return Report.ok()


# ---------------------------------------------------------------------------
# way-below and compacts across carriers


def way_below(s, x, y) -> bool:
    if isinstance(s, FiniteOrderedStructure):
        return s.way_below(x, y)
    if isinstance(s, ExtNatSemigroup):
        return s.way_below(x, y)
    raise StructuralError(f"unsupported carrier {s!r}")


@dataclass(frozen=True)
class NatCompacts:
    """The compact elements of the extended naturals: plain N with usual order."""

    kind: str = "nat"

    def contains(self, v) -> bool:
        return v != INF and v == int(v) and v >= 0

    def add(self, a, b):
        return a + b

    def leq(self, a, b) -> bool:
        return a <= b


def compacts(s):
    """Sub-PoM of elements x with x << x (x aux x for Q-structures)."""
    if isinstance(s, ExtNatSemigroup):
        return NatCompacts()
    if not isinstance(s, FiniteOrderedStructure):
        raise StructuralError(f"unsupported carrier {s!r}")
    if s.aux_rows is not None:
        keep = [x for x in s.elements if s.aux(x, x)]
    else:
        keep = [x for x in s.elements if s.way_below(x, x)]
    if s.zero not in keep:
        raise StructuralError("compact elements do not contain zero")
    return substructure(s, keep)


def substructure(s: FiniteOrderedStructure, keep: list[str]) -> FiniteOrderedStructure:
    """Restriction to a sum-closed subset, with induced order and aux."""
    index = {e: i for i, e in enumerate(keep)}
    for a, b in itertools.product(keep, repeat=2):
        if s.add(a, b) not in index:
            raise StructuralError(f"subset is not closed under addition at ({a}, {b})")
    add_table = tuple(
        tuple(index[s.add(a, b)] for b in keep) for a in keep
    )
    leq_rows = None
    if s.leq_rows is not None:
        leq_rows = tuple(
            sum(1 << j for j, b in enumerate(keep) if s.leq(a, b)) for a in keep
        )
    aux_rows = None
    if s.aux_rows is not None:
        aux_rows = tuple(
            sum(1 << j for j, b in enumerate(keep) if s.aux(a, b)) for a in keep
        )
    return FiniteOrderedStructure(tuple(keep), s.zero, add_table, leq_rows, aux_rows)


def as_w_structure(s: FiniteOrderedStructure) -> FiniteOrderedStructure:
    """View a finite Cu-semigroup as a W-semigroup via its way-below relation."""
    if s.leq_rows is None:
        raise StructuralError("need an ordered carrier")
    return FiniteOrderedStructure(
        s.elements, s.zero, s.add_table, s.leq_rows, s.leq_rows, s.builtin_kind
    )


def chain_sup(component, chain: ChainDescriptor):
    chain.validate(component)
    return chain.sup(component)
