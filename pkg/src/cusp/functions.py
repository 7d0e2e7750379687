"""Finitely described total functions on an index set, and decidable subsets.

Exact forms are tuples (finite index sets) and eventually periodic functions
(naturals); both admit exact pointwise comparison through a common window:
behaviour beyond the longest prefix repeats with the least common period, so
finitely many indices determine every pointwise question.  Closure-backed
forms evaluate anywhere but only support the queries their rule certifies
(support, boundedness, sublevel sets); everything else degrades to sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .core import INF, ExtNatSemigroup
from .kinds import StructuralError


# ---------------------------------------------------------------------------
# index families


@dataclass(frozen=True)
class Family:
    """Component family: an explicit finite list, or one component repeated
    over the naturals."""

    components: tuple | None = None
    component: Any = None

    def __post_init__(self):
        if (self.components is None) == (self.component is None):
            raise StructuralError("family is either a finite list or constant over naturals")

    @property
    def finite(self) -> bool:
        return self.components is not None

    @property
    def size(self) -> int:
        if self.components is None:
            raise StructuralError("infinite index set")
        return len(self.components)

    def component_at(self, j: int):
        if self.components is not None:
            return self.components[j]
        return self.component

    def label(self) -> dict:
        if self.components is not None:
            return {"index": "finite", "size": self.size}
        return {"index": "naturals"}


def constant_family(component) -> Family:
    return Family(component=component)


def list_family(components: list) -> Family:
    return Family(components=tuple(components))


# ---------------------------------------------------------------------------
# closure rules


@dataclass(frozen=True)
class ClosureRule:
    """Deterministic rule j -> value with optional certified bounds.

    `sublevel(params, c)` returns the set {j : value(j) <= c} as an explicit
    finite frozenset or the string "all"; `support_kind` describes
    {j : value(j) != 0}; `diverges` certifies that every sublevel set is
    finite (the values tend to infinity).  Rules without certificates force
    sampled semi-decisions downstream.
    """

    name: str
    value_at: Callable[[tuple, int], Any]
    sublevel: Callable[[tuple, Any], Any] | None = None
    support_kind: Callable[[tuple], Any] | None = None
    bounded: Callable[[tuple], bool] | None = None
    diverges: Callable[[tuple], bool] | None = None


_RULES: dict[str, ClosureRule] = {}


def register_rule(rule: ClosureRule) -> None:
    _RULES[rule.name] = rule


def get_rule(name: str) -> ClosureRule:
    if name not in _RULES:
        raise StructuralError(f"unknown closure rule {name!r}")
    return _RULES[name]


def _ident_sublevel(params: tuple, c) -> Any:
    if c == INF:
        return "all"
    return frozenset(range(int(c) + 1))


register_rule(
    ClosureRule(
        name="ident",
        value_at=lambda params, j: j,
        sublevel=_ident_sublevel,
        support_kind=lambda params: ("cofinite", frozenset({0})),
        bounded=lambda params: False,
        diverges=lambda params: True,
    )
)


def _affine_sublevel(params: tuple, c) -> Any:
    a, b = params
    if c == INF:
        return "all"
    if a == 0:
        return "all" if b <= c else frozenset()
    top = (int(c) - b) // a
    return frozenset(range(max(top + 1, 0)))


register_rule(
    ClosureRule(
        name="affine",
        value_at=lambda params, j: params[0] * j + params[1],
        sublevel=_affine_sublevel,
        support_kind=lambda params: (
            ("cofinite", frozenset({0})) if params[1] == 0 and params[0] > 0
            else ("all",) if params[1] != 0
            else ("explicit", frozenset())
        ),
        bounded=lambda params: params[0] == 0,
        diverges=lambda params: params[0] > 0,
    )
)


# ---------------------------------------------------------------------------
# subset descriptors


@dataclass(frozen=True)
class Descriptor:
    """Decidable subset of the index set in normal form: a bitmask over a
    finite index set, or prefix bits plus periodic pattern bits over the
    naturals."""

    finite_size: int | None
    mask: int = 0
    prefix: tuple[bool, ...] = ()
    pattern: tuple[bool, ...] = (False,)

    def contains(self, j: int) -> bool:
        if self.finite_size is not None:
            return bool(self.mask >> j & 1)
        if j < len(self.prefix):
            return self.prefix[j]
        return self.pattern[(j - len(self.prefix)) % len(self.pattern)]

    def is_empty(self) -> bool:
        if self.finite_size is not None:
            return self.mask == 0
        return not any(self.prefix) and not any(self.pattern)

    def is_all(self) -> bool:
        if self.finite_size is not None:
            return self.mask == (1 << self.finite_size) - 1
        return all(self.prefix) and all(self.pattern)

    def is_finite_set(self) -> bool:
        if self.finite_size is not None:
            return True
        return not any(self.pattern)

    def min_missing(self) -> int | None:
        """Least index not in the set, or None."""
        if self.finite_size is not None:
            for j in range(self.finite_size):
                if not self.contains(j):
                    return j
            return None
        for j in range(len(self.prefix) + len(self.pattern)):
            if not self.contains(j):
                return j
        return None

    def min_member(self) -> int | None:
        if self.finite_size is not None:
            rng = range(self.finite_size)
        else:
            rng = range(len(self.prefix) + len(self.pattern))
        for j in rng:
            if self.contains(j):
                return j
        return None

    def complement(self) -> "Descriptor":
        if self.finite_size is not None:
            return Descriptor(self.finite_size, ~self.mask & (1 << self.finite_size) - 1)
        return Descriptor(
            None,
            prefix=tuple(not b for b in self.prefix),
            pattern=tuple(not b for b in self.pattern),
        )

    def union(self, other: "Descriptor") -> "Descriptor":
        return combine(self, other, lambda a, b: a or b)

    def intersect(self, other: "Descriptor") -> "Descriptor":
        return combine(self, other, lambda a, b: a and b)

    def is_subset(self, other: "Descriptor") -> bool:
        return self.intersect(other.complement()).is_empty()

    def eventual_period(self) -> tuple[int, tuple[bool, ...]]:
        return len(self.pattern), self.pattern

    def to_json(self) -> dict:
        if self.finite_size is not None:
            return {"form": "mask", "size": self.finite_size, "bits": self.mask}
        return {
            "form": "eventually-periodic",
            "prefix": [int(b) for b in self.prefix],
            "pattern": [int(b) for b in self.pattern],
        }


def combine(a: Descriptor, b: Descriptor, op) -> Descriptor:
    if (a.finite_size is None) != (b.finite_size is None):
        raise StructuralError("descriptors over different index sets")
    if a.finite_size is not None:
        if a.finite_size != b.finite_size:
            raise StructuralError("descriptors over different index sets")
        mask = sum(
            1 << j
            for j in range(a.finite_size)
            if op(a.contains(j), b.contains(j))
        )
        return Descriptor(a.finite_size, mask)
    lp = max(len(a.prefix), len(b.prefix))
    pp = math.lcm(len(a.pattern), len(b.pattern))
    prefix = tuple(op(a.contains(j), b.contains(j)) for j in range(lp))
    pattern = tuple(op(a.contains(lp + i), b.contains(lp + i)) for i in range(pp))
    return Descriptor(None, prefix=prefix, pattern=pattern)


def explicit_set(indices, finite_size: int | None) -> Descriptor:
    idx = frozenset(indices)
    if finite_size is not None:
        return Descriptor(finite_size, sum(1 << j for j in idx))
    top = max(idx, default=-1)
    return Descriptor(None, prefix=tuple(j in idx for j in range(top + 1)), pattern=(False,))


def cofinite_set(excluded, finite_size: int | None) -> Descriptor:
    return explicit_set(excluded, finite_size).complement()


def all_indices(finite_size: int | None) -> Descriptor:
    if finite_size is not None:
        return Descriptor(finite_size, (1 << finite_size) - 1)
    return Descriptor(None, prefix=(), pattern=(True,))


def no_indices(finite_size: int | None) -> Descriptor:
    if finite_size is not None:
        return Descriptor(finite_size, 0)
    return Descriptor(None, prefix=(), pattern=(False,))


def periodic_set(prefix, pattern) -> Descriptor:
    if not pattern:
        raise StructuralError("periodic descriptor needs a nonempty pattern")
    return Descriptor(None, prefix=tuple(map(bool, prefix)), pattern=tuple(map(bool, pattern)))


def descriptor_from_json(doc: dict, finite_size: int | None = None) -> Descriptor:
    form = doc["form"]
    if form == "mask":
        return Descriptor(doc["size"], doc["bits"])
    if form == "explicit":
        return explicit_set(doc["indices"], finite_size)
    if form == "cofinite":
        return cofinite_set(doc["excluded"], finite_size)
    if form == "eventually-periodic":
        return periodic_set(doc["prefix"], doc["pattern"])
    if form == "combo":
        op = doc["op"]
        args = [descriptor_from_json(d, finite_size) for d in doc["args"]]
        if op == "not":
            return args[0].complement()
        acc = args[0]
        for d in args[1:]:
            acc = acc.union(d) if op == "union" else acc.intersect(d)
        return acc
    raise StructuralError(f"unknown descriptor form {form!r}")


# ---------------------------------------------------------------------------
# described functions


@dataclass(frozen=True)
class Fn:
    """Total function from the index set into a component carrier.

    form is one of
      ("tuple", values)            over a finite index set
      ("evp", prefix, pattern)     eventually periodic over the naturals
      ("closure", rule, params)    rule-backed over the naturals
      ("cutlevel", anchor, n)      stage-n compact approximant of an anchor
      ("sum", (fn, fn))            pointwise sum
    """

    family: Family
    form: tuple

    # -- constructors -------------------------------------------------------

    @staticmethod
    def tuple_fn(family: Family, values) -> "Fn":
        if not family.finite:
            raise StructuralError("tuple form needs a finite index set")
        vals = tuple(values)
        if len(vals) != family.size:
            raise StructuralError("tuple form must cover the whole index set")
        return Fn(family, ("tuple", vals))

    @staticmethod
    def evp(family: Family, prefix, pattern) -> "Fn":
        if family.finite:
            raise StructuralError("eventually periodic form needs the naturals")
        if not pattern:
            raise StructuralError("pattern must be nonempty")
        return Fn(family, ("evp", tuple(prefix), tuple(pattern)))

    @staticmethod
    def constant(family: Family, value) -> "Fn":
        if family.finite:
            return Fn.tuple_fn(family, (value,) * family.size)
        return Fn.evp(family, (), (value,))

    @staticmethod
    def finite_support(family: Family, default, overrides: dict[int, Any]) -> "Fn":
        if family.finite:
            vals = [default] * family.size
            for j, v in overrides.items():
                vals[j] = v
            return Fn.tuple_fn(family, vals)
        top = max(overrides, default=-1)
        prefix = tuple(overrides.get(j, default) for j in range(top + 1))
        return Fn.evp(family, prefix, (default,))

    @staticmethod
    def closure(family: Family, rule: str, params: tuple = ()) -> "Fn":
        if family.finite:
            raise StructuralError("closure form needs the naturals")
        if not isinstance(family.component, ExtNatSemigroup):
            raise StructuralError("closure rules yield extended-natural values")
        get_rule(rule)
        return Fn(family, ("closure", rule, params))

    # -- evaluation ----------------------------------------------------------

    def value_at(self, j: int):
        kind = self.form[0]
        if kind == "tuple":
            return self.form[1][j]
        if kind == "evp":
            prefix, pattern = self.form[1], self.form[2]
            if j < len(prefix):
                return prefix[j]
            return pattern[(j - len(prefix)) % len(pattern)]
        if kind == "closure":
            return get_rule(self.form[1]).value_at(self.form[2], j)
        if kind == "cutlevel":
            anchor, n = self.form[1], self.form[2]
            return self.family.component_at(j).approx(anchor.value_at(j), n)
        a, b = self.form[1]
        return self.family.component_at(j).add(a.value_at(j), b.value_at(j))

    def windowable(self) -> bool:
        kind = self.form[0]
        if kind in ("tuple", "evp"):
            return True
        if kind == "sum":
            return all(p.windowable() for p in self.form[1])
        return False

    def closure_parts(self) -> list[tuple]:
        kind = self.form[0]
        if kind in ("closure", "cutlevel"):
            return [self.form]
        if kind == "sum":
            return [p for f in self.form[1] for p in f.closure_parts()]
        return []

    def window(self) -> tuple[int, int]:
        """(prefix length, period) covering this function's behaviour."""
        kind = self.form[0]
        if kind == "tuple":
            return (self.family.size, 1)
        if kind == "evp":
            return (len(self.form[1]), len(self.form[2]))
        if kind == "sum":
            (l1, p1), (l2, p2) = (f.window() for f in self.form[1])
            return (max(l1, l2), math.lcm(p1, p2))
        raise StructuralError("closure forms have no window")

    def add(self, other: "Fn") -> "Fn":
        if self.family != other.family:
            raise StructuralError("cannot add functions over different families")
        if self.form[0] == "tuple" and other.form[0] == "tuple":
            comp = self.family.component_at
            return Fn.tuple_fn(
                self.family,
                tuple(comp(j).add(a, b) for j, (a, b) in enumerate(zip(self.form[1], other.form[1]))),
            )
        if self.windowable() and other.windowable():
            lp, pp = window_of([self, other])
            comp = self.family.component
            vals = [comp.add(self.value_at(j), other.value_at(j)) for j in range(lp + pp)]
            return Fn.evp(self.family, vals[:lp], vals[lp:])
        return Fn(self.family, ("sum", (self, other)))

    # -- certified services --------------------------------------------------

    def bounded(self) -> bool | None:
        """Whether the value set has a finite upper bound (extnat carriers)."""
        kind = self.form[0]
        if kind in ("tuple", "evp"):
            return all(v != INF for v in self.values_on_window())
        if kind == "closure":
            rule = get_rule(self.form[1])
            return None if rule.bounded is None else rule.bounded(self.form[2])
        if kind == "cutlevel":
            return True
        parts = [f.bounded() for f in self.form[1]]
        if any(p is False for p in parts):
            return False
        if all(p is True for p in parts):
            return True
        return None

    def diverges(self) -> bool | None:
        """Whether every sublevel set is finite (values tend to infinity)."""
        kind = self.form[0]
        if kind in ("tuple", "evp", "cutlevel"):
            return False
        if kind == "closure":
            rule = get_rule(self.form[1])
            return None if rule.diverges is None else rule.diverges(self.form[2])
        parts = list(self.form[1])
        if any(f.diverges() is True for f in parts):
            # the sum dominates a properly divergent summand
            return True
        if all(f.bounded() is True for f in parts):
            return False
        return None

    def values_on_window(self) -> list:
        lp, pp = self.window()
        return [self.value_at(j) for j in range(lp + pp)]

    def sublevel_set(self, c) -> Descriptor | None:
        """{j : value(j) <= c}; exact for windowable forms and certified rules."""
        if self.family.finite:
            comp = self.family.component_at
            mask = sum(
                1 << j for j in range(self.family.size)
                if _value_leq(comp(j), self.value_at(j), c)
            )
            return Descriptor(self.family.size, mask)
        comp = self.family.component
        if self.windowable():
            lp, pp = self.window()
            return Descriptor(
                None,
                prefix=tuple(_value_leq(comp, self.value_at(j), c) for j in range(lp)),
                pattern=tuple(_value_leq(comp, self.value_at(lp + i), c) for i in range(pp)),
            )
        if c == INF:
            return all_indices(None)
        # sum with closure parts: the sublevel set is contained in every
        # part's sublevel set; refine a certified finite one pointwise
        kind = self.form[0]
        if kind == "closure":
            rule = get_rule(self.form[1])
            if rule.sublevel is None:
                return None
            s = rule.sublevel(self.form[2], c)
            return all_indices(None) if s == "all" else explicit_set(s, None)
        if kind == "cutlevel":
            anchor, n = self.form[1], self.form[2]
            if n <= c:
                return all_indices(None)
            return anchor.sublevel_set(c)
        for part in self.closure_parts():
            s = _part_sublevel(part, c)
            if s is None or s == "all":
                continue
            members = [j for j in s if _value_leq(comp, self.value_at(j), c)]
            return explicit_set(members, None)
        return None

    def support(self) -> Descriptor | None:
        """{j : value(j) != 0}."""
        size = self.family.size if self.family.finite else None
        if self.family.finite:
            comp = self.family.component_at
            return Descriptor(
                size,
                sum(1 << j for j in range(size) if self.value_at(j) != comp(j).zero),
            )
        comp = self.family.component
        if self.windowable():
            lp, pp = self.window()
            return Descriptor(
                None,
                prefix=tuple(self.value_at(j) != comp.zero for j in range(lp)),
                pattern=tuple(self.value_at(lp + i) != comp.zero for i in range(pp)),
            )
        kind = self.form[0]
        if kind == "closure":
            rule = get_rule(self.form[1])
            if rule.support_kind is None:
                return None
            return _support_from_kind(rule.support_kind(self.form[2]))
        if kind == "cutlevel":
            anchor, n = self.form[1], self.form[2]
            if n == 0:
                return no_indices(None)
            return anchor.support()
        supports = [f.support() for f in self.form[1]]
        if any(s is None for s in supports):
            return None
        return supports[0].union(supports[1])

    def to_json(self) -> dict:
        kind = self.form[0]
        comp = self.family.component_at(0) if self.family.finite else self.family.component
        if kind == "tuple":
            return {"form": "tuple", "values": [_value_json(v) for v in self.form[1]]}
        if kind == "evp":
            return {
                "form": "eventually-periodic",
                "prefix": [_value_json(v) for v in self.form[1]],
                "pattern": [_value_json(v) for v in self.form[2]],
            }
        if kind == "closure":
            return {"form": "closure", "rule": self.form[1], "params": list(self.form[2])}
        if kind == "cutlevel":
            return {"form": "cutlevel", "anchor": self.form[1].to_json(), "stage": self.form[2]}
        return {"form": "sum", "parts": [f.to_json() for f in self.form[1]]}


def _part_sublevel(part: tuple, c):
    if part[0] == "closure":
        rule = get_rule(part[1])
        if rule.sublevel is None:
            return None
        return rule.sublevel(part[2], c)
    anchor, n = part[1], part[2]
    if n <= c:
        return "all"
    s = anchor.sublevel_set(c)
    if s is None:
        return None
    if s.is_all():
        return "all"
    if not s.is_finite_set():
        return None
    size = len(s.prefix) + len(s.pattern)
    return frozenset(j for j in range(size) if s.contains(j))


def _value_json(v):
    return "inf" if v == INF else v


def _value_leq(component, a, b) -> bool:
    return component.leq(a, b)


def _support_from_kind(kind: tuple) -> Descriptor:
    if kind[0] == "all":
        return all_indices(None)
    if kind[0] == "explicit":
        return explicit_set(kind[1], None)
    if kind[0] == "cofinite":
        return cofinite_set(kind[1], None)
    raise StructuralError(f"unknown support kind {kind!r}")


def window_of(fns) -> tuple[int, int]:
    lp, pp = 0, 1
    for f in fns:
        l, p = f.window()
        lp = max(lp, l)
        pp = math.lcm(pp, p)
    return lp, pp


def pointwise_descriptor(fns: list[Fn], predicate) -> Descriptor:
    """{j : predicate(component_j, values_at_j)} for windowable functions."""
    family = fns[0].family
    if family.finite:
        mask = sum(
            1 << j
            for j in range(family.size)
            if predicate(family.component_at(j), [f.value_at(j) for f in fns])
        )
        return Descriptor(family.size, mask)
    lp, pp = window_of(fns)
    comp = family.component
    return Descriptor(
        None,
        prefix=tuple(predicate(comp, [f.value_at(j) for f in fns]) for j in range(lp)),
        pattern=tuple(predicate(comp, [f.value_at(lp + i) for f in fns]) for i in range(pp)),
    )


def leq_descriptor(f: Fn, g: Fn) -> Descriptor | None:
    """{j : f(j) <= g(j)} in the component order, or None when not certified."""
    if f.family != g.family:
        raise StructuralError("functions over different families")
    if f.windowable() and g.windowable():
        return pointwise_descriptor([f, g], lambda comp, vals: comp.leq(vals[0], vals[1]))
    if f.form == g.form:
        return all_indices(None)
    special = _cutlevel_compare(f, g)
    if special is not None:
        return special
    f2, g2 = _cancel_common(f, g)
    if (f2, g2) != (f, g):
        return leq_descriptor(f2, g2)
    if f.windowable() and not g.windowable():
        acc = no_indices(None)
        lp, pp = f.window()
        seen = set()
        for j in range(lp + pp):
            v = f.value_at(j)
            if v in seen:
                continue
            seen.add(v)
            positions = pointwise_descriptor([f], lambda comp, vals: vals[0] == v)
            if v == 0:
                ok = all_indices(None)
            elif v == INF:
                inf_at = _infinity_positions(g)
                if inf_at is None:
                    return None
                ok = inf_at
            else:
                below = g.sublevel_set(_pred(v))
                if below is None:
                    return None
                ok = below.complement()
            acc = acc.union(positions.intersect(ok))
        return acc
    if not f.windowable() and g.windowable():
        acc = no_indices(None)
        lp, pp = g.window()
        seen = set()
        for j in range(lp + pp):
            v = g.value_at(j)
            if v in seen:
                continue
            seen.add(v)
            positions = pointwise_descriptor([g], lambda comp, vals: vals[0] == v)
            ok = f.sublevel_set(v)
            if ok is None:
                return None
            acc = acc.union(positions.intersect(ok))
        return acc
    return None


def _pred(v):
    """Predecessor in the extended naturals; {x : x >= v} = not {x <= pred v}."""
    return v - 1


def _cutlevel_compare(f: Fn, g: Fn) -> Descriptor | None:
    """Comparisons between an anchor and its own cut-down stages.

    {A <= min(A, m)} = {A <= m} and {min(A, n) <= min(A, m)} collapses to
    {A <= m} for n > m; both reduce to sublevel sets of the anchor.
    """
    if g.form[0] == "cutlevel":
        anchor, m = g.form[1], g.form[2]
        if f.form == anchor.form:
            return f.sublevel_set(m)
        if f.form[0] == "cutlevel" and f.form[1].form == anchor.form:
            n = f.form[2]
            if n <= m:
                return all_indices(None)
            return anchor.sublevel_set(m)
    return None


def _infinity_positions(g: Fn) -> Descriptor | None:
    """{j : g(j) = inf}; closure rules yield finite values."""
    if g.windowable():
        return pointwise_descriptor([g], lambda comp, vals: vals[0] == INF)
    if g.form[0] == "closure":
        return no_indices(None)
    parts = [_infinity_positions(p) for p in g.form[1]]
    if any(p is None for p in parts):
        return None
    return parts[0].union(parts[1])


def _cancel_common(f: Fn, g: Fn):
    """Strip one shared closure summand from both sides; sound where the
    component is cancellative at finite values (the extended naturals)."""
    fparts = _flatten_sum(f)
    gparts = _flatten_sum(g)
    for p in list(fparts):
        if p.form[0] in ("closure", "cutlevel") and any(q.form == p.form for q in gparts):
            fparts.remove(p)
            q = next(q for q in gparts if q.form == p.form)
            gparts.remove(q)
            return _rebuild_sum(f.family, fparts), _rebuild_sum(g.family, gparts)
    return f, g


def _flatten_sum(f: Fn) -> list[Fn]:
    if f.form[0] == "sum":
        return [p for part in f.form[1] for p in _flatten_sum(part)]
    return [f]


def zero_fn(family: Family) -> Fn:
    if family.finite:
        return Fn.tuple_fn(family, tuple(family.component_at(j).zero for j in range(family.size)))
    return Fn.constant(family, family.component.zero)


def _rebuild_sum(family: Family, parts: list[Fn]) -> Fn:
    if not parts:
        return zero_fn(family)
    acc = parts[0]
    for p in parts[1:]:
        acc = acc.add(p)
    return acc


def fn_from_json(family: Family, doc: dict) -> Fn:
    form = doc["form"]

    def val(v):
        return INF if v == "inf" else v

    if form == "tuple":
        return Fn.tuple_fn(family, tuple(val(v) for v in doc["values"]))
    if form == "eventually-periodic":
        return Fn.evp(family, [val(v) for v in doc["prefix"]], [val(v) for v in doc["pattern"]])
    if form == "finite-support":
        return Fn.finite_support(
            family, val(doc["default"]), {int(k): val(v) for k, v in doc["overrides"].items()}
        )
    if form == "closure":
        return Fn.closure(family, doc["rule"], tuple(doc["params"]))
    if form == "sum":
        parts = [fn_from_json(family, d) for d in doc["parts"]]
        acc = parts[0]
        for p in parts[1:]:
            acc = acc.add(p)
        return acc
    raise StructuralError(f"unknown function form {form!r}")
