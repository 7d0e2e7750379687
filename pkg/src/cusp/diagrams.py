"""Finite diagrams of finite structures: named nodes, generating arrows given
by value tables, and an optional composition witness table."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import FiniteOrderedStructure
from .kinds import StructuralError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    mapping: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)


@dataclass(frozen=True)
class Diagram:
    """Nodes and generating arrows of a finite index category.

    Limits and colimits over the generated category only constrain along the
    generators (compatibility composes), so the composition table is a witness
    used for validation when present, not an input to the constructions.
    """

    nodes: tuple[tuple[str, FiniteOrderedStructure], ...]
    arrows: tuple[Arrow, ...] = ()
    compositions: tuple[tuple[str, str, str], ...] = ()

    def node(self, name: str) -> FiniteOrderedStructure:
        for n, s in self.nodes:
            if n == name:
                return s
        raise StructuralError(f"unknown diagram node {name!r}")

    def node_names(self) -> list[str]:
        return [n for n, _ in self.nodes]

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise StructuralError(f"unknown diagram arrow {name!r}")

    def validate(self) -> None:
        names = self.node_names()
        if len(set(names)) != len(names):
            raise StructuralError("duplicate diagram node names")
        for a in self.arrows:
            src, dst = self.node(a.source), self.node(a.target)
            m = a.as_dict()
            for x in src.elements:
                if x not in m:
                    raise StructuralError(f"arrow {a.name} is not total at {x!r}")
                dst.idx(m[x])
        for first, second, composite in self.compositions:
            f, g, h = self.arrow(first), self.arrow(second), self.arrow(composite)
            if f.target != g.source or h.source != f.source or h.target != g.target:
                raise StructuralError(f"composition ({first};{second})={composite} is ill-typed")
            fm, gm, hm = f.as_dict(), g.as_dict(), h.as_dict()
            for x in self.node(f.source).elements:
                if gm[fm[x]] != hm[x]:
                    raise StructuralError(
                        f"functoriality fails: ({first};{second})({x}) != {composite}({x})"
                    )

    def to_json(self) -> dict:
        return {
            "nodes": [{"name": n, "structure": s.to_json()} for n, s in self.nodes],
            "arrows": [
                {"name": a.name, "source": a.source, "target": a.target,
                 "table": {x: y for x, y in a.mapping}}
                for a in self.arrows
            ],
            "compositions": [list(c) for c in self.compositions],
        }


def diagram(nodes: dict[str, FiniteOrderedStructure],
            arrows: list[tuple[str, str, str, dict[str, str]]] = (),
            compositions: list[tuple[str, str, str]] = ()) -> Diagram:
    d = Diagram(
        tuple(nodes.items()),
        tuple(Arrow(n, s, t, tuple(sorted(m.items()))) for n, s, t, m in arrows),
        tuple(compositions),
    )
    d.validate()
    return d
