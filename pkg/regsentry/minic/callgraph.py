"""Syntactic call graph of one program version."""

from __future__ import annotations

import networkx as nx

from ..shared.errors import UnknownFunction
from .nodes import SourceUnit, calls_in


class CallGraph:
    """Caller -> callee edges; an edge exists iff the caller's body contains a call to the callee."""

    def __init__(self, graph: nx.DiGraph):
        self.graph = nx.freeze(graph)

    @classmethod
    def from_functions(cls, functions) -> "CallGraph":
        graph = nx.DiGraph()
        for function in functions:
            graph.add_node(function.name)
        for function in functions:
            for callee in calls_in(function.body):
                graph.add_edge(function.name, callee)
        return cls(graph)

    @classmethod
    def from_unit(cls, unit: SourceUnit) -> "CallGraph":
        return cls.from_functions(unit.functions)

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.graph.nodes)

    @property
    def edges(self) -> frozenset:
        return frozenset(self.graph.edges)

    def __contains__(self, name) -> bool:
        return name in self.graph

    def cycle(self):
        """Return one call cycle as a list of function names, or None."""
        try:
            edges = nx.find_cycle(self.graph)
        except nx.NetworkXNoCycle:
            return None
        return [caller for caller, _ in edges]

    def reachable_from(self, name) -> set:
        if name not in self.graph:
            raise UnknownFunction(name)
        return {name} | nx.descendants(self.graph, name)


def callers_of(name, cg: CallGraph) -> set:
    if name not in cg:
        raise UnknownFunction(name)
    return set(cg.graph.predecessors(name))


def callees_of(name, cg: CallGraph) -> set:
    if name not in cg:
        raise UnknownFunction(name)
    return set(cg.graph.successors(name))
