"""Strongly connected components and condensation for small directed graphs.

Graphs are adjacency dicts from hashable node to an iterable of successors.
Tarjan's algorithm is implemented iteratively so deep chains cannot hit the
recursion limit. A component is emitted only after every component reachable
from it, so when edges point from a node to its inputs the component list is
already in evaluation order (inputs first).
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping

Node = Hashable
Graph = Mapping[Node, Iterable[Node]]


def strongly_connected_components(graph: Graph) -> list[tuple[Node, ...]]:
    """Tarjan SCCs; each component is a tuple, list is reverse-topological."""
    index_of: dict[Node, int] = {}
    lowlink: dict[Node, int] = {}
    on_stack: set[Node] = set()
    stack: list[Node] = []
    counter = 0
    result: list[tuple[Node, ...]] = []

    for root in graph:
        if root in index_of:
            continue
        # Each work item is (node, iterator over remaining successors).
        work: list[tuple[Node, list[Node]]] = [(root, list(graph.get(root, ())))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, successors = work[-1]
            advanced = False
            while successors:
                succ = successors.pop()
                if succ not in index_of:
                    index_of[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, list(graph.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                component: list[Node] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                result.append(tuple(component))
    return result


def has_self_loop(graph: Graph, node: Node) -> bool:
    return node in set(graph.get(node, ()))


def nontrivial_components(graph: Graph) -> list[tuple[Node, ...]]:
    """Components that represent real cycles: size over one, or a self-loop."""
    return [
        comp
        for comp in strongly_connected_components(graph)
        if len(comp) > 1 or has_self_loop(graph, comp[0])
    ]


def condensation_order(graph: Graph) -> tuple[list[tuple[Node, ...]], dict[Node, int]]:
    """Components plus node -> component index.

    With edges oriented node -> inputs, the list is safe to evaluate front to
    back: every input's component appears before the components that use it.
    """
    components = strongly_connected_components(graph)
    membership = {node: idx for idx, comp in enumerate(components) for node in comp}
    return components, membership
