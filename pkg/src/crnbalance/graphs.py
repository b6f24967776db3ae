"""Reaction graphs: labeled digraphs with one edge per reaction.

A graph is determined by an admissible partition; nodes are the blocks
in order, labels are the shared complex of each block, and reaction r_j
contributes the edge from the node holding its source split index to the
node holding its target split index. Node and reaction indices are
1-based throughout the public surface (matrix rows/columns are the usual
0-based Python lists).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from . import ratmat
from .network import ReactionNetwork
from .partitions import (
    AdmissiblePartition,
    refines,
    split_labels,
    split_source_index,
    split_target_index,
)


class StepKind(Enum):
    SAME_COMPONENT = "SameComponent"
    DIFFERENT_COMPONENTS = "DifferentComponents"


@dataclass(frozen=True)
class ReactionGraph:
    network: ReactionNetwork
    partition: AdmissiblePartition
    labels: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        """Node count."""
        return len(self.labels)

    def label_vector(self, node: int) -> tuple[int, ...]:
        """Coefficient vector of the complex labeling a (1-based) node."""
        return self.network.complexes[self.labels[node - 1]].coeffs

    @cached_property
    def incidence_matrix(self) -> tuple[tuple[int, ...], ...]:
        """m x p matrix C_G; column j has -1 at the source node, +1 at the target."""
        rows = [[0] * self.network.p for _ in range(self.m)]
        for j, (a, b) in enumerate(self.edges):
            rows[a - 1][j] -= 1
            rows[b - 1][j] += 1
        return tuple(tuple(r) for r in rows)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Weakly connected components as sorted node tuples, ordered by smallest node."""
        parent = list(range(self.m + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        groups: dict[int, list[int]] = {}
        for node in range(1, self.m + 1):
            groups.setdefault(find(node), []).append(node)
        return tuple(sorted((tuple(sorted(g)) for g in groups.values()), key=min))

    @property
    def n_components(self) -> int:
        return len(self.components)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        """1-based component id per node (index node-1)."""
        out = [0] * self.m
        for cid, comp in enumerate(self.components, start=1):
            for node in comp:
                out[node - 1] = cid
        return tuple(out)

    @cached_property
    def strong_components(self) -> tuple[tuple[int, ...], ...]:
        """Strongly connected components (Kosaraju), as sorted node tuples."""
        succ: dict[int, list[int]] = {v: [] for v in range(1, self.m + 1)}
        pred: dict[int, list[int]] = {v: [] for v in range(1, self.m + 1)}
        for a, b in self.edges:
            succ[a].append(b)
            pred[b].append(a)
        order: list[int] = []
        seen = [False] * (self.m + 1)
        for start in range(1, self.m + 1):
            if seen[start]:
                continue
            stack = [(start, iter(succ[start]))]
            seen[start] = True
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if not seen[nxt]:
                        seen[nxt] = True
                        stack.append((nxt, iter(succ[nxt])))
                        advanced = True
                        break
                if not advanced:
                    order.append(node)
                    stack.pop()
        assigned = [0] * (self.m + 1)
        comps: list[list[int]] = []
        for start in reversed(order):
            if assigned[start]:
                continue
            comps.append([])
            cid = len(comps)
            stack2 = [start]
            assigned[start] = cid
            while stack2:
                node = stack2.pop()
                comps[-1].append(node)
                for nxt in pred[node]:
                    if not assigned[nxt]:
                        assigned[nxt] = cid
                        stack2.append(nxt)
        return tuple(sorted((tuple(sorted(c)) for c in comps), key=min))

    @cached_property
    def is_weakly_reversible(self) -> bool:
        """True iff every connected component is strongly connected."""
        strong_of = {}
        for cid, comp in enumerate(self.strong_components):
            for node in comp:
                strong_of[node] = cid
        return all(strong_of[a] == strong_of[b] for a, b in self.edges)

    @cached_property
    def deficiency(self) -> int:
        value = self.m - self.n_components - self.network.rank
        assert value >= 0, f"negative deficiency {value}"
        return value


@dataclass(frozen=True)
class GraphMorphism:
    """Node map from a finer graph onto a coarser one (label and edge preserving)."""

    source: ReactionGraph
    target: ReactionGraph
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        src, tgt = self.source, self.target
        if len(self.mapping) != src.m:
            raise ValueError(f"mapping has {len(self.mapping)} entries for {src.m} nodes")
        if set(self.mapping) != set(range(1, tgt.m + 1)):
            raise ValueError("morphism is not onto the target nodes")
        for node in range(1, src.m + 1):
            if src.labels[node - 1] != tgt.labels[self.mapping[node - 1] - 1]:
                raise ValueError(f"morphism breaks the label of node {node}")
        for j, (a, b) in enumerate(src.edges):
            image = (self.mapping[a - 1], self.mapping[b - 1])
            if image != tgt.edges[j]:
                raise ValueError(f"morphism breaks edge r{j + 1}: {image} != {tgt.edges[j]}")

    def __call__(self, node: int) -> int:
        return self.mapping[node - 1]

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """0/1 matrix B with C_target = B C_source."""
        rows = [[0] * self.source.m for _ in range(self.target.m)]
        for node, image in enumerate(self.mapping, start=1):
            rows[image - 1][node - 1] = 1
        return tuple(tuple(r) for r in rows)


def graph_from_partition(net: ReactionNetwork, partition: AdmissiblePartition) -> ReactionGraph:
    """The reaction graph named by an admissible partition (blocks in given order)."""
    if partition.network != net:
        raise ValueError("partition belongs to a different network")
    labels_by_index = split_labels(net)
    node_labels = tuple(labels_by_index[block[0] - 1] for block in partition.blocks)
    lookup = partition.block_of
    edges = tuple(
        (lookup[split_source_index(net, j)], lookup[split_target_index(net, j)])
        for j in range(1, net.p + 1)
    )
    return ReactionGraph(net, partition, node_labels, edges)


def canonical_split_graph(net: ReactionNetwork) -> ReactionGraph:
    """Finest graph: every split index its own node (2p nodes, p components)."""
    blocks = tuple((i,) for i in range(1, 2 * net.p + 1))
    return graph_from_partition(net, AdmissiblePartition(net, blocks))


def canonical_complex_graph(net: ReactionNetwork) -> ReactionGraph:
    """Coarsest graph: one node per complex, in network numbering."""
    labels = split_labels(net)
    classes: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels, start=1):
        classes.setdefault(lab, []).append(idx)
    blocks = tuple(tuple(classes[c]) for c in sorted(classes))
    return graph_from_partition(net, AdmissiblePartition(net, blocks))


def detailed_graph(net: ReactionNetwork) -> ReactionGraph:
    """One 2-node component per reversible pair, one per irreversible reaction."""
    back_of = {rev: b for b, rev in enumerate(net.reverse_index) if rev is not None}
    blocks: list[tuple[int, ...]] = []
    for j in range(net.p):
        if net.reverse_index[j] is not None:
            continue
        if j in back_of:
            b = back_of[j]
            blocks.append((2 * j + 1, 2 * b + 1))
            blocks.append((2 * j + 2, 2 * b + 2))
        else:
            blocks.append((2 * j + 1,))
            blocks.append((2 * j + 2,))
    ordered = tuple(sorted(blocks, key=min))
    return graph_from_partition(net, AdmissiblePartition(net, ordered))


def is_weakly_reversible(g: ReactionGraph) -> bool:
    return g.is_weakly_reversible


def deficiency(g: ReactionGraph) -> int:
    return g.deficiency


def equivalent(g1: ReactionGraph, g2: ReactionGraph) -> bool:
    """Graph equivalence: same network and same partition up to block order."""
    return g1.partition.same_partition(g2.partition)


def inclusion_morphism(g_small: ReactionGraph, g_big: ReactionGraph) -> GraphMorphism:
    """The collapse map V(g_big) -> V(g_small) when g_small <= g_big.

    g_small <= g_big means g_big's partition refines g_small's; the map
    sends each block of g_big to the block of g_small containing it.
    """
    if not refines(g_big.partition, g_small.partition):
        raise ValueError("not ordered: the bigger graph's partition must refine the smaller's")
    lookup = g_small.partition.block_of
    mapping = tuple(lookup[block[0]] for block in g_big.partition.blocks)
    return GraphMorphism(g_big, g_small, mapping)


def join_nodes(g: ReactionGraph, i1: int, i2: int) -> tuple[ReactionGraph, StepKind]:
    """Merge two equally labeled nodes; returns the coarser graph and the step kind.

    SAME_COMPONENT drops the deficiency by one, DIFFERENT_COMPONENTS
    keeps it. The resulting graph's blocks are canonically reordered.
    """
    for i in (i1, i2):
        if not 1 <= i <= g.m:
            raise ValueError(f"node {i} out of range 1..{g.m}")
    if i1 == i2:
        raise ValueError(f"cannot join node {i1} with itself")
    if g.labels[i1 - 1] != g.labels[i2 - 1]:
        a = g.network.complexes[g.labels[i1 - 1]].format(g.network.species)
        b = g.network.complexes[g.labels[i2 - 1]].format(g.network.species)
        raise ValueError(f"nodes {i1} ({a}) and {i2} ({b}) have different labels")
    kind = (
        StepKind.SAME_COMPONENT
        if g.component_of[i1 - 1] == g.component_of[i2 - 1]
        else StepKind.DIFFERENT_COMPONENTS
    )
    merged = tuple(sorted(g.partition.blocks[i1 - 1] + g.partition.blocks[i2 - 1]))
    rest = [b for k, b in enumerate(g.partition.blocks) if k not in (i1 - 1, i2 - 1)]
    blocks = tuple(sorted(rest + [merged], key=min))
    return graph_from_partition(g.network, AdmissiblePartition(g.network, blocks)), kind
