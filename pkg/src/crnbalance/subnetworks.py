"""Decomposition of a balanced graph along a partition of the reactions.

Splitting the reaction set R into disjoint subsets induces subnetworks
(species and complexes inferred from the kept reactions), per-subset
reaction graphs, and one refined graph of the full network whose balance
is equivalent to simultaneous balance of all the pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .balance import node_balance_residual
from .graphs import ReactionGraph, graph_from_partition
from .network import Complex, Reaction, ReactionNetwork, mass_action_rates, numeric_kappa
from .partitions import (
    AdmissiblePartition,
    split_source_index,
    split_target_index,
)


class SplitError(ValueError):
    """Raised on overlapping, empty or out-of-range reaction subsets."""


@dataclass(frozen=True)
class SubnetworkSplit:
    """Disjoint 1-based reaction subsets; the unnamed rest forms the complement."""

    network: ReactionNetwork
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "subsets", tuple(tuple(sorted(s)) for s in self.subsets)
        )
        seen: set[int] = set()
        for subset in self.subsets:
            if not subset:
                raise SplitError("empty reaction subset")
            for j in subset:
                if not 1 <= j <= self.network.p:
                    raise SplitError(f"reaction index {j} outside 1..{self.network.p}")
                if j in seen:
                    raise SplitError(f"reaction r{j} appears in two subsets")
                seen.add(j)

    @cached_property
    def complement(self) -> tuple[int, ...]:
        named = {j for s in self.subsets for j in s}
        return tuple(j for j in range(1, self.network.p + 1) if j not in named)

    @cached_property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        """The subsets plus the complement (when nonempty), in order."""
        if self.complement:
            return self.subsets + (self.complement,)
        return self.subsets


@dataclass(frozen=True)
class Subnetwork:
    """Network generated by a reaction subset, with maps back to the parent."""

    parent: ReactionNetwork
    network: ReactionNetwork
    reaction_indices: tuple[int, ...]
    species_indices: tuple[int, ...]

    def project_state(self, x: Sequence) -> tuple:
        return tuple(x[i] for i in self.species_indices)

    def project_kappa(self, kappa: Sequence) -> tuple:
        return tuple(kappa[j - 1] for j in self.reaction_indices)


def subnetwork(net: ReactionNetwork, reactions: Sequence[int]) -> Subnetwork:
    """The subnetwork generated by the given 1-based reaction indices."""
    indices = tuple(sorted(set(reactions)))
    if not indices:
        raise SplitError("a subnetwork needs at least one reaction")
    for j in indices:
        if not 1 <= j <= net.p:
            raise SplitError(f"reaction index {j} outside 1..{net.p}")
    used_complexes: list[int] = []
    for j in indices:
        r = net.reactions[j - 1]
        for c in (r.source, r.target):
            if c not in used_complexes:
                used_complexes.append(c)
    species_indices = tuple(
        i
        for i in range(net.n)
        if any(net.complexes[c].coeffs[i] for c in used_complexes)
    )
    species = tuple(net.species[i] for i in species_indices)
    complexes = tuple(
        Complex(tuple(net.complexes[c].coeffs[i] for i in species_indices))
        for c in used_complexes
    )
    renumber = {c: k for k, c in enumerate(used_complexes)}
    reactions_new = tuple(
        Reaction(
            renumber[net.reactions[j - 1].source],
            renumber[net.reactions[j - 1].target],
            net.reactions[j - 1].rate,
        )
        for j in indices
    )
    sub = ReactionNetwork(species, complexes, reactions_new)
    return Subnetwork(net, sub, indices, species_indices)


def _translate_split_index(
    net: ReactionNetwork, sub: Subnetwork, original: int
) -> int | None:
    """Parent split index -> split index of the subnetwork, None if dropped.

    Reversibility pairings can differ between parent and subnetwork (a
    pair may lose its partner), so source/target roles are translated,
    not raw positions.
    """
    j = (original - 1) // 2 + 1
    try:
        k = sub.reaction_indices.index(j) + 1
    except ValueError:
        return None
    if original == split_source_index(net, j):
        return split_source_index(sub.network, k)
    return split_target_index(sub.network, k)


@dataclass(frozen=True)
class InducedPart:
    """One reaction subset with its subnetwork and induced reaction graph."""

    reactions: tuple[int, ...]
    subnetwork: Subnetwork
    graph: ReactionGraph


@dataclass(frozen=True)
class InducedGraphs:
    """Per-part graphs plus the refined union graph on the full network."""

    source: ReactionGraph
    split: SubnetworkSplit
    parts: tuple[InducedPart, ...]
    union_graph: ReactionGraph

    @property
    def non_reversible_parts(self) -> tuple[int, ...]:
        """1-based indices of parts whose induced graph blocks joint balance."""
        return tuple(
            i for i, part in enumerate(self.parts, start=1)
            if not part.graph.is_weakly_reversible
        )

    @property
    def jointly_balanceable(self) -> bool:
        """False forces C_{G_i} v > 0 somewhere: no positive state can be
        balanced for every part simultaneously, whatever kappa is."""
        return not self.non_reversible_parts


def induced_graphs(g: ReactionGraph, split: SubnetworkSplit) -> InducedGraphs:
    """Subset-induced reaction graphs and the refined union graph.

    The union graph's partition intersects each block of g's partition
    with the split indices of one part, so the original graph is always
    a coarsening of it.
    """
    net = g.network
    if split.network != net:
        raise SplitError("split belongs to a different network")
    parts: list[InducedPart] = []
    for subset in split.parts:
        sub = subnetwork(net, subset)
        block_map: dict[int, list[int]] = {}
        for block_index, block in enumerate(g.partition.blocks):
            for original in block:
                translated = _translate_split_index(net, sub, original)
                if translated is not None:
                    block_map.setdefault(block_index, []).append(translated)
        blocks = tuple(
            tuple(sorted(block_map[i])) for i in sorted(block_map)
        )
        part_graph = graph_from_partition(
            sub.network, AdmissiblePartition(sub.network, blocks)
        )
        parts.append(InducedPart(sub.reaction_indices, sub, part_graph))

    membership = {}
    for i, subset in enumerate(split.parts):
        for j in subset:
            membership[split_source_index(net, j)] = i
            membership[split_target_index(net, j)] = i
    refined: dict[tuple[int, int], list[int]] = {}
    for block_index, block in enumerate(g.partition.blocks):
        for original in block:
            refined.setdefault((block_index, membership[original]), []).append(original)
    blocks = tuple(tuple(sorted(b)) for b in refined.values())
    union = graph_from_partition(
        net, AdmissiblePartition(net, blocks).canonical()
    )
    return InducedGraphs(g, split, tuple(parts), union)


@dataclass(frozen=True)
class DecompositionCheck:
    """Three views of simultaneous balance; they agree identically."""

    whole_and_subsets: bool
    union_graph: bool
    all_parts: bool

    @property
    def agree(self) -> bool:
        return self.whole_and_subsets == self.union_graph == self.all_parts

    @property
    def balanced(self) -> bool:
        return self.union_graph


def _residual_zero(residual: Sequence, tol: float) -> bool:
    if all(isinstance(r, (int, Fraction)) for r in residual):
        return all(r == 0 for r in residual)
    return max(abs(float(r)) for r in residual) < tol


def decomposition_check(
    net: ReactionNetwork,
    g: ReactionGraph,
    split: SubnetworkSplit,
    kappa: Sequence | None,
    x: Sequence,
    tol: float = 1e-9,
) -> DecompositionCheck:
    """Equivalent balance verdicts for a state under a reaction split.

    Checks (a) balance of the whole graph plus each named subset's graph,
    (b) balance of the refined union graph, (c) balance of every part
    including the complement. Exact arithmetic when x and kappa are
    rational, tolerance tol otherwise.
    """
    induced = induced_graphs(g, split)
    kap = numeric_kappa(net, kappa)

    def balanced_on(graph: ReactionGraph, state: Sequence, rates_kappa) -> bool:
        v = mass_action_rates(graph.network, state, rates_kappa)
        return _residual_zero(node_balance_residual(graph, v), tol)

    part_balanced = [
        balanced_on(part.graph, part.subnetwork.project_state(x), part.subnetwork.project_kappa(kap))
        for part in induced.parts
    ]
    named = part_balanced[: len(split.subsets)]
    whole = balanced_on(g, x, kap)
    union = balanced_on(induced.union_graph, x, kap)
    return DecompositionCheck(
        whole_and_subsets=whole and all(named),
        union_graph=union,
        all_parts=all(part_balanced),
    )
