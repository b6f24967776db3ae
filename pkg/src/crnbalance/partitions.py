"""Admissible partitions of the split-node indices.

Each reaction r_j owns the two split indices 2j-1 and 2j (1-based). For a
reaction that is the reverse of an earlier one, 2j-1 carries its target
and 2j its source, so that the shared complexes of a reversible pair sit
at aligned indices; all other reactions put the source at 2j-1. A
partition of {1..2p} is admissible when every block is label-pure, and
each admissible partition names one reaction graph (blocks = nodes, in
block order).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .network import ReactionNetwork

DEFAULT_MAX_PARTITIONS = 100000


class PartitionError(ValueError):
    """Raised for partitions that are not admissible for the network."""


class TooManyPartitionsError(PartitionError):
    """Raised when enumeration would exceed the configured cap."""


def split_labels(net: ReactionNetwork) -> tuple[int, ...]:
    """Complex index (0-based) carried by each split index 1..2p.

    Entry i-1 is the label of split index i.
    """
    labels: list[int] = []
    for j, r in enumerate(net.reactions):
        if net.reverse_index[j] is None:
            labels.extend((r.source, r.target))
        else:
            labels.extend((r.target, r.source))
    return tuple(labels)


def split_source_index(net: ReactionNetwork, reaction: int) -> int:
    """1-based split index holding reaction r_<reaction>'s source (reaction 1-based)."""
    if not 1 <= reaction <= net.p:
        raise ValueError(f"reaction index {reaction} out of range 1..{net.p}")
    j = reaction - 1
    return 2 * j + 2 if net.reverse_index[j] is not None else 2 * j + 1


def split_target_index(net: ReactionNetwork, reaction: int) -> int:
    """1-based split index holding reaction r_<reaction>'s target."""
    if not 1 <= reaction <= net.p:
        raise ValueError(f"reaction index {reaction} out of range 1..{net.p}")
    j = reaction - 1
    return 2 * j + 1 if net.reverse_index[j] is not None else 2 * j + 2


@dataclass(frozen=True)
class AdmissiblePartition:
    """An ordered, label-pure partition of {1..2p}; block order = node order."""

    network: ReactionNetwork
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        total = 2 * self.network.p
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))
        seen: set[int] = set()
        labels = split_labels(self.network)
        for block in self.blocks:
            if not block:
                raise PartitionError("empty block")
            for idx in block:
                if not 1 <= idx <= total:
                    raise PartitionError(f"split index {idx} out of range 1..{total}")
                if idx in seen:
                    raise PartitionError(f"split index {idx} appears twice")
                seen.add(idx)
            block_labels = {labels[idx - 1] for idx in block}
            if len(block_labels) > 1:
                names = sorted(
                    self.network.complexes[c].format(self.network.species) for c in block_labels
                )
                raise PartitionError(f"block {block} mixes complexes {names}")
        if len(seen) != total:
            missing = sorted(set(range(1, total + 1)) - seen)
            raise PartitionError(f"split indices not covered: {missing}")

    @property
    def size(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_of(self) -> dict[int, int]:
        """Split index -> 1-based block (node) number."""
        return {idx: k + 1 for k, block in enumerate(self.blocks) for idx in block}

    def canonical(self) -> "AdmissiblePartition":
        """Same partition with blocks ordered by their smallest index."""
        return AdmissiblePartition(self.network, tuple(sorted(self.blocks, key=min)))

    def same_partition(self, other: "AdmissiblePartition") -> bool:
        """Equality up to block order (graph equivalence)."""
        return set(self.blocks) == set(other.blocks) and self.network == other.network


def _require_same_network(p1: AdmissiblePartition, p2: AdmissiblePartition) -> None:
    if p1.network != p2.network:
        raise ValueError("partitions belong to different networks")


def refines(p1: AdmissiblePartition, p2: AdmissiblePartition) -> bool:
    """True iff every block of p1 is contained in a block of p2."""
    _require_same_network(p1, p2)
    lookup = p2.block_of
    return all(len({lookup[i] for i in block}) == 1 for block in p1.blocks)


def lattice_meet(p1: AdmissiblePartition, p2: AdmissiblePartition) -> AdmissiblePartition:
    """Common refinement (blockwise intersections), canonically ordered."""
    _require_same_network(p1, p2)
    blocks = []
    for b1 in p1.blocks:
        members = set(b1)
        for b2 in p2.blocks:
            inter = members & set(b2)
            if inter:
                blocks.append(tuple(sorted(inter)))
    return AdmissiblePartition(p1.network, tuple(sorted(blocks, key=min)))


def lattice_join(p1: AdmissiblePartition, p2: AdmissiblePartition) -> AdmissiblePartition:
    """Finest partition refined by both (transitive closure), canonically ordered."""
    _require_same_network(p1, p2)
    parent = list(range(2 * p1.network.p + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p1, p2):
        for block in part.blocks:
            root = find(block[0])
            for idx in block[1:]:
                parent[find(idx)] = root
    groups: dict[int, list[int]] = {}
    for idx in range(1, 2 * p1.network.p + 1):
        groups.setdefault(find(idx), []).append(idx)
    blocks = tuple(sorted((tuple(sorted(g)) for g in groups.values()), key=min))
    return AdmissiblePartition(p1.network, blocks)


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions, in the order produced by inserting the last item."""
    if not items:
        yield []
        return
    if len(items) == 1:
        yield [[items[0]]]
        return
    last = items[-1]
    for smaller in _set_partitions(items[:-1]):
        for k in range(len(smaller)):
            yield smaller[:k] + [smaller[k] + [last]] + smaller[k + 1:]
        yield smaller + [[last]]


def bell_number(n: int) -> int:
    """Number of set partitions of an n-element set (Bell triangle)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for val in row:
            nxt.append(nxt[-1] + val)
        row = nxt
    return row[0]


def count_admissible_partitions(net: ReactionNetwork) -> int:
    labels = split_labels(net)
    sizes: dict[int, int] = {}
    for lab in labels:
        sizes[lab] = sizes.get(lab, 0) + 1
    count = 1
    for size in sizes.values():
        count *= bell_number(size)
    return count


def enumerate_admissible_partitions(
    net: ReactionNetwork, max_count: int | None = None
) -> Iterator[AdmissiblePartition]:
    """Yield every admissible partition, canonically ordered.

    The stream is the product of set-partition enumerations of the label
    classes (classes in complex order), so it is deterministic. Raises
    TooManyPartitionsError up front when the total would exceed
    max_count (default: CRN_MAX_PARTITIONS env var or 100000).
    """
    if max_count is None:
        max_count = int(os.environ.get("CRN_MAX_PARTITIONS", DEFAULT_MAX_PARTITIONS))
    if max_count <= 0:
        raise ValueError(f"max_count must be positive, got {max_count}")
    total = count_admissible_partitions(net)
    if total > max_count:
        raise TooManyPartitionsError(
            f"{total} admissible partitions exceed the cap {max_count}"
        )
    labels = split_labels(net)
    classes: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels, start=1):
        classes.setdefault(lab, []).append(idx)
    class_list = [classes[lab] for lab in sorted(classes)]

    def rec(i: int, acc: list[tuple[int, ...]]) -> Iterator[AdmissiblePartition]:
        if i == len(class_list):
            blocks = tuple(sorted(acc, key=min))
            yield AdmissiblePartition(net, blocks)
            return
        for parts in _set_partitions(class_list[i]):
            yield from rec(i + 1, acc + [tuple(b) for b in parts])

    yield from rec(0, [])


def partition_from_json(net: ReactionNetwork, data) -> AdmissiblePartition:
    """Build a partition from the JSON form [[1,8,9,11],[2,3],...]."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise PartitionError(f"invalid partition JSON: {exc}") from None
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise PartitionError("partition JSON must be an array of arrays")
    for block in data:
        for idx in block:
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise PartitionError(f"partition entries must be integers, got {idx!r}")
    return AdmissiblePartition(net, tuple(tuple(b) for b in data))


def partition_to_json(part: AdmissiblePartition) -> list[list[int]]:
    return [list(block) for block in part.blocks]
