"""Node-balance machinery: tree constants, kernel conditions, binomials.

For a weakly reversible reaction graph the positive states with zero
inflow-outflow difference at every node form a toric set governed by the
tree constants K_i (sums over spanning in-trees rooted at node i of the
products of edge rate constants). A rate vector kappa admits such a
state iff K^u = 1 for every u in the kernel of the Cayley matrix, and
the states themselves solve one binomial per edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import ratmat
from .graphs import ReactionGraph, StepKind
from .kpoly import KPoly, cancel_common_content
from .network import ReactionNetwork, mass_action_rates, numeric_kappa


class NotWeaklyReversibleError(ValueError):
    """Raised when an operation needs every component strongly connected."""


def _require_weakly_reversible(g: ReactionGraph, what: str) -> None:
    if not g.is_weakly_reversible:
        raise NotWeaklyReversibleError(f"{what} needs a weakly reversible graph")


def _exact_kappa(g: ReactionGraph, kappa: Sequence) -> list[Fraction]:
    values = numeric_kappa(g.network, list(kappa))
    return [Fraction(v) for v in values]


@dataclass(frozen=True)
class CayleyMatrix:
    """Labeling matrix Y stacked on component indicator rows; kernel has dim = deficiency."""

    graph: ReactionGraph
    rows: tuple[tuple[int, ...], ...]


def cayley_matrix(g: ReactionGraph) -> CayleyMatrix:
    label_rows = [
        tuple(g.label_vector(node)[i] for node in range(1, g.m + 1))
        for i in range(g.network.n)
    ]
    indicator_rows = [
        tuple(1 if g.component_of[node - 1] == cid else 0 for node in range(1, g.m + 1))
        for cid in range(1, g.n_components + 1)
    ]
    return CayleyMatrix(g, tuple(label_rows + indicator_rows))


def integer_kernel_basis(a: CayleyMatrix | ReactionGraph) -> tuple[tuple[int, ...], ...]:
    """Primitive integer basis of ker A_G (deterministic echelon construction)."""
    if isinstance(a, ReactionGraph):
        a = cayley_matrix(a)
    basis = ratmat.integer_nullspace(a.rows)
    assert len(basis) == a.graph.deficiency, (
        f"kernel dimension {len(basis)} != deficiency {a.graph.deficiency}"
    )
    return tuple(tuple(v) for v in basis)


@dataclass(frozen=True)
class TreeConstants:
    """K_G as polynomials in k1..kp, one per node."""

    graph: ReactionGraph
    polys: tuple[KPoly, ...]

    def evaluate(self, kappa: Sequence) -> list:
        return [poly.evaluate(kappa) for poly in self.polys]


def _component_in_trees(
    nodes: Sequence[int], edges: Sequence[tuple[int, int, int]], root: int
) -> list[tuple[int, ...]]:
    """Edge-index sets of spanning in-trees rooted at root.

    Every non-root node picks exactly one outgoing edge and the picks
    must be acyclic (equivalently every node reaches the root). Edges are
    (source, target, reaction) with source != root allowed only.
    """
    out_edges: dict[int, list[tuple[int, int]]] = {v: [] for v in nodes}
    for a, b, j in edges:
        out_edges[a].append((b, j))
    others = [v for v in nodes if v != root]
    parent: dict[int, int | None] = {v: None for v in nodes}
    trees: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def creates_cycle(node: int, to: int) -> bool:
        cur: int | None = to
        while cur is not None and cur != root:
            if cur == node:
                return True
            cur = parent.get(cur)
        return False

    def rec(i: int) -> None:
        if i == len(others):
            trees.append(tuple(sorted(chosen)))
            return
        node = others[i]
        for to, j in out_edges[node]:
            if creates_cycle(node, to):
                continue
            parent[node] = to
            chosen.append(j)
            rec(i + 1)
            chosen.pop()
            parent[node] = None

    rec(0)
    return trees


@lru_cache(maxsize=256)
def tree_constants_symbolic(g: ReactionGraph) -> TreeConstants:
    """Spanning in-tree enumeration route for K_G.

    Nodes in components that are not strongly connected may come out as
    the zero polynomial (no in-tree reaches them).
    """
    p = g.network.p
    polys: list[KPoly] = [KPoly.zero(p)] * g.m
    for comp in g.components:
        members = set(comp)
        local_edges = [
            (a, b, j) for j, (a, b) in enumerate(g.edges) if a in members and b in members
        ]
        for root in comp:
            terms = []
            for tree in _component_in_trees(comp, local_edges, root):
                exps = [0] * p
                for j in tree:
                    exps[j] = 1
                terms.append((tuple(exps), 1))
            polys[root - 1] = KPoly.from_terms(p, terms)
    return TreeConstants(g, tuple(polys))


def laplacian_matrix(g: ReactionGraph, kappa: Sequence | None = None):
    """m x m Laplacian with columns summing to zero.

    Entry (b,a) collects the rate constants of edges a->b; numeric
    Fractions when kappa is given, polynomials otherwise.
    """
    if kappa is None:
        p = g.network.p
        rows = [[KPoly.zero(p) for _ in range(g.m)] for _ in range(g.m)]
        for j, (a, b) in enumerate(g.edges):
            var = KPoly.variable(p, j)
            rows[b - 1][a - 1] = rows[b - 1][a - 1] + var
            rows[a - 1][a - 1] = rows[a - 1][a - 1] - var
    else:
        kap = _exact_kappa(g, kappa)
        rows = [[Fraction(0) for _ in range(g.m)] for _ in range(g.m)]
        for j, (a, b) in enumerate(g.edges):
            rows[b - 1][a - 1] += kap[j]
            rows[a - 1][a - 1] -= kap[j]
    return [list(r) for r in rows]


def tree_constants_eval(g: ReactionGraph, kappa: Sequence) -> list[Fraction]:
    """Signed-minor route for K_G(kappa): exact rational determinants.

    For each component take its local Laplacian L, remove the last row
    and column i, and K_i = (-1)^(i+1) det (i the 1-based local index).
    Independent of the enumeration route on purpose.
    """
    kap = _exact_kappa(g, kappa)
    full = laplacian_matrix(g, kap)
    values: list[Fraction] = [Fraction(0)] * g.m
    for comp in g.components:
        local = [[full[a - 1][b - 1] for b in comp] for a in comp]
        size = len(comp)
        for i, node in enumerate(comp, start=1):
            minor = [
                [local[r][c] for c in range(size) if c != i - 1]
                for r in range(size - 1)
            ]
            value = ratmat.det(minor) * (-1) ** (i + 1)
            assert value >= 0, f"negative tree constant {value} at node {node}"
            values[node - 1] = value
    if g.is_weakly_reversible:
        assert all(v > 0 for v in values), "zero tree constant on a weakly reversible graph"
    return values


@dataclass(frozen=True)
class Relation:
    """One monomial identity prod K_i^e = prod K_j^e from a kernel vector."""

    u: tuple[int, ...]
    lhs: tuple[tuple[int, int], ...]
    rhs: tuple[tuple[int, int], ...]
    lhs_poly: KPoly | None = None
    rhs_poly: KPoly | None = None


@dataclass(frozen=True)
class BalanceConditions:
    graph: ReactionGraph
    kernel_basis: tuple[tuple[int, ...], ...]
    relations: tuple[Relation, ...]
    expanded: bool


def balance_conditions(g: ReactionGraph, expand: bool = False) -> BalanceConditions:
    """The deficiency-many conditions on kappa for node balanceability.

    Each kernel vector u of the Cayley matrix splits into the relation
    prod_{u_i>0} K_i^{u_i} = prod_{u_i<0} K_i^{-u_i}; with expand=True
    both sides are also multiplied out to polynomials in kappa.
    """
    _require_weakly_reversible(g, "balance_conditions")
    basis = integer_kernel_basis(g)
    trees = tree_constants_symbolic(g) if expand else None
    relations = []
    for u in basis:
        lhs = tuple((i + 1, e) for i, e in enumerate(u) if e > 0)
        rhs = tuple((i + 1, -e) for i, e in enumerate(u) if e < 0)
        lhs_poly = rhs_poly = None
        if trees is not None:
            lhs_poly = KPoly.constant(g.network.p, 1)
            for node, e in lhs:
                lhs_poly = lhs_poly * trees.polys[node - 1] ** e
            rhs_poly = KPoly.constant(g.network.p, 1)
            for node, e in rhs:
                rhs_poly = rhs_poly * trees.polys[node - 1] ** e
            lhs_poly, rhs_poly = cancel_common_content(lhs_poly, rhs_poly)
        relations.append(Relation(u, lhs, rhs, lhs_poly, rhs_poly))
    return BalanceConditions(g, basis, tuple(relations), expand)


@dataclass(frozen=True)
class RelationValue:
    relation: Relation
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class BalanceCheck:
    graph: ReactionGraph
    kappa: tuple[Fraction, ...]
    values: tuple[RelationValue, ...]

    @property
    def balanced(self) -> bool:
        return all(v.holds for v in self.values)


def check_kappa_balanced(g: ReactionGraph, kappa: Sequence) -> BalanceCheck:
    """Exact test: does kappa admit a positive node balanced steady state?

    True iff every kernel relation holds with equality; the report keeps
    each relation's two sides as exact rationals.
    """
    _require_weakly_reversible(g, "check_kappa_balanced")
    kap = _exact_kappa(g, kappa)
    conditions = balance_conditions(g)
    constants = tree_constants_eval(g, kap)
    values = []
    for rel in conditions.relations:
        lhs = Fraction(1)
        for node, e in rel.lhs:
            lhs *= Fraction(constants[node - 1]) ** e
        rhs = Fraction(1)
        for node, e in rel.rhs:
            rhs *= Fraction(constants[node - 1]) ** e
        values.append(RelationValue(rel, lhs, rhs))
    return BalanceCheck(g, tuple(kap), tuple(values))


@dataclass(frozen=True)
class Binomial:
    """K_j x^(Y_i) - K_i x^(Y_j) for the edge (i,j); zero at node balanced states."""

    edge: tuple[int, int]
    reaction: int
    lhs_coeff: Fraction
    lhs_exps: tuple[int, ...]
    rhs_coeff: Fraction
    rhs_exps: tuple[int, ...]

    def residual(self, x: Sequence):
        lhs = self.lhs_coeff
        rhs = self.rhs_coeff
        for xv, e1, e2 in zip(x, self.lhs_exps, self.rhs_exps):
            if e1:
                lhs = lhs * xv**e1
            if e2:
                rhs = rhs * xv**e2
        return lhs - rhs


def steady_state_binomials(g: ReactionGraph, kappa: Sequence) -> tuple[Binomial, ...]:
    """One binomial equation per edge; their common positive zeros are the
    node balanced steady states."""
    _require_weakly_reversible(g, "steady_state_binomials")
    kap = _exact_kappa(g, kappa)
    constants = tree_constants_eval(g, kap)
    out = []
    for j, (a, b) in enumerate(g.edges):
        out.append(
            Binomial(
                edge=(a, b),
                reaction=j + 1,
                lhs_coeff=Fraction(constants[b - 1]),
                lhs_exps=g.label_vector(a),
                rhs_coeff=Fraction(constants[a - 1]),
                rhs_exps=g.label_vector(b),
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class SteadyStateResult:
    feasible: bool
    x: tuple[float, ...] | None
    log_x: tuple[float, ...] | None
    residual: float


def solve_positive_steady_state(
    g: ReactionGraph, kappa: Sequence, tol: float = 1e-9
) -> SteadyStateResult:
    """Least-squares solve of the log-linear binomial system.

    Taking logs of K_j x^(Y_i) = K_i x^(Y_j) gives, per edge (i,j),
    (Y_j - Y_i) . xi = log K_j - log K_i with xi = log x. Consistency of
    this system (residual below tol) is equivalent to the kappa being
    node balanced; the returned x is one positive solution.
    """
    import numpy as np

    _require_weakly_reversible(g, "solve_positive_steady_state")
    kap = _exact_kappa(g, kappa)
    constants = tree_constants_eval(g, kap)
    rows = []
    rhs = []
    for a, b in g.edges:
        ya = g.label_vector(a)
        yb = g.label_vector(b)
        rows.append([float(q - p) for p, q in zip(ya, yb)])
        rhs.append(math.log(constants[b - 1]) - math.log(constants[a - 1]))
    mat = np.array(rows)
    vec = np.array(rhs)
    xi, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    residual = float(np.max(np.abs(mat @ xi - vec))) if len(rhs) else 0.0
    if residual >= tol:
        return SteadyStateResult(False, None, None, residual)
    x = tuple(float(v) for v in np.exp(xi))
    return SteadyStateResult(True, x, tuple(float(v) for v in xi), residual)


def node_balance_residual(g: ReactionGraph, rates: Sequence) -> list:
    """C_G times a rate vector; the zero vector characterizes node balance."""
    if len(rates) != g.network.p:
        raise ValueError(f"rate vector has {len(rates)} entries, expected {g.network.p}")
    return ratmat.matvec(g.incidence_matrix, rates)


def state_is_balanced(
    g: ReactionGraph, x: Sequence, kappa: Sequence | None = None, tol: float = 1e-9
) -> bool:
    """Node balance of a concrete state; exact for rational inputs."""
    v = mass_action_rates(g.network, x, kappa)
    residual = node_balance_residual(g, v)
    if all(isinstance(r, (int, Fraction)) for r in residual):
        return all(r == 0 for r in residual)
    return max(abs(float(r)) for r in residual) < tol


def rate_matrix(net: ReactionNetwork, x: Sequence, kappa: Sequence | None = None) -> list[list]:
    """m x m matrix rho(x) with entry (i,j) = v_k(x) for the reaction y_j -> y_i."""
    v = mass_action_rates(net, x, kappa)
    rows = [[0 for _ in range(net.m)] for _ in range(net.m)]
    for k, r in enumerate(net.reactions):
        rows[r.target][r.source] = v[k]
    return rows


@dataclass(frozen=True)
class OmegaCheck:
    difference: tuple
    residual: tuple
    symmetric: bool
    matches_residual: bool


def omega_symmetry_check(g: ReactionGraph, x: Sequence, kappa: Sequence | None = None) -> OmegaCheck:
    """Symmetry form of node balance.

    Lifts rho(x) to node level (entry (i1,i2) = rho entry of the labels
    when the edge i2->i1 exists), then compares row sums against column
    sums. The difference equals C_G v(x) entry for entry.
    """
    rho = rate_matrix(g.network, x, kappa)
    m = g.m
    lifted = [[0 for _ in range(m)] for _ in range(m)]
    for a, b in g.edges:
        lifted[b - 1][a - 1] = rho[g.labels[b - 1]][g.labels[a - 1]]
    difference = tuple(
        sum(lifted[i][j] for j in range(m)) - sum(lifted[j][i] for j in range(m))
        for i in range(m)
    )
    v = mass_action_rates(g.network, x, kappa)
    residual = tuple(node_balance_residual(g, v))
    exact = all(isinstance(d, (int, Fraction)) for d in difference + residual)
    if exact:
        matches = difference == residual
        symmetric = all(d == 0 for d in difference)
    else:
        matches = all(abs(float(a - b)) < 1e-9 for a, b in zip(difference, residual))
        symmetric = all(abs(float(d)) < 1e-9 for d in difference)
    return OmegaCheck(difference, residual, symmetric, matches)


@dataclass(frozen=True)
class IncrementalCondition:
    """Extra balance identity created by joining two equally labeled nodes."""

    kind: StepKind
    node_pair: tuple[int, int]
    lhs: KPoly | None
    rhs: KPoly | None

    @property
    def extra_condition(self) -> bool:
        return self.kind is StepKind.SAME_COMPONENT

    def holds(self, kappa: Sequence) -> bool:
        if self.lhs is None:
            return True
        kap = [Fraction(k) for k in kappa]
        return self.lhs.evaluate(kap) == self.rhs.evaluate(kap)


def incremental_condition(g: ReactionGraph, i1: int, i2: int) -> IncrementalCondition:
    """The extra identity tying balance of g to balance of join_nodes(g, i1, i2).

    Nodes in different components need no extra condition; in the same
    component the identity is K_{i1} = K_{i2} with common monomial
    content cancelled.
    """
    _require_weakly_reversible(g, "incremental_condition")
    for i in (i1, i2):
        if not 1 <= i <= g.m:
            raise ValueError(f"node {i} out of range 1..{g.m}")
    if i1 == i2:
        raise ValueError(f"cannot join node {i1} with itself")
    if g.labels[i1 - 1] != g.labels[i2 - 1]:
        raise ValueError(f"nodes {i1} and {i2} have different labels")
    if g.component_of[i1 - 1] != g.component_of[i2 - 1]:
        return IncrementalCondition(StepKind.DIFFERENT_COMPONENTS, (i1, i2), None, None)
    trees = tree_constants_symbolic(g)
    lhs, rhs = cancel_common_content(trees.polys[i1 - 1], trees.polys[i2 - 1])
    return IncrementalCondition(StepKind.SAME_COMPONENT, (i1, i2), lhs, rhs)


def positive_kernel_flux(g: ReactionGraph, weights: Sequence | None = None) -> list[Fraction]:
    """A strictly positive rational vector in ker C_G (weakly reversible graphs).

    Built as a positive combination of directed cycles, one through each
    edge; optional per-edge weights vary the combination. Useful for
    sampling node balanced rate constants: kappa_j = flux_j / x^(Y_source)
    makes x node balanced.
    """
    _require_weakly_reversible(g, "positive_kernel_flux")
    p = g.network.p
    succ: dict[int, list[tuple[int, int]]] = {v: [] for v in range(1, g.m + 1)}
    for j, (a, b) in enumerate(g.edges):
        succ[a].append((b, j))
    flux = [Fraction(0)] * p
    if weights is None:
        weights = [Fraction(1)] * p
    for j, (a, b) in enumerate(g.edges):
        # shortest directed path b -> a closes a cycle through edge j
        prev: dict[int, tuple[int, int]] = {}
        queue = [b]
        seen = {b}
        while queue:
            node = queue.pop(0)
            if node == a:
                break
            for nxt, edge in succ[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    prev[nxt] = (node, edge)
                    queue.append(nxt)
        cycle = [j]
        cur = a
        while cur != b:
            node, edge = prev[cur]
            cycle.append(edge)
            cur = node
        w = Fraction(weights[j])
        if w <= 0:
            raise ValueError(f"weights must be positive, got {weights[j]}")
        for edge in cycle:
            flux[edge] += w
    assert all(f > 0 for f in flux)
    assert all(r == 0 for r in node_balance_residual(g, flux))
    return flux
