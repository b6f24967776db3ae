"""Reaction graphs and node balanced steady states of mass-action networks.

One chemical reaction network admits many reaction graphs, from the
fully split graph (one component per reaction) down to the complex
graph (one node per complex). Each graph comes with its own notion of
balanced steady state, its own deficiency, and its own polynomial
conditions on the rate constants; this package computes all of them
exactly and ties them together with simulation and two independent
cross-checks (subnetwork decomposition and the species-replication
lift).
"""

from .balance import (
    BalanceCheck,
    BalanceConditions,
    Binomial,
    CayleyMatrix,
    IncrementalCondition,
    NotWeaklyReversibleError,
    OmegaCheck,
    Relation,
    SteadyStateResult,
    TreeConstants,
    balance_conditions,
    cayley_matrix,
    check_kappa_balanced,
    incremental_condition,
    integer_kernel_basis,
    laplacian_matrix,
    node_balance_residual,
    omega_symmetry_check,
    positive_kernel_flux,
    rate_matrix,
    solve_positive_steady_state,
    state_is_balanced,
    steady_state_binomials,
    tree_constants_eval,
    tree_constants_symbolic,
)
from .dynamics import (
    ConvergenceError,
    NotBalancedError,
    SimulationError,
    SimulationTrace,
    StabilityReport,
    StabilityVerdict,
    birch_point,
    class_deviation,
    conservation_laws,
    jacobian,
    simulate,
    stability_report,
)
from .graphs import (
    GraphMorphism,
    ReactionGraph,
    StepKind,
    canonical_complex_graph,
    canonical_split_graph,
    deficiency,
    detailed_graph,
    equivalent,
    graph_from_partition,
    inclusion_morphism,
    is_weakly_reversible,
    join_nodes,
)
from .kpoly import KPoly, cancel_common_content
from .lifting import LiftedNetwork, LiftError, LiftVerification, lift_network, verify_lift
from .network import (
    Complex,
    ParseError,
    Reaction,
    ReactionNetwork,
    format_network,
    format_rate,
    mass_action_rates,
    numeric_kappa,
    ode_rhs,
    parse_network,
    stoichiometric_rank,
)
from .partitions import (
    AdmissiblePartition,
    PartitionError,
    TooManyPartitionsError,
    bell_number,
    count_admissible_partitions,
    enumerate_admissible_partitions,
    lattice_join,
    lattice_meet,
    partition_from_json,
    partition_to_json,
    refines,
    split_labels,
    split_source_index,
    split_target_index,
)
from .subnetworks import (
    DecompositionCheck,
    InducedGraphs,
    InducedPart,
    SplitError,
    Subnetwork,
    SubnetworkSplit,
    decomposition_check,
    induced_graphs,
    subnetwork,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePartition",
    "BalanceCheck",
    "BalanceConditions",
    "Binomial",
    "CayleyMatrix",
    "Complex",
    "ConvergenceError",
    "DecompositionCheck",
    "GraphMorphism",
    "IncrementalCondition",
    "InducedGraphs",
    "InducedPart",
    "KPoly",
    "LiftError",
    "LiftVerification",
    "LiftedNetwork",
    "NotBalancedError",
    "NotWeaklyReversibleError",
    "OmegaCheck",
    "ParseError",
    "PartitionError",
    "Reaction",
    "ReactionGraph",
    "ReactionNetwork",
    "Relation",
    "SimulationError",
    "SimulationTrace",
    "SplitError",
    "StabilityReport",
    "StabilityVerdict",
    "SteadyStateResult",
    "StepKind",
    "Subnetwork",
    "SubnetworkSplit",
    "TooManyPartitionsError",
    "TreeConstants",
    "balance_conditions",
    "bell_number",
    "birch_point",
    "cancel_common_content",
    "canonical_complex_graph",
    "canonical_split_graph",
    "cayley_matrix",
    "check_kappa_balanced",
    "class_deviation",
    "conservation_laws",
    "count_admissible_partitions",
    "decomposition_check",
    "deficiency",
    "detailed_graph",
    "enumerate_admissible_partitions",
    "equivalent",
    "format_network",
    "format_rate",
    "graph_from_partition",
    "inclusion_morphism",
    "incremental_condition",
    "induced_graphs",
    "integer_kernel_basis",
    "is_weakly_reversible",
    "jacobian",
    "join_nodes",
    "laplacian_matrix",
    "lattice_join",
    "lattice_meet",
    "lift_network",
    "mass_action_rates",
    "node_balance_residual",
    "numeric_kappa",
    "ode_rhs",
    "omega_symmetry_check",
    "parse_network",
    "partition_from_json",
    "partition_to_json",
    "positive_kernel_flux",
    "rate_matrix",
    "refines",
    "simulate",
    "solve_positive_steady_state",
    "split_labels",
    "split_source_index",
    "split_target_index",
    "stability_report",
    "state_is_balanced",
    "steady_state_binomials",
    "stoichiometric_rank",
    "subnetwork",
    "tree_constants_eval",
    "tree_constants_symbolic",
    "verify_lift",
]
