"""Reduced dynamical maps of open quantum systems, complete positivity and quantum discord."""
from .channels import (
    AffineBlochMap,
    DynamicalMap,
    KrausSet,
    MapEigensystem,
    analytic_example,
    apply_map,
    choi_eig,
    example_map,
    example_unitary,
    is_compatible,
    is_cp,
    kraus_to_map,
    map_from_classical,
    map_from_joint,
)
from .classify import Label, StateClass, TrialRecord, classify_state, ncp_search, theorem_harness
from .discord import DiscordResult, OptimizerConfig, conditional_entropy, discord, mutual_information, zero_discord_test
from .states import (
    BipartiteState,
    ProjectorBasis,
    bell_state,
    classically_correlated,
    example_state,
    from_bloch,
    marginal,
    ppt_min_eigenvalue,
)

__version__ = "0.1.0"
