"""Desk-scale simulation library for preference identification.

Finite ordered spaces, preferences as total preorders, binary-menu choice
experiments, rationalization machinery (consistency, extensions,
adversarial constructions, parametric fits, diameter of the
rationalization set), chain-anchored utilities, and a seeded experiment
harness with a counterexample gallery.
"""

from ._version import __version__
from .errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    PreconditionError,
    PrefidError,
    ResolutionError,
)
from .experiments import (
    STRONG,
    WEAK,
    ChoiceSequence,
    ExperimentSequence,
    choices_from_csv,
    choices_to_csv,
    enumerate_pairs,
    generate_choices,
    restrict,
)
from .harness import (
    ConvergenceReport,
    ExperimentConfig,
    GALLERY_ITEMS,
    ReportRow,
    default_checkpoints,
    emit_report,
    generator_values,
    parse_report_csv,
    report_fingerprint,
    report_to_csv,
    report_to_json,
    run_convergence,
    run_gallery,
)
from .preferences import (
    BinaryRelation,
    Preference,
    closed_convergence_distance,
    from_utility,
    graph_to_csv,
    is_locally_strict,
    is_quasitransitive,
    is_strictly_monotone,
    is_weakly_monotone,
    li_ls_limit,
    preference_from_json,
    preference_to_json,
    relation_pairs,
    same_space,
    total_indifference,
)
from .rationalize import (
    ConsistencyResult,
    DiameterResult,
    EuResult,
    LipschitzResult,
    RationalizationPolicy,
    RevealedEdge,
    RevealedRelation,
    adversarial_far_extension,
    all_total_preorders,
    brute_force_rationalizations,
    check_consistency,
    diameter_estimate,
    eu_preference,
    eu_rationalize,
    extend_preference,
    indifference_construction,
    lipschitz_rationalize,
    rationalizes,
    result_to_json,
    revealed_relation,
    sample_extension,
)
from .spaces import (
    DenseSubset,
    OrderedSpace,
    check_countable_order_property,
    dense_subset,
    fosd_compare,
    from_points,
    make_aa_acts,
    make_dated_rewards,
    make_grid_euclidean,
    make_lottery_simplex,
    space_from_descriptor,
    space_to_descriptor,
    squeeze_envelopes,
)
from .utility import (
    UtilityFunction,
    certainty_equivalent_utility,
    chain_base,
    chain_step_bound,
    max_norm_distance,
    ordinal_equivalent,
    select_convergent_utilities,
    utility_from_csv,
    utility_to_csv,
    utility_to_json,
)

__all__ = [
    "__version__",
    "PrefidError",
    "ConfigurationError",
    "DomainError",
    "CapacityError",
    "ResolutionError",
    "PreconditionError",
    "OrderedSpace",
    "DenseSubset",
    "make_grid_euclidean",
    "make_lottery_simplex",
    "make_dated_rewards",
    "make_aa_acts",
    "from_points",
    "dense_subset",
    "fosd_compare",
    "squeeze_envelopes",
    "check_countable_order_property",
    "space_to_descriptor",
    "space_from_descriptor",
    "Preference",
    "BinaryRelation",
    "same_space",
    "from_utility",
    "total_indifference",
    "is_weakly_monotone",
    "is_strictly_monotone",
    "is_locally_strict",
    "is_quasitransitive",
    "closed_convergence_distance",
    "li_ls_limit",
    "preference_to_json",
    "preference_from_json",
    "relation_pairs",
    "graph_to_csv",
    "STRONG",
    "WEAK",
    "ExperimentSequence",
    "ChoiceSequence",
    "enumerate_pairs",
    "generate_choices",
    "restrict",
    "choices_to_csv",
    "choices_from_csv",
    "RevealedEdge",
    "RevealedRelation",
    "RationalizationPolicy",
    "ConsistencyResult",
    "revealed_relation",
    "check_consistency",
    "extend_preference",
    "adversarial_far_extension",
    "sample_extension",
    "indifference_construction",
    "eu_rationalize",
    "eu_preference",
    "lipschitz_rationalize",
    "diameter_estimate",
    "DiameterResult",
    "EuResult",
    "LipschitzResult",
    "rationalizes",
    "all_total_preorders",
    "brute_force_rationalizations",
    "result_to_json",
    "UtilityFunction",
    "chain_base",
    "certainty_equivalent_utility",
    "chain_step_bound",
    "ordinal_equivalent",
    "max_norm_distance",
    "select_convergent_utilities",
    "utility_to_csv",
    "utility_from_csv",
    "utility_to_json",
    "ExperimentConfig",
    "ReportRow",
    "ConvergenceReport",
    "generator_values",
    "run_convergence",
    "run_gallery",
    "GALLERY_ITEMS",
    "emit_report",
    "parse_report_csv",
    "report_fingerprint",
    "report_to_csv",
    "report_to_json",
    "default_checkpoints",
]
