"""Mining fuzzy beta-certain and beta-possible rules from incomplete quantitative data."""

from .approximation import (
    Approximation,
    ImputationRecord,
    PipelineResult,
    estimate_value_lower,
    estimate_value_upper,
    lower_approximation,
    plausibility_of_class,
    resolve_uncertain,
    run_imputation_pipeline,
    upper_approximation,
)
from .dataset import (
    ClassPartition,
    FuzzyObject,
    RawObject,
    fuzzify_dataset,
    load_dataset,
    load_prefuzzified_table,
    load_table,
    partition_by_class,
)
from .membership import (
    FuzzyValue,
    MembershipFunction,
    MembershipFunctionSet,
    evaluate_membership,
    fuzzify,
    load_mf_config,
    validate_mf_set,
)
from .partitions import (
    IncompleteEquivalenceClass,
    RegionCombination,
    Tag,
    TaggedMember,
    build_classes,
    combine,
    elementary_sets,
    enumerate_subsets,
)
from .rules import (
    FuzzyRule,
    RuleKind,
    beta_lower,
    beta_upper,
    classify,
    derive_rules,
    is_more_specific,
    mine_rules,
    misclassification,
    prune,
)

__version__ = "0.1.0"
