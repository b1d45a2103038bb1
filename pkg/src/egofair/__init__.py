"""Fairness auditing across network positions for message-level abuse
detection: ego-network features, SMOTE-balanced dagging, group-conditional
metrics, and equalized-odds post-processing.
"""

from .fairness import (
    GROUP_HIGH,
    GROUP_LOW,
    DerivedRates,
    GroupAssignment,
    GroupRates,
    MixingParameters,
    RateEntry,
    apply_mixing,
    assign_groups,
    derived_rates,
    expected_loss,
    fit_equalized_odds,
    group_rates,
)
from .features import (
    LabeledInstance,
    MODEL_FEATURE_NAMES,
    SocialFeatures,
    TextFeatures,
    assemble_instance,
    default_lexicon,
    default_smiley_patterns,
    extract_social_features,
    extract_text_features,
)
from .graph import (
    DirectedGraph,
    EgoNetwork,
    RelationshipGraph,
    build_graph,
    degree_centrality,
    edge_betweenness,
    ego_network,
    k_core_score,
    load_edge_list,
    relationship_graph,
    tie_strength,
)
from .model import (
    DaggingEnsemble,
    LogisticLearner,
    load_model,
    predict_scores,
    save_model,
    threshold_labels,
    train_dagging,
)
from .runner import (
    AuditReport,
    ExperimentAborted,
    ExperimentConfig,
    MessageRecord,
    SyntheticConfig,
    emit_report,
    generate_synthetic,
    load_messages,
    load_report,
    render_human_report,
    run_experiment,
    write_messages,
)
from .sampling import Dataset, SplitConfig, shuffle_split, smote_balance
from .stats import (
    AggregateResult,
    SignificanceResult,
    TrialMetrics,
    aggregate_trials,
    auc_roc,
    paired_t_test,
    welch_t_test,
)

__version__ = "0.1.0"
