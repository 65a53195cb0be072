"""Record linkage for bibliographic author names.

Pairs of publication records are compared attribute by attribute with
six string-similarity measures; the resulting 30-dimensional feature
vector is classified by an averaged ensemble of softsign multi-layer
perceptrons trained with resilient backpropagation.
"""

from authorlink.ensemble import (
    EnsembleModel,
    load_ensemble,
    predict_ensemble,
    save_ensemble,
    train_multicolumn,
)
from authorlink.evaluation import (
    EvalReport,
    GridSpec,
    SplitSpec,
    evaluate,
    grid_search,
    kfold_splits,
    stratified_holdout,
)
from authorlink.features import (
    CURRENT_SCHEMA,
    FeatureSchema,
    featurize_dataset,
    featurize_pair,
)
from authorlink.metrics import (
    AlignmentParams,
    jaccard_sim,
    jaro,
    jaro_winkler,
    levenshtein_sim,
    monge_elkan,
    smith_waterman_sim,
)
from authorlink.network import (
    MlpModel,
    NetworkConfig,
    Prediction,
    forward,
    init_network,
    load_model,
    predict,
    save_model,
    train,
)
from authorlink.records import (
    LabeledPair,
    PairDataset,
    PublicationRecord,
    load_labeled_pairs,
    load_records,
    normalize_dataset,
    normalize_text,
    pair_key,
    save_pairs,
    save_records,
)
from authorlink.synthetic import SyntheticSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AlignmentParams",
    "CURRENT_SCHEMA",
    "EnsembleModel",
    "EvalReport",
    "FeatureSchema",
    "GridSpec",
    "LabeledPair",
    "MlpModel",
    "NetworkConfig",
    "PairDataset",
    "Prediction",
    "PublicationRecord",
    "SplitSpec",
    "SyntheticSpec",
    "evaluate",
    "featurize_dataset",
    "featurize_pair",
    "forward",
    "generate_synthetic",
    "grid_search",
    "init_network",
    "jaccard_sim",
    "jaro",
    "jaro_winkler",
    "kfold_splits",
    "levenshtein_sim",
    "load_ensemble",
    "load_labeled_pairs",
    "load_model",
    "load_records",
    "monge_elkan",
    "normalize_dataset",
    "normalize_text",
    "pair_key",
    "predict",
    "predict_ensemble",
    "save_ensemble",
    "save_model",
    "save_pairs",
    "save_records",
    "smith_waterman_sim",
    "stratified_holdout",
    "train",
    "train_multicolumn",
]
