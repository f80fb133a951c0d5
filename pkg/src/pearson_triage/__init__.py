"""Pearson Type I fitting, symptom coupling metrics and cluster-based patient triage."""

from .cluster import ClassificationResult, ClusterModel, Path, build_clusters, classify, fit_cluster_model, likelihood
from .coupling import (
    Category,
    CboTable,
    CouplingGroup,
    SymptomCoupling,
    Thresholds,
    categorize,
    cbo,
    cbo_histogram,
    prefix_coupling,
    profile_groups,
    single_symptom_coupling,
)
from .model import (
    Dataset,
    DatasetError,
    PatientRecord,
    SymptomProfile,
    dissimilarity,
    dissimilarity_matrix,
    encode_profile,
    load_fixture,
    parse_dataset,
    presence_vector,
)
from .pearson import (
    LOG_FLOOR,
    FamilyType,
    Moments,
    PearsonError,
    PearsonOdeCoeffs,
    PearsonType1Model,
    ShapeStats,
    central_moments,
    fit_type1,
    log_pdf,
    normalization,
    ode_coefficients,
    pdf,
    select_type,
    shape_stats,
)

__version__ = "0.1.0"
