"""c-vectors, d-vectors and root-system templates of finite type cluster algebras."""

__version__ = "0.1.0"

from .analysis import AnalysisConfig, VerifyConfig, analyze_matrix, verify_type
from .diagrams import (
    DynkinDiagram,
    WeightedDiagram,
    compute_V,
    diagram_of_matrix,
    enumerate_embeddings,
    extract_templates,
    templates_for,
)
from .dynkin_types import ClusterTypeLabel, parse_label, reference_matrix, standard_cartan
from .enumeration import (
    bounded_depth_probe,
    detect_cluster_type,
    enumerate_matrix_class,
    enumerate_seeds,
    extract_vector_sets,
)
from .folding import OrbitAutomorphism, fold_matrix, fold_seed, orbit_mutate, unfold_type
from .matrices import CartanMatrix, ExchangeMatrix, SeedState, initial_seed, mutate_b, mutate_seed
from .roots import RootStatus, classify_root, euler_form

__all__ = [
    "AnalysisConfig", "VerifyConfig", "analyze_matrix", "verify_type",
    "DynkinDiagram", "WeightedDiagram", "compute_V", "diagram_of_matrix", "enumerate_embeddings",
    "extract_templates", "templates_for",
    "ClusterTypeLabel", "parse_label", "reference_matrix", "standard_cartan",
    "bounded_depth_probe", "detect_cluster_type", "enumerate_matrix_class", "enumerate_seeds",
    "extract_vector_sets",
    "OrbitAutomorphism", "fold_matrix", "fold_seed", "orbit_mutate", "unfold_type",
    "CartanMatrix", "ExchangeMatrix", "SeedState", "initial_seed", "mutate_b", "mutate_seed",
    "RootStatus", "classify_root", "euler_form",
]
