from . import registry
from .apartments import (
    Apartment,
    EmbeddingMap,
    apartment,
    check_clique_images,
    classify_pj_l0_image,
    embedding_from_set,
    generated_set,
    is_embedding,
    lframe_intersection,
    parabolic_apartment,
    perturb,
)
from .certificates import (
    Certificate,
    LocalCertificate,
    descend_special_map,
    extract_certificate,
    local_apartment_certificate,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InconsistentInput,
    PolarisError,
    PreconditionError,
    Rejection,
    SpecialMapViolation,
    UnsupportedConfiguration,
)
from .grassmann import GrassmannGraph, adjacent, classify_maximal_clique, independent, locally_independent
from .johnson import build_named_graph, halfcube_split_and_g, isomorphic, polar_johnson_graph
from .polar import Frame, PolarSpace, SingularSubspace, build_polar_space
from .search import Pattern, SearchReport, open_problem_search, search_embeddings
from .theorems import Verdict, verify_theorem

__all__ = [
    "registry",
    "Apartment",
    "EmbeddingMap",
    "apartment",
    "check_clique_images",
    "classify_pj_l0_image",
    "embedding_from_set",
    "generated_set",
    "is_embedding",
    "lframe_intersection",
    "parabolic_apartment",
    "perturb",
    "Certificate",
    "LocalCertificate",
    "descend_special_map",
    "extract_certificate",
    "local_apartment_certificate",
    "BudgetExceeded",
    "DimensionMismatch",
    "InconsistentInput",
    "PolarisError",
    "PreconditionError",
    "Rejection",
    "SpecialMapViolation",
    "UnsupportedConfiguration",
    "GrassmannGraph",
    "adjacent",
    "classify_maximal_clique",
    "independent",
    "locally_independent",
    "build_named_graph",
    "halfcube_split_and_g",
    "isomorphic",
    "polar_johnson_graph",
    "Frame",
    "PolarSpace",
    "SingularSubspace",
    "build_polar_space",
    "Pattern",
    "SearchReport",
    "open_problem_search",
    "search_embeddings",
    "Verdict",
    "verify_theorem",
]
