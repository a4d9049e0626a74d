"""Association schemes, weakly distance-regular digraphs and the diameter-2 classification."""
from .classify import (
    ClassificationReport,
    CrosscheckReport,
    crosscheck,
    oracle_enumerate,
    p_polynomial_orderings,
    theorem1_classify,
)
from .closure import (
    ClosedSubset,
    closure,
    complex_product,
    quotient_scheme,
    subscheme,
    wedge_conditions,
    wreath_decomposition,
    wreath_product,
)
from .digraph import (
    Digraph,
    arc_union,
    lex_decompose,
    lexicographic_product,
    profile,
    quotient_digraph,
    transpose,
    two_way_partition,
)
from .generators import CirculantSpec, catalog, circulant_scheme, enumerate_circulant
from .scheme import Scheme, build_scheme, relation_profile, verify_identities
from .wdrd import attached_scheme, distance_regular_test, is_wdrd_with_scheme, lemma24_verify

__all__ = [
    "ClassificationReport", "ClosedSubset", "CirculantSpec", "CrosscheckReport", "Digraph", "Scheme",
    "arc_union", "attached_scheme", "build_scheme", "catalog", "circulant_scheme", "closure",
    "complex_product", "crosscheck", "distance_regular_test", "enumerate_circulant",
    "is_wdrd_with_scheme", "lemma24_verify", "lex_decompose", "lexicographic_product",
    "oracle_enumerate", "p_polynomial_orderings", "profile", "quotient_digraph", "quotient_scheme",
    "relation_profile", "subscheme", "theorem1_classify", "transpose", "two_way_partition",
    "verify_identities", "wedge_conditions", "wreath_decomposition", "wreath_product",
]
