"""Inducibility of rooted binary trees and crossing numbers of random tanglegrams."""
from .counting import (
    caterpillar_count_complete,
    caterpillar_liminf,
    cb2_bound,
    count_induced,
    count_induced_bruteforce,
    even_inducibility,
    gamma,
    verify_lemma_functions,
)
from .errors import InvalidRankError, LimitExceeded, TreeParseError
from .extremal import SearchConfig, max_gamma, max_gamma_exact, max_gamma_search
from .tanglegram import (
    Tanglegram,
    classify_size4,
    enumerate_tanglegrams,
    no6_lower_bound,
    parse_tanglegram,
    tangle_crossing_exact,
)
from .trees import (
    PlaneTree,
    TreeShape,
    a52,
    caterpillar,
    complete,
    enumerate_shapes,
    even,
    induce,
    parse_plane,
    parse_shape,
)

__version__ = "0.1.0"
