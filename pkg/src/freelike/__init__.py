"""freelike: small-cancellation word problem, Cayley-ball girth/Cheeger
certificates, and bond-percolation threshold experiments at desk scale."""

from freelike._kernels import BACKEND as kernel_backend
from freelike.words import (
    Word,
    parse_word,
    format_word,
    enumerate_words,
    substitute,
    cyclic_reduce,
    cyclic_shifts,
    canonical_form,
    primitive_root,
    commute_in_free,
    exp_sum,
)
from freelike.smallcancel import (
    Presentation,
    symmetrize,
    ladder_relators,
    check_c_prime,
    check_girth_conditions,
    greendlinger_find,
    dehn_trivial,
    eq_in_group,
    independent_relators,
    scan_short_words,
    parse_presentation,
    format_presentation,
)
from freelike.oracle import GroupOracle
from freelike.cert import (
    GeneratingSet,
    high_girth_generators,
    girth_scan,
    free_subgroup_scan,
    build_almost_identity,
    almost_identity_for_girth_bound,
    girth_witness_mod_n,
)
from freelike.cayley import (
    CayleyBall,
    build_ball,
    inner_boundary,
    cheeger_upper_bound,
    sub_ball_family,
    random_connected_family,
    export_graph,
)
from freelike.percolation import (
    PercGraph,
    from_ball,
    parse_adjacency,
    sample_open_edges,
    clusters,
    crossing_probability,
    exact_crossing_small,
    threshold_estimate,
    pc_reference,
    compare_quotient_vs_tree,
)
from freelike.finitegrp import (
    FiniteGroup,
    builtin,
    verify_almost_identity,
    is_identity,
    finite_girth,
)

__version__ = "0.1.0"
