"""normwalk: exact-arithmetic analysis of normal lattice polytopes."""

from .cones import (
    HilbertBasis,
    RationalCone,
    cone,
    cone_over,
    hilbert_basis,
    is_cone_extension,
    is_homogeneous,
    monoid_member,
)
from .continuous import (
    PyramidalChain,
    RationalPolytope,
    chain_defect,
    hausdorff_distance,
    is_pyramid,
    is_pyramidal_extension,
    rational_hull,
    search_pyramidal_chain,
    verify_chain,
)
from .generators import (
    BitSource,
    ClusterSpec,
    GeneratedPolytope,
    HexagonParams,
    generate_cluster,
    hexagon_from_params,
    survey,
    theta,
)
from .lattice import (
    AffineSublattice,
    LatticePolytope,
    convex_hull,
    dilate,
    facet_width,
    lambda_subgroup,
    lattice_points,
    normalized_volume,
)
from .intlinalg import hnf_snf
from .normality import (
    CRCertificate,
    NormalityReport,
    caratheodory_bounds,
    icp_check_bounded,
    is_integrally_closed,
    is_normal,
    is_smooth,
    is_unimodular_simplex,
    normality_report,
    ucp_falsify,
)
from .poset import (
    Atlas,
    Jump,
    WalkTrace,
    build_atlas,
    embed_map,
    enumerate_jumps_down,
    enumerate_jumps_up,
    is_maximal,
    is_minimal,
    points_at_distance,
    register_embed_map,
    walk,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
