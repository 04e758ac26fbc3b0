"""parcut: optimal equal-spaced parallel cuts of convex polygons.

Given a convex m-gon P and a piece count n, finds the critical radius
rho with width(P^rho) = 2 n rho, the cut direction (always an edge
normal), and the n-1 equally spaced cuts that minimize the largest piece
inradius.  The fast path preprocesses the 3-D dome of P with a
Dobkin-Kirkpatrick style facet-peeling hierarchy so each linear program
runs in polylogarithmic time; a brute-force oracle cross-checks it.
"""

from .errors import (
    DegenerateVertexError,
    EmptyInteriorError,
    GeometryError,
    InvalidPieceCountError,
    NonIndependentRemovalError,
    NotPlanarError,
    NotQualifiedError,
    OutOfRangeError,
    UnboundedError,
    VerificationFailedError,
)
from .tolerance import DEFAULT_TOL, Tol
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpResult, small_lp
from .geometry import (
    HPolygon,
    VPolygon,
    WidthResult,
    canonicalize,
    diameter,
    directional_width,
    inner_body,
    inradius_incenter,
    min_width,
    regular_polygon,
)
from .dome import (
    BoundedCore,
    Dome,
    FaceLattice,
    bounded_core,
    build_dome,
    face_lattice,
    perturb,
)
from .hierarchy import Hierarchy, build_hierarchy, peel_level, pick_color, six_color
from .queries import (
    Query,
    QueryStats,
    facet_max_t,
    lp_max,
    lp_max_constrained,
    lp_max_facet,
    lp_max_section,
    run_query,
)
from .solver import (
    Cut,
    FacetDiagnostics,
    Solution,
    VerificationReport,
    eval_fi,
    place_cuts,
    root_lp,
    solve,
    verify_solution,
)
from .oracle import OracleConfig, oracle_Mi, oracle_fi, oracle_solve, random_polygon

__version__ = "0.1.0"
