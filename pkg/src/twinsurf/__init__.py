"""Twin correspondences between minimal, maximal and special Lagrangian
graphs, computed and verified on discrete grids."""

from .catalog import (
    MINIMAL_SURFACES,
    SURFACES,
    default_domain,
    known_lift,
    make_surface,
)
from .conformal import (
    ConformalChart,
    NullCurveField,
    build_chart,
    default_target_grid,
    null_curve,
    resample_to_chart,
    verify_weierstrass_twin,
)
from .errors import TwinsurfError
from .fields import (
    GridDomain,
    HeightMap,
    JacobianData,
    MetricData,
    ScalarField,
    closedness_residual_field,
    first_fundamental_form,
    integrate_exact_form,
    jacobian_data,
)
from .gauss import (
    ProjectivePointField,
    gauss_map,
    gauss_map_alt,
    hyperplane_fit,
    jorgens_gauss,
    planarity_score,
    quadric_residual,
)
from .gfield import read_gfield, read_heightmap, write_gfield, write_heightmap
from .slag import SLLift, SLParams, detect_angle, graph_rotate, sl_lift, sl_residual, split_sl_residual
from .solver import SolveOptions, SolveResult, solve_maximal, solve_minimal
from .systems import (
    ResidualReport,
    closedness_identities,
    divergence_residual,
    maximal_residual,
    minimal_residual,
)
from .twin import TwinDiagnostics, TwinPair, twin_backward, twin_forward, verify_twin

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
