"""Canonical-duality toolkit for structured quartic minimization.

Programs made of weighted squared quadratics plus a quadratic tail are
solved through their concave dual: a stationary dual point with positive
definite G certifies a global primal minimum, and the minimizer is
recovered with a pseudoinverse.  On top of the core sit distance-geometry
instance compilation, fibril chain replication with RMSD/contact reports,
and Lennard-Jones cluster energies with two-stage local refinement.
"""

from .chains import (
    AffineTransform,
    Chain,
    Contact,
    FibrilModel,
    apply_transform,
    contact_report,
    fit_translation,
    replicate_fibril,
    rmsd,
)
from .dual import (
    DualGeometry,
    Region,
    build_geometry,
    duality_gap,
    eval_dual,
    gao_strang,
    grad_dual,
    hess_dual,
    pseudo_inverse,
    recover_primal,
)
from .energy import (
    Configuration,
    LjParams,
    PairCoefficients,
    RefineResult,
    hb_potential,
    lj_cluster_energy,
    lj_cluster_grad,
    lj_pair,
    refine,
    vdw_AB,
)
from .errors import (
    CanodualError,
    CoincidentAtomsError,
    DimensionMismatchError,
    DualInfeasibleError,
    InstanceError,
    NoFeasibleStartError,
    ParseError,
    SingularGeometryError,
)
from .mdgp import (
    AnchorRef,
    DistanceConstraint,
    MdgpInstance,
    MdgpSolution,
    SensorRef,
    ViolationRecord,
    build_program,
    eval_direct,
    solve_mdgp,
    violation_report,
)
from .quartic import (
    QuadraticMap,
    QuarticProgram,
    QuarticTerm,
    canonical_measure,
    eval_primal,
    grad_primal,
    hess_primal,
    make_program,
    validate,
)
from .solver import (
    CriticalPoint,
    PointKind,
    SolveReport,
    SolverConfig,
    classify_point,
    find_critical_points,
    maximize_dual_positive,
    solve,
)

__version__ = "0.1.0"
