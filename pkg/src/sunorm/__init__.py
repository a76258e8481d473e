"""sunorm: heights of algebraic numbers modulo torsion on S-unit lattices.

Vectors of log absolute values over a Galois number field's places support
L^p Weil heights, Galois-orbit degrees, quotient norms modulo subfield S-unit
subspaces, field and S-unit projections, and the extremal Mahler norm m~1
evaluated by an exact weighted-L1 minimization over the subfield lattice.
"""

from .certreal import CReal, working_precision, DEFAULT_PRECISION
from .errors import (
    AmbiguousComparison,
    FixtureParseError,
    InfeasibleProblem,
    InvariantViolation,
    LPError,
    PrecisionError,
    SunormError,
    SupportError,
    UnboundedProblem,
    UsageError,
)
from .field_model import (
    FieldFixture,
    GaloisAction,
    LogVector,
    Place,
    SubfieldDescriptor,
    act,
    enumerate_subgroups,
    load_fixture,
    shipped_fixture_path,
    subfield_lattice,
)
from .heights import HeightValue, delta, h_p, mahler_upper
from .quotient import (
    AMatrix,
    QuotientSolution,
    a_matrix,
    eta_min_height,
    minimizer_x,
    quotient_norm,
    quotient_norm_via_simplex,
    quotient_norm_via_subgradient,
    quotient_units_special,
    residual_l1,
)
from .projections import (
    AlphaVSystem,
    alpha_v,
    build_alpha_v_system,
    proj_field,
    proj_sunits,
)
from .extremal import (
    DecompositionPart,
    DecompositionResult,
    build_S,
    closed_form_check,
    extremal_m1,
    extremal_p_bounds,
)
from .lp_core import L1Problem, SimplexSolution, solve_simplex, solve_subgradient

__version__ = "0.1.0"
