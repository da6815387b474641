"""Split complex second-order equations into real component systems.

The package turns a scalar second-order equation, viewed over a
commutative ring with one or two extra imaginary units, into systems of
real equations; audits the Cauchy-Riemann-type exactness conditions
that characterize such systems; inverts the construction; and studies
how point symmetries survive the split, symbolically and numerically.
"""

from .cr import (
    CRReport,
    check_cr,
    check_derivative_dependence,
    full_report,
    reconstruct_base,
)
from .discrepancy_data import DISCREPANCIES
from .errors import (
    DegreeOverflowError,
    FormatError,
    InternalCheckError,
    JetOrderError,
    KindError,
    OdesplitError,
    ParseError,
    PoleError,
    VerdictError,
    ZeroDenominatorError,
)
from .fileio import (
    parse_generators,
    parse_system,
    print_generators,
    print_system,
    read_generators,
    read_system,
    scalar_to_system,
    system_to_scalar,
    write_generators,
    write_system,
)
from .numeric import (
    NumericTrajectory,
    correspondence_report,
    integrate_base_complex,
    integrate_system,
    observed_order,
)
from .splitting import split, split_generator
from .symmetry import (
    SymmetryVerdict,
    classify_split_operators,
    closure_dimension,
    lie_bracket,
    prolong,
    solve_determining,
    symmetry_residual,
)
from .systems import (
    Constraint,
    ConstraintSet,
    DifferentialSystem,
    Equation,
    Generator,
    ScalarODE,
    SPLIT_KINDS,
    kind_spec,
)

__version__ = "0.1.0"
