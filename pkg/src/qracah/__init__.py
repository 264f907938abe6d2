"""q-Racah polynomials on the lattice [s]_q [s+1]_q and U_q(su(2)) 6j-symbols.

Exact backend: rational functions of t = q^(1/4) (every identity checked as
algebraic equality).  Float backend: arbitrary-precision arithmetic at fixed
real q.  See the README for the CLI and the verification suites.
"""

from .errors import (
    BoundaryConditionViolated,
    DegenerateLatticePoint,
    DegreeOutOfRange,
    DenominatorVanishesAtUnity,
    DivisionByZero,
    GammaProductUnbalanced,
    InadmissibleParams,
    NegativeArgument,
    NegativeUnderRadical,
    NonHalfIntegerExponent,
    NonTerminating,
    PoleBeforeTermination,
    PoleInClosedForm,
    PoleInRatio,
    QRacahError,
    TriangleViolation,
    UnknownSuite,
)
from .scalar import (
    QContext,
    exact_context,
    exact_eval_at_unity,
    evaluate_exact,
    float_context,
    format_scalar,
)
from .qarith import (
    gamma_tilde_product,
    gamma_tilde_ratio,
    kappa,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_nu,
)
from .qhyper import (
    BasicSeriesSpec,
    SeriesParam,
    eval_F,
    eval_phi,
    eval_series,
    series_spec,
    vwp_6phi5_closed,
    vwp_6phi5_series,
)
from .nulattice import Lattice, NUProblem, racah_lattice
from .racah import Family, RacahParams, eval_u, eval_u_tilde, evaluate
from .sixj import SixJ, SixJTable, racah_coefficient, sixj_squared, sixj_value

__version__ = "0.1.0"

__all__ = [
    "QContext", "exact_context", "float_context", "exact_eval_at_unity",
    "evaluate_exact", "format_scalar",
    "kappa", "q_number", "q_factorial", "q_pochhammer", "q_pochhammer_nu",
    "gamma_tilde_ratio", "gamma_tilde_product",
    "SeriesParam", "BasicSeriesSpec", "series_spec", "eval_series",
    "eval_phi", "eval_F", "vwp_6phi5_closed", "vwp_6phi5_series",
    "Lattice", "NUProblem", "racah_lattice",
    "Family", "RacahParams", "evaluate", "eval_u", "eval_u_tilde",
    "SixJ", "SixJTable", "sixj_value", "sixj_squared", "racah_coefficient",
    "QRacahError", "DivisionByZero", "NonHalfIntegerExponent",
    "NegativeArgument", "DenominatorVanishesAtUnity", "PoleInRatio",
    "GammaProductUnbalanced", "PoleBeforeTermination", "NonTerminating",
    "PoleInClosedForm", "DegenerateLatticePoint", "BoundaryConditionViolated",
    "DegreeOutOfRange", "InadmissibleParams", "TriangleViolation",
    "NegativeUnderRadical", "UnknownSuite",
]
