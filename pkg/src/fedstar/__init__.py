"""fedstar: exact star products of Fedosov type on Darboux charts.

Everything is computed in exact rational arithmetic over the field of
rational functions in the chart parameters; there are no floating-point
code paths.  See the README for the layout and the CLI.
"""

from .charts import (Chart, CurvatureJets, builtin_chart_r2, builtin_chart_s2,
                     curvature_from_gamma, moment_jets_r2, moment_jets_s2)
from .coefficients import (LambdaSeries, Scalar, UnivariateJet, jet_sqrt,
                           series_inverse, series_mul)
from .conventions import DEFAULTS, Conventions
from .fedosov import (EquivalenceOp, FedosovConnection, WeylCurvature,
                      build_connection, semi_moyal, transport)
from .golden import golden_example
from .gutt import (LieAlgebra, NCElement, SymPoly, builtin_sl2, builtin_so3,
                   casimir_element, check_central, desymmetrize, gutt_mul,
                   pbw_straighten, symmetrize)
from .invariants import (InvariantReport, compare, evaluate_casimir,
                         verify_constancy)
from .jets import FunctionJet
from .moment import (MuTensor, QuantumMomentMap, fix_constants,
                     mu_from_connection, quantum_moment_map, solve_correction,
                     verify_qmm)
from .weyl import (SymplecticData, WeylSection, delta, delta_inv,
                   graded_commutator, lie_generator, moyal_mul, sigma)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
