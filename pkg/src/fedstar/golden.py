"""Built-in example pipelines shared by the CLI and the test suite.

``golden_example`` assembles everything for one of the named geometries:
the chart, the connection for the requested perturbation label, the group
data, the classical moment map, the solved quantum moment map and the
Casimir element.
"""

from .charts import builtin_chart_r2, builtin_chart_s2, moment_jets_r2, \
    moment_jets_s2
from .conventions import DEFAULTS
from .errors import InputError
from .fedosov import WeylCurvature, build_connection
from .gutt import builtin_sl2, builtin_so3, casimir_element
from .moment import quantum_moment_map

EXAMPLES = ("r2-sl2", "s2-so3")
DEFAULT_REPORT_JET_ORDER = 4


def chart_jet_order(order, report_jet_order=DEFAULT_REPORT_JET_ORDER):
    """Input jets deep enough that the report window is exact.

    Every Fedosov-degree step consumes at most one coordinate derivative
    and the recursions run through degree 2*order + 1.
    """
    return report_jet_order + 2 * order + 2


class GoldenExample:
    __slots__ = ("name", "chart", "connection", "algebra", "classical",
                 "qmm", "casimir", "conventions", "requested_order")

    def __init__(self, name, chart, connection, algebra, classical, qmm,
                 casimir, conventions, requested_order):
        self.name = name
        self.chart = chart
        self.connection = connection
        self.algebra = algebra
        self.classical = classical
        self.qmm = qmm
        self.casimir = casimir
        self.conventions = conventions
        self.requested_order = requested_order


def make_chart(name, order, report_jet_order=DEFAULT_REPORT_JET_ORDER,
               conventions=DEFAULTS):
    fiber = conventions["fiber-poisson-sign"]
    jet_order = chart_jet_order(order, report_jet_order)
    if name == "r2":
        return builtin_chart_r2(jet_order, fiber)
    if name == "s2":
        return builtin_chart_s2(jet_order, fiber)
    raise InputError("unknown chart %r (built in: r2, s2)" % name)


def golden_example(name, order, omega_pert=(), conventions=DEFAULTS,
                   report_jet_order=DEFAULT_REPORT_JET_ORDER):
    """Assemble a named pipeline, exact through the requested order.

    The moment-map constants at lambda^t are determined by the bracket
    homomorphism at lambda^{t+1}, so everything is built one order higher
    internally; reports truncate back to the requested order.
    """
    if name == "r2-sl2":
        chart_name, algebra, moments = "r2", builtin_sl2(), moment_jets_r2
    elif name == "s2-so3":
        chart_name, algebra, moments = "s2", builtin_so3(), moment_jets_s2
    else:
        raise InputError("unknown example %r (built in: %s)"
                         % (name, ", ".join(EXAMPLES)))
    internal = order + 1
    chart = make_chart(chart_name, internal, report_jet_order, conventions)
    curvature = WeylCurvature.from_omega_multiples(chart, omega_pert,
                                                   internal, conventions)
    connection = build_connection(chart, curvature, internal, conventions)
    classical = moments(internal, chart.jet_order)
    qmm = quantum_moment_map(connection, classical, algebra)
    casimir = casimir_element(algebra, internal)
    return GoldenExample(name, chart, connection, algebra, classical, qmm,
                         casimir, conventions, order)
