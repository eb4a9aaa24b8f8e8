"""Casimir evaluation: push central elements through the moment map.

``evaluate_casimir`` substitutes each generator of a central word sum by
its moment-map jet, multiplies out the words with the star product and
sums with the word coefficients.  The result must be a constant jet; a
non-constant evaluation is always an error (never silently projected),
carrying the offending jet as a diagnostic.  Constancy within the trusted
jet window is the witness that the evaluation point is immaterial.
"""

import json

from .coefficients import LambdaSeries
from .errors import NonCentralError, NonConstantInvariantError
from .gutt import check_central
from .jets import FunctionJet


def evaluate_casimir(element, qmm, conn, order=None):
    """The constant series of a central element under the moment map.

    ``order`` truncates the evaluation before the constancy gate; the
    pipelines run one lambda order above the requested one (to pin the
    moment-map constants) and that top internal order carries one
    intentionally undetermined constant.
    """
    algebra = qmm.algebra
    if not check_central(element, algebra):
        raise NonCentralError("element is not central within the truncation")
    total = None
    for word, series in element.words.items():
        jet = None
        for idx in word:
            factor = qmm.component(algebra.names[idx])
            jet = factor if jet is None else conn.star(jet, factor)
        if jet is None:
            jet = FunctionJet.constant(LambdaSeries.constant(1, conn.order),
                                       conn.chart.dim, conn.order,
                                       conn.chart.jet_order)
        term = jet.scale(series)
        total = term if total is None else total + term
    if total is None:
        return LambdaSeries.zero(conn.order if order is None else order)
    if order is not None and order < total.order:
        total = total.truncate_order(order)
    if not verify_constancy(total):
        raise NonConstantInvariantError(
            "casimir evaluation produced a non-constant jet (convention "
            "inconsistency upstream)", jet=total)
    return total.value_at_origin()


def verify_constancy(jet):
    """True iff all positive-order coefficients vanish within truncation."""
    return jet.is_constant()


def compare(a, b):
    """First differing lambda order of two reports, or "equal"."""
    if a.casimir != b.casimir:
        raise NonCentralError("reports evaluate different casimir elements")
    for n in range(min(a.value.order, b.value.order) + 1):
        if not (a.value.coeffs[n] - b.value.coeffs[n]).is_zero():
            return "differ-at-order-%d" % n
    return "equal"


class InvariantReport:
    """Evaluated invariant plus the context needed to reproduce it."""

    __slots__ = ("casimir", "chart", "omega_label", "value", "constancy",
                 "order", "conventions")

    def __init__(self, casimir, chart, omega_label, value, constancy, order,
                 conventions):
        self.casimir = casimir
        self.chart = chart
        self.omega_label = omega_label
        self.value = value
        self.constancy = constancy
        self.order = order
        self.conventions = conventions

    def to_document(self):
        return {
            "casimir": self.casimir,
            "chart": self.chart,
            "omega": ["1"] + list(self.omega_label),
            "c": [str(c) for c in self.value.coeffs],
            "constancy": bool(self.constancy),
            "order": self.order,
            "conventions_hash": self.conventions.ledger_hash(),
            "toggles": list(self.conventions.toggled()),
        }

    def to_json(self):
        return json.dumps(self.to_document(), indent=1, sort_keys=True) + "\n"

    def to_text(self):
        lines = ["casimir: %s" % self.casimir,
                 "chart: %s" % self.chart,
                 "omega: omega" + "".join(
                     " + (%s)*lambda^%d*omega" % (c, k + 1)
                     for k, c in enumerate(self.omega_label)),
                 "order: %d" % self.order,
                 "c = %s" % self.value,
                 "constancy: %s" % ("verified" if self.constancy else
                                    "FAILED"),
                 "conventions: %s%s" % (self.conventions.ledger_hash(),
                                        " toggles=" +
                                        ",".join(self.conventions.toggled())
                                        if self.conventions.toggled() else
                                        " (defaults)")]
        return "\n".join(lines) + "\n"
