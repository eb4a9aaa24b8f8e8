"""Quantum moment maps for Fedosov star products via the flat-chart reduction.

On a Darboux chart the moment map of a perturbed product differs from the
classical one by a correction whose gradient is controlled by the linear
part of the flat-chart (semi-Moyal) connection with the same Weyl
curvature:

    mu_i^l = - pi^{kl} gamma^(1)_{ki},
    d_i Hbar = (-2 mu + mu^2)_i^j d_j H,

with pi the canonical bivector and gamma^(1) the linear-in-y part of
gamma.  The corrected candidates are fixed up to constants; the constants
are then the unique exact solution of the bracket homomorphism condition

    lambda Phi([X, Y]) = [Phi(X), Phi(Y)]_*

per lambda order, solved over the scalar field.  Uniqueness holds exactly
when the linear system is nonsingular (operationally the vanishing of the
algebra's first cohomology); singular or inconsistent systems raise.

``verify_qmm`` checks the derivation property [Phi(X), u]_* = lambda X u
against the classical action X u = {Phi_0(X), u} and the bracket condition
on all generator pairs, reporting each check separately.
"""

from fractions import Fraction

from .coefficients import LambdaSeries, Scalar
from .errors import (InputError, MathCheckError, NoQuantumMomentMapError,
                     NonClosedFormError, NonUniqueMomentMapError)
from .jets import FunctionJet


class MuTensor:
    """Jets of the linear-part matrix mu_i^l; vanishes at lambda^0."""

    __slots__ = ("dim", "order", "components")

    def __init__(self, dim, order, components):
        self.dim = dim
        self.order = order
        self.components = components  # dict (i, l) -> FunctionJet
        for jet in components.values():
            value = jet.value_at_origin()
            if not value.coeffs[0].is_zero():
                raise MathCheckError("mu must vanish at lambda^0")
            for alpha, series in jet.coeffs.items():
                if not series.coeffs[0].is_zero():
                    raise MathCheckError("mu must vanish at lambda^0")

    def entry(self, i, l, jet_order):
        jet = self.components.get((i, l))
        if jet is None:
            return FunctionJet.zero(self.dim, self.order, jet_order)
        return jet

    def is_zero(self):
        return all(jet.is_zero() for jet in self.components.values())

    def correction_matrix(self):
        """(-2 mu + mu^2)_i^j as a dict of jets."""
        out = {}
        for (i, l), jet in self.components.items():
            out[(i, l)] = jet.scale(Fraction(-2))
        for (i, m), left in self.components.items():
            for (m2, l), right in self.components.items():
                if m2 != m:
                    continue
                term = left * right
                held = out.get((i, l))
                out[(i, l)] = term if held is None else held + term
        return {k: v for k, v in out.items() if not v.is_zero()}


class QuantumMomentMap:
    """Generator jets of the moment map, with its classical part."""

    __slots__ = ("algebra", "components", "classical", "connection")

    def __init__(self, algebra, components, classical, connection):
        self.algebra = algebra
        self.components = dict(components)
        self.classical = dict(classical)
        self.connection = connection
        for name, jet in self.components.items():
            low = _lambda0_part(jet)
            if not low == _lambda0_part(self.classical[name]):
                raise MathCheckError(
                    "moment map component %r does not reduce to the "
                    "classical map at lambda^0" % name)

    def component(self, name):
        return self.components[name]

    def to_document(self):
        return {name: self.components[name].to_entries()
                for name in sorted(self.components)}


def _lambda0_part(jet):
    out = FunctionJet(jet.dim, 0, jet.jet_order)
    for alpha, series in jet.coeffs.items():
        out._set(alpha, LambdaSeries((series.coeffs[0],), 0))
    return out


def mu_from_connection(conn):
    """Extract mu from the linear-in-y part of a flat-chart connection."""
    chart = conn.chart
    if not chart.is_flat_gamma():
        raise InputError("mu extraction requires a semi-Moyal connection "
                         "(flat chart connection)")
    dim = chart.dim
    order = conn.order
    jet_order = conn.gamma.jet_order
    pi = chart.symplectic.poisson
    buckets = {}
    for (alpha, beta, form, k), coeff in conn.gamma.entries.items():
        if sum(beta) != 1 or len(form) != 1:
            continue
        kax = beta.index(1)
        iax = form[0]
        buckets.setdefault((kax, iax), {}).setdefault(alpha, {})[k] = coeff
    components = {}
    for i in range(dim):
        for l in range(dim):
            jet = FunctionJet(dim, order, jet_order)
            acc = {}
            for kax in range(dim):
                p = pi[kax][l]
                if not p:
                    continue
                for alpha, by_k in buckets.get((kax, i), {}).items():
                    slot = acc.setdefault(alpha, {})
                    for k, coeff in by_k.items():
                        held = slot.get(k)
                        term = coeff * (-p)
                        slot[k] = term if held is None else held + term
            for alpha, by_k in acc.items():
                coeffs = [by_k.get(k, Scalar.zero(chart.params))
                          for k in range(order + 1)]
                jet._set(alpha, LambdaSeries(coeffs, order))
            if not jet.is_zero():
                components[(i, l)] = jet
    return MuTensor(dim, order, components)


def solve_correction(h, mu):
    """Integrate d_i Hbar = (-2 mu + mu^2)_i^j d_j H from the origin.

    The covector field must be closed jetwise; the integral is realised as
    exact division of Taylor coefficients and the result is normalized to
    vanish at the origin.
    """
    dim = h.dim
    matrix = mu.correction_matrix()
    grads = [h.partial(j) for j in range(dim)]
    covector = []
    for i in range(dim):
        acc = None
        for (ii, j), jet in matrix.items():
            if ii != i:
                continue
            term = jet * grads[j]
            acc = term if acc is None else acc + term
        covector.append(acc if acc is not None
                        else FunctionJet.zero(dim, h.order, h.jet_order - 1))
    trust = min(v.jet_order for v in covector)
    for i in range(dim):
        for j in range(i + 1, dim):
            closed = covector[j].partial(i) - covector[i].partial(j)
            if not closed.is_zero():
                raise NonClosedFormError(
                    "correction covector is not closed on axes (%d, %d); "
                    "the input geometry is inconsistent" % (i, j))
    # Euler identity: |alpha| Hbar_alpha = sum_i (v_i)_{alpha - e_i}
    out = FunctionJet(dim, h.order, trust + 1)
    for i in range(dim):
        for alpha, series in covector[i].coeffs.items():
            up = tuple(a + (1 if t == i else 0) for t, a in enumerate(alpha))
            total = sum(up)
            if total > out.jet_order:
                continue
            weight = Fraction(1, total)
            held = out.coeffs.get(up)
            term = series * weight
            if held is None:
                out._set(up, term)
            else:
                merged = held + term
                if merged.is_zero():
                    del out.coeffs[up]
                else:
                    out.coeffs[up] = merged
    for i in range(dim):
        if not out.partial(i) == covector[i].truncate_jet(out.jet_order - 1):
            raise MathCheckError("jet integration failed to invert the "
                                 "gradient")
    return out


def fix_constants(candidates, conn, algebra, classical=None):
    """Solve the bracket homomorphism for the undetermined constants.

    ``candidates`` maps generator names to corrected jets (classical plus
    integrated correction).  The unknowns are one constant per generator
    per lambda order; the residual of the bracket condition must itself be
    constant for the system to make sense.  The constant at the top lambda
    order never enters the truncated condition and is normalized to zero.
    """
    if classical is None:
        classical = candidates
    names = algebra.names
    order = conn.order
    params = conn.chart.params
    stars = {}
    for a in range(algebra.dim):
        for b in range(a + 1, algebra.dim):
            lhs = conn.star(candidates[names[a]], candidates[names[b]])
            rhs = conn.star(candidates[names[b]], candidates[names[a]])
            stars[(a, b)] = lhs - rhs
    residuals = {}
    for (a, b), comm in stars.items():
        acc = comm
        for k, coeff in algebra.bracket(a, b).items():
            acc = acc - candidates[names[k]].lambda_shift(1).scale(coeff)
        if not acc.is_constant():
            raise NoQuantumMomentMapError(
                "bracket residual for (%s, %s) is not constant; no quantum "
                "moment map exists at this truncation"
                % (names[a], names[b]))
        residuals[(a, b)] = acc.value_at_origin()
    # per lambda order t >= 1: sum_k C^k_ab const_k[t - 1] = residual_ab[t]
    constants = {name: [Scalar.zero(params) for _ in range(order + 1)]
                 for name in names}
    rows = sorted(residuals)
    for t in range(1, order + 1):
        matrix = []
        rhs = []
        for (a, b) in rows:
            row = [Scalar.zero(params) for _ in range(algebra.dim)]
            for k, coeff in algebra.bracket(a, b).items():
                row[k] = row[k] + coeff
            matrix.append(row)
            rhs.append(residuals[(a, b)].coeffs[t])
        solution = _solve_exact(matrix, rhs, params)
        for k, name in enumerate(names):
            constants[name][t - 1] = solution[k]
    components = {}
    for name in names:
        shift = FunctionJet.constant(LambdaSeries(constants[name], order),
                                     conn.chart.dim, order,
                                     candidates[name].jet_order)
        components[name] = candidates[name] + shift
    return QuantumMomentMap(algebra, components, dict(classical), conn)


def _solve_exact(matrix, rhs, params):
    """Gaussian elimination over the scalar field; exact, fails loudly."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    pivot_cols = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if not aug[rr][c].is_zero():
                pivot = rr
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for rr in range(rows):
            if rr == r or aug[rr][c].is_zero():
                continue
            factor = aug[rr][c]
            aug[rr] = [v - factor * w for v, w in zip(aug[rr], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if not aug[rr][cols].is_zero():
            raise NoQuantumMomentMapError(
                "no quantum moment map at this order: the constant-fixing "
                "system is inconsistent")
    if len(pivot_cols) < cols:
        raise NonUniqueMomentMapError(
            "non-unique moment map (H^1 != 0): the constant-fixing system "
            "is singular")
    solution = [Scalar.zero(params) for _ in range(cols)]
    for r_idx, c in enumerate(pivot_cols):
        solution[c] = aug[r_idx][cols]
    return solution


def quantum_moment_map(conn, classical, algebra):
    """The full pipeline: reduction, correction, constant fixing.

    For the canonical curvature the correction vanishes and the classical
    map is returned unchanged (with constants verified to be zero).
    """
    chart = conn.chart
    if conn.omega_curvature.is_trivial():
        candidates = dict(classical)
    else:
        if chart.is_flat_gamma():
            flat = chart
        else:
            from .charts import Chart
            flat = Chart(chart.name + "-flat", chart.dim, chart.params,
                         chart.coords, chart.jet_order, {},
                         chart.symplectic.fiber_sign)
        from .fedosov import WeylCurvature, semi_moyal
        flat_curv = WeylCurvature(flat, conn.omega_curvature.tilde,
                                  conn.omega_curvature.label)
        semi = semi_moyal(flat, flat_curv, conn.order, conn.conventions)
        mu = mu_from_connection(semi)
        candidates = {}
        for name, jet in classical.items():
            candidates[name] = jet + solve_correction(jet, mu)
    return fix_constants(candidates, conn, algebra, classical)


def verify_qmm(qmm, conn, sample_jets, action=None):
    """Report on the derivation and bracket conditions.

    ``sample_jets`` is a list of function jets to probe the derivation
    property with; ``action`` optionally overrides the classical action
    X u = {Phi_0(X), u}.
    """
    algebra = qmm.algebra
    symp = conn.chart.symplectic
    report = {"derivation": {}, "bracket": {}}
    for name in algebra.names:
        phi = qmm.component(name)
        phi0 = qmm.classical[name]
        ok = True
        for u in sample_jets:
            lhs = conn.star(phi, u) - conn.star(u, phi)
            xu = action(name, u) if action else phi0.poisson(u, symp)
            rhs = xu.lambda_shift(1)
            trust = min(lhs.jet_order, rhs.jet_order)
            if not lhs.truncate_jet(trust) == rhs.truncate_jet(trust):
                ok = False
                break
        report["derivation"][name] = ok
    names = algebra.names
    for a in range(algebra.dim):
        for b in range(a + 1, algebra.dim):
            lhs = conn.star(qmm.component(names[a]), qmm.component(names[b])) \
                - conn.star(qmm.component(names[b]), qmm.component(names[a]))
            rhs = None
            for k, coeff in algebra.bracket(a, b).items():
                term = qmm.component(names[k]).lambda_shift(1).scale(coeff)
                rhs = term if rhs is None else rhs + term
            if rhs is None:
                rhs = FunctionJet.zero(conn.chart.dim, conn.order,
                                       lhs.jet_order)
            trust = min(lhs.jet_order, rhs.jet_order)
            ok = lhs.truncate_jet(trust) == rhs.truncate_jet(trust)
            report["bracket"]["%s,%s" % (names[a], names[b])] = ok
    report["passed"] = (all(report["derivation"].values())
                        and all(report["bracket"].values()))
    return report
