"""Unique power-series solution f(x,t) of a functional equation.

Two independent routes: fixed-point iteration on the map P -> phi(P, Q, x, t)
and order-by-order exact linear solving on the cleared polynomial F.  They
share only the low-level series arithmetic.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import upoly
from .algebra.linalg import solve_sparse
from .algebra.multipoly import MultiPoly
from .errors import CatalyticError, InconsistentOrder, NoContraction, NonUniqueOrder, SolverDisagreement
from .frontend import FunctionalEquation
from .online import compile_expression, compile_polynomial
from .series import PolySeries, RationalSeries, evaluate_polynomial, specialize_t1

log = logging.getLogger(__name__)

# trial value for P_n when checking that phi gains an order; Q_n is its value at t=1
_PROBE = upoly.from_ints(1, 1)


@dataclass(frozen=True)
class SolverResult:
    f_xt: PolySeries
    f_x1: RationalSeries
    order: int
    method: str
    diagnostics: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "method": self.method,
            "f_x1": self.f_x1.to_list(),
            "f_xt": self.f_xt.to_strings(),
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SolverResult":
        order = data["order"]
        f_xt = PolySeries.from_json({"order": order, "coeffs": data["f_xt"]})
        f_x1 = RationalSeries.from_json({"order": order, "coeffs": data["f_x1"]})
        return cls(f_xt, f_x1, order, data["method"], data.get("diagnostics", {}))


def _at_one(p) -> mpq:
    return sum(p, mpq(0))


def solve_fixed_point(eq: FunctionalEquation, N: int) -> SolverResult:
    """Iterate P <- phi(P, P|_{t=1}, x, t) from the constant seed.

    Each x^n coefficient of phi may only depend on lower coefficients of P;
    this is checked at runtime by re-evaluating with a trial P_n.
    """
    if eq.phi is None:
        raise CatalyticError("equation has no fixed-point form 'P = ...'")
    ev, root = compile_expression(eq.phi)
    seed = upoly.const(eq.initial)
    ev.run(0, seed, seed, first=True)
    v0 = ev.value(root, 0)
    if v0 != seed:
        ev.run(0, v0, upoly.const(_at_one(v0)), first=False)
        if ev.value(root, 0) != v0:
            raise NoContraction(0)
    ev.finalize(0)
    coeffs = [v0]
    for n in range(1, N + 1):
        ev.run(n, (), (), first=True)
        v = ev.value(root, n)
        ev.run(n, _PROBE, upoly.const(_at_one(_PROBE)), first=False)
        if ev.value(root, n) != v:
            raise NoContraction(n)
        ev.run(n, v, upoly.const(_at_one(v)), first=False)
        if ev.value(root, n) != v:
            raise NoContraction(n)
        ev.finalize(n)
        coeffs.append(v)
    f_xt = PolySeries(tuple(coeffs), N)
    return SolverResult(f_xt, specialize_t1(f_xt), N, "fixed_point", {"iterations": N + 1})


def _linear_part(F: MultiPoly, c0) -> tuple[tuple, tuple]:
    """t-polynomials dF/dP and dF/dQ at P = Q = c0, x = 0."""
    out = []
    for var in ("P", "Q"):
        d = F.derivative(var).substitute("P", c0).substitute("Q", c0).substitute("x", 0)
        out.append(d.to_upoly("t"))
    return out[0], out[1]


def _solve_order(n: int, R, alpha, beta, bound: int):
    """Unknowns: t-coefficients c_0..c_bound of the new coefficient, then gamma = c(1)."""
    g = bound + 1
    ncols = bound + 2
    top = max(len(alpha) - 1 + bound, len(beta) - 1, len(R) - 1, 0)
    rows, rhs = [], []
    for k in range(top + 1):
        row = {}
        for i in range(max(0, k - len(alpha) + 1), min(bound, k) + 1):
            a = alpha[k - i]
            if a:
                row[i] = a
        if k < len(beta) and beta[k]:
            row[g] = beta[k]
        rows.append(row)
        rhs.append(-R[k] if k < len(R) else mpq(0))
    constraint = {i: mpq(1) for i in range(bound + 1)}
    constraint[g] = mpq(-1)
    rows.append(constraint)
    rhs.append(mpq(0))
    return solve_sparse(rows, rhs, ncols)


def solve_order_by_order(eq: FunctionalEquation, N: int) -> SolverResult:
    """Solve for each coefficient c_n(t) and gamma = c_n(1) by exact linear algebra.

    The x^n coefficient of F(f_{<n} + c_n x^n, Q_{<n} + gamma x^n, x, t) is
    R_n + alpha*c_n + beta*gamma, with alpha, beta the x=0 partial derivatives
    of F at the constant term.  Treating gamma as its own unknown tied by
    c_n(1) = gamma keeps the system informative when F vanishes at t = 1.
    """
    F = eq.F
    c0 = eq.initial
    base = F.substitute("P", c0).substitute("Q", c0).substitute("x", 0)
    if base:
        raise InconsistentOrder(0)
    alpha, beta = _linear_part(F, c0)
    d0 = max(F.degree("t"), 0)
    ev, root = compile_polynomial(F)
    seed = upoly.const(c0)
    ev.run(0, seed, seed, first=True)
    ev.finalize(0)
    coeffs = [seed]
    bounds = []
    for n in range(1, N + 1):
        ev.run(n, (), (), first=True)
        R = ev.value(root, n)
        start = max(n * d0, 1)
        statuses = []
        sol = None
        for bound in (start, 2 * start, 4 * start):
            status, x = _solve_order(n, R, alpha, beta, bound)
            statuses.append(status)
            if status == "unique":
                sol = x
                break
        if sol is None:
            if "underdetermined" in statuses:
                raise NonUniqueOrder(n)
            raise InconsistentOrder(n)
        c = upoly.trim(sol[: bound + 1])
        gamma = sol[bound + 1]
        ev.run(n, c, upoly.const(gamma), first=False)
        if ev.value(root, n):
            raise InconsistentOrder(n)
        ev.finalize(n)
        coeffs.append(c)
        bounds.append(bound)
    f_xt = PolySeries(tuple(coeffs), N)
    return SolverResult(
        f_xt, specialize_t1(f_xt), N, "order_by_order", {"max_t_degree_bound": max(bounds, default=0)}
    )


def solve(eq: FunctionalEquation, N: int) -> SolverResult:
    """Run both solvers when a fixed-point form exists and require agreement."""
    obo = solve_order_by_order(eq, N)
    if eq.phi is None:
        return obo
    fp = solve_fixed_point(eq, N)
    if fp.f_xt != obo.f_xt:
        bad = next(i for i in range(N + 1) if fp.f_xt[i] != obo.f_xt[i])
        raise SolverDisagreement(f"fixed-point and order-by-order solutions differ at x^{bad}")
    diag = {**fp.diagnostics, **obo.diagnostics}
    return SolverResult(obo.f_xt, obo.f_x1, N, "both_agree", diag)


def residual(eq: FunctionalEquation, f_xt: PolySeries, f_x1: RationalSeries) -> PolySeries:
    """F(f(x,t), f(x,1), x, t) computed with plain truncated series arithmetic."""
    return evaluate_polynomial(eq.F, f_xt, f_x1.as_polyseries())
