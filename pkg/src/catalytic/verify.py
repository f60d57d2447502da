"""Certification of a guessed I(Q, x) by elimination, specialization and division.

Steps: G = Res_Q(F, I); G(f(x,t), x, t) vanishes through the working order;
S = G(Q, x, 1); S is a nonzero multiple of I; simple-root side conditions.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .algebra.multipoly import MultiPoly
from .algebra.rational import rat_str
from .algebra.resultant import resultant
from .errors import DivisibilityFailure, SharedFactor
from .frontend import FunctionalEquation
from .guessing import AlgebraicGuess
from .online import annihilation_order
from .solver import SolverResult, residual

log = logging.getLogger(__name__)

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


def eliminate_Q(F: MultiPoly, I: MultiPoly) -> MultiPoly:
    """G = Res_Q(F, I); a zero resultant means F and I share a factor in Q.

    F free of Q is allowed: the resultant is then F^deg_Q(I).
    """
    if I.degree("Q") < 1:
        raise ValueError("I must involve Q")
    G = resultant(F, I, "Q")
    if not G:
        raise SharedFactor("F and I have a common factor involving Q")
    return G


def specialize(G: MultiPoly) -> MultiPoly:
    """S = G with P -> Q and t -> 1."""
    return G.substitute("P", MultiPoly.var("Q")).substitute("t", 1)


@dataclass
class Certificate:
    equation: dict
    solver: dict
    guess: dict
    G: str | None
    S: str | None
    quotient: str | None
    checks: dict
    simple_root_checks: dict
    verdict: str
    notes: list = field(default_factory=list)
    # wall-clock data is reported but kept out of the JSON so that runs are reproducible
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_json(self) -> dict:
        return {
            "equation": self.equation,
            "solver": self.solver,
            "guess": self.guess,
            "G": self.G,
            "S": self.S,
            "quotient": self.quotient,
            "checks": self.checks,
            "simple_root_checks": self.simple_root_checks,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        keys = ("equation", "solver", "guess", "G", "S", "quotient", "checks", "simple_root_checks", "verdict")
        missing = [k for k in keys if k not in data]
        if missing:
            raise KeyError(f"certificate lacks {', '.join(missing)}")
        return cls(**{k: data[k] for k in keys}, notes=list(data.get("notes", [])))


def _equation_json(eq: FunctionalEquation) -> dict:
    return {
        "name": eq.name,
        "text": eq.text,
        "initial": rat_str(eq.initial),
        "F": str(eq.F),
        "loci": [str(a) for a in eq.loci],
    }


def certify(eq: FunctionalEquation, guess: AlgebraicGuess, sol: SolverResult) -> Certificate:
    """Run the verification chain; every failure is recorded, none is raised."""
    timings = {}
    checks: dict = {}
    roots: dict = {}
    notes: list[str] = []
    I = guess.poly
    N = sol.order
    s = sol.f_x1
    G = S = quo = None

    def tick(name, t0):
        timings[name] = round(time.perf_counter() - t0, 6)

    t0 = time.perf_counter()
    checks["residual_zero"] = residual(eq, sol.f_xt, sol.f_x1).is_zero()
    tick("residual", t0)
    checks["guess_annihilates_series"] = annihilation_order(I, s.as_polyseries(), s.as_polyseries()) > N

    t0 = time.perf_counter()
    try:
        G = eliminate_Q(eq.F, I)
    except SharedFactor as exc:
        notes.append(str(exc))
        checks["resultant_nonzero"] = False
    tick("resultant", t0)

    if G is not None:
        checks["resultant_nonzero"] = True
        t0 = time.perf_counter()
        ann = annihilation_order(G, sol.f_xt)
        checks["G_annihilation_order"] = ann
        checks["G_annihilates_series"] = ann > N
        tick("annihilation", t0)

        t0 = time.perf_counter()
        S = specialize(G)
        checks["S_nonzero"] = bool(S)
        try:
            quo = S.exact_divide(I) if S else None
        except DivisibilityFailure:
            quo = None
        checks["I_divides_S"] = quo is not None and bool(quo)
        # series-level counterpart of the polynomial identity
        checks["S_annihilates_series"] = bool(S) and annihilation_order(S, s.as_polyseries(), s.as_polyseries()) > N
        tick("division", t0)

        # simple roots; a power of x dividing G would make the x = 0 check vacuous
        dI = I.derivative("Q").substitute("Q", s[0]).substitute("x", 0)
        roots["dI_dQ_at_origin"] = str(dI)
        k = G.monomial_content("x")
        Gr = G.divide_monomial("x", k)
        roots["G_x_power_removed"] = k
        f0 = MultiPoly.from_upoly(sol.f_xt[0], "t")
        dG = Gr.derivative("P").substitute("x", 0).substitute("P", f0)
        roots["dG_dP_at_x0"] = str(dG)
        checks["simple_root_I"] = bool(dI)
        checks["simple_root_G"] = bool(dG)

    definitive = ("residual_zero", "guess_annihilates_series", "G_annihilates_series", "S_nonzero", "I_divides_S")
    side = ("simple_root_I", "simple_root_G")
    if not checks["resultant_nonzero"]:
        verdict = INCONCLUSIVE
    elif not all(checks[c] for c in definitive):
        verdict = REFUTED
    elif not all(checks[c] for c in side):
        verdict = INCONCLUSIVE
    else:
        verdict = CERTIFIED
    log.info("verdict for %s: %s", eq.name, verdict)
    return Certificate(
        equation=_equation_json(eq),
        solver={"order": N, "method": sol.method},
        guess=guess.to_json(),
        G=None if G is None else str(G),
        S=None if S is None else str(S),
        quotient=None if quo is None else str(quo),
        checks=checks,
        simple_root_checks=roots,
        verdict=verdict,
        notes=notes,
        timings=timings,
    )


__all__ = ["eliminate_Q", "specialize", "certify", "Certificate", "CERTIFIED", "REFUTED", "INCONCLUSIVE"]
