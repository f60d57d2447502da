"""End-to-end orchestration: solve, guess, certify, holonomic chain, report."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .algebra.multipoly import MultiPoly
from .errors import (
    CatalyticError,
    EquationSyntaxError,
    EquationFileError,
    InsufficientOrder,
    NoGuess,
    SharedFactor,
    TamperDetected,
)
from .frontend import EquationFile, build_equation, load_equation_file
from .guessing import AlgebraicGuess, guess_algebraic_2var, guess_algebraic_3var
from .holonomic import derive_holonomic
from .series import PolySeries, RationalSeries, specialize_t1
from .solver import SolverResult, solve
from .verify import CERTIFIED, INCONCLUSIVE, REFUTED, Certificate, certify

log = logging.getLogger(__name__)

SCHEMA = 1

EXIT_CERTIFIED = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4

_VERDICT_EXIT = {CERTIFIED: EXIT_CERTIFIED, REFUTED: EXIT_REFUTED, INCONCLUSIVE: EXIT_INCONCLUSIVE}


@dataclass
class PipelineConfig:
    order: int = 60
    max_deg_q: int = 8
    max_deg_x: int = 8
    margin: int = 10
    rec_order: int = 6
    rec_deg: int = 6
    slow_path_3var: bool = False
    slow_bounds: tuple = (4, 4, 4)
    out: str | None = None

    def validate(self) -> None:
        ints = [self.order, self.max_deg_q, self.max_deg_x, self.rec_order, self.rec_deg, *self.slow_bounds]
        if any(v < 1 for v in ints) or self.margin < 0:
            raise ValueError("all bounds must be positive")

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["slow_bounds"] = list(self.slow_bounds)
        return d


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (EquationSyntaxError, EquationFileError, ValueError, OSError, KeyError, json.JSONDecodeError)):
        return EXIT_USAGE
    if isinstance(exc, TamperDetected):
        return EXIT_REFUTED
    if isinstance(exc, (NoGuess, InsufficientOrder, SharedFactor)):
        return EXIT_INCONCLUSIVE
    return EXIT_INTERNAL


@dataclass
class PipelineResult:
    document: dict
    report: str
    exit_code: int
    timings: dict = field(default_factory=dict)
    certificate: Certificate | None = None

    @property
    def verdict(self) -> str | None:
        return self.document.get("certificate", {}).get("verdict")

    def dumps(self) -> str:
        return dumps(self.document)


def dumps(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _series_json(sol: SolverResult) -> dict:
    return {
        "order": sol.order,
        "method": sol.method,
        "f_x1": sol.f_x1.to_list(),
        "f_xt": sol.f_xt.to_strings(),
    }


def _series_from_json(data: dict) -> tuple[PolySeries, RationalSeries]:
    order = data["order"]
    f_xt = PolySeries.from_json({"order": order, "coeffs": data["f_xt"]})
    f_x1 = RationalSeries.from_json({"order": order, "coeffs": data["f_x1"]})
    return f_xt, f_x1


def _slow_path(sol: SolverResult, G: MultiPoly, bounds) -> dict:
    g3 = guess_algebraic_3var(sol.f_xt, *bounds)
    a = g3.poly.primitive_part()
    b = G.primitive_part()
    return {
        "guess": g3.to_json(),
        "divides_G": a.divides(b),
        "divided_by_G": b.divides(a),
    }


def run_pipeline(config: PipelineConfig, source: EquationFile | str | Path, stop_after: str = "prove") -> PipelineResult:
    """Run the chain up to ``stop_after`` (solve, guess or prove).

    Module errors are caught, tagged with the stage, and returned together
    with every result computed before the failure.
    """
    doc: dict = {"schema": SCHEMA, "config": config.to_json()}
    timings: dict = {}
    stage = "parse"
    cert = None
    try:
        config.validate()
        spec = source if isinstance(source, EquationFile) else load_equation_file(source)
        eq = spec.build()
        doc["equation"] = {"name": eq.name, "text": eq.text, "F": str(eq.F), "loci": [str(a) for a in eq.loci]}

        stage = "solve"
        t0 = time.perf_counter()
        sol = solve(eq, config.order)
        timings["solve"] = time.perf_counter() - t0
        doc["series"] = _series_json(sol)
        if stop_after == "solve":
            return PipelineResult(doc, render_report(doc, timings), EXIT_CERTIFIED, timings)

        stage = "guess"
        t0 = time.perf_counter()
        guess = guess_algebraic_2var(sol.f_x1, config.max_deg_q, config.max_deg_x, config.margin)
        timings["guess"] = time.perf_counter() - t0
        doc["guess"] = guess.to_json()
        if stop_after == "guess":
            return PipelineResult(doc, render_report(doc, timings), EXIT_CERTIFIED, timings)

        stage = "certify"
        t0 = time.perf_counter()
        cert = certify(eq, guess, sol)
        timings["certify"] = time.perf_counter() - t0
        timings.update({f"certify.{k}": v for k, v in cert.timings.items()})
        doc["certificate"] = cert.to_json()

        stage = "holonomic"
        t0 = time.perf_counter()
        doc["holonomic"] = derive_holonomic(
            guess.poly, sol.f_x1.coeffs, config.rec_order, config.rec_deg, config.margin
        )
        timings["holonomic"] = time.perf_counter() - t0

        if config.slow_path_3var and cert.G is not None:
            stage = "slow_path"
            t0 = time.perf_counter()
            doc["slow_path"] = _slow_path(sol, MultiPoly.parse(cert.G), config.slow_bounds)
            timings["slow_path"] = time.perf_counter() - t0
        code = _VERDICT_EXIT[cert.verdict]
    except Exception as exc:  # every failure is reported with its stage
        code = exit_code_for(exc)
        if isinstance(exc, CatalyticError) and exc.stage is None:
            exc.stage = stage
        if code == EXIT_INTERNAL and not isinstance(exc, CatalyticError):
            log.exception("internal failure in stage %s", stage)
        doc["error"] = {"stage": stage, "type": type(exc).__name__, "message": str(exc)}
    return PipelineResult(doc, render_report(doc, timings), code, timings, cert)


def recheck(document: dict) -> str:
    """Re-verify a certificate document from its own F, I and series.

    Returns the verdict; raises TamperDetected when any recomputed field differs.
    """
    if document.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {document.get('schema')!r}")
    stored = Certificate.from_json(document["certificate"])
    eqd = stored.equation
    eq = build_equation(eqd["text"], eqd["initial"], eqd["name"])
    diffs = []
    if str(eq.F) != eqd["F"]:
        diffs.append("equation.F")
    f_xt, f_x1 = _series_from_json(document["series"])
    if specialize_t1(f_xt) != f_x1:
        diffs.append("series.f_x1")
    sol = SolverResult(f_xt, f_x1, f_xt.order, document["series"]["method"])
    guess = AlgebraicGuess.from_json(stored.guess)
    fresh = certify(eq, guess, sol).to_json()
    old = stored.to_json()
    diffs += [k for k in sorted(old) if old[k] != fresh[k]]
    if "holonomic" in document:
        cfg = document.get("config", {})
        hol = derive_holonomic(
            guess.poly,
            f_x1.coeffs,
            cfg.get("rec_order", 6),
            cfg.get("rec_deg", 6),
            cfg.get("margin", 10),
        )
        if json.loads(json.dumps(hol, sort_keys=True)) != document["holonomic"]:
            diffs.append("holonomic")
    if diffs:
        raise TamperDetected(f"recomputed fields differ: {', '.join(diffs)}")
    return fresh["verdict"]


def _clip(s: str, width: int = 400) -> str:
    return s if len(s) <= width else s[: width - 20] + f" ... ({len(s)} chars)"


def render_report(doc: dict, timings: dict) -> str:
    lines = []
    eq = doc.get("equation")
    if eq:
        lines += [f"equation {eq['name']}: {eq['text']}", f"  F = {_clip(eq['F'])}"]
        if eq["loci"]:
            lines.append(f"  excluded loci: {', '.join(eq['loci'])}")
    ser = doc.get("series")
    if ser:
        lines.append(f"series to order {ser['order']} ({ser['method']})")
        lines.append("  f(x,1) = " + ", ".join(ser["f_x1"][:16]) + (", ..." if len(ser["f_x1"]) > 16 else ""))
    g = doc.get("guess")
    if g:
        lines.append(f"guess I = {g['poly']}")
        lines.append(f"  bounds {tuple(g['bounds'])}, margin {g['margin']}, nullspace dim {g['nullspace_dim']}")
    c = doc.get("certificate")
    if c:
        lines.append(f"G = {_clip(c['G'] or 'none')}")
        lines.append(f"S = {_clip(c['S'] or 'none')}")
        lines.append(f"S / I = {_clip(c['quotient'] or 'none')}")
        for k, v in c["checks"].items():
            lines.append(f"  check {k}: {v}")
        for k, v in c["simple_root_checks"].items():
            lines.append(f"  {k}: {v}")
        lines.append(f"verdict: {c['verdict']}")
    h = doc.get("holonomic")
    if h:
        if h.get("ode"):
            lines.append(f"ODE: {_clip(h['ode']['text'])}")
        for key in ("recurrence_from_ode", "recurrence_guessed", "recurrence"):
            if h.get(key):
                lines.append(f"{key.replace('_', ' ')}: {h[key]['text']} (n >= {h[key]['offset']})")
        if h.get("recurrence_source"):
            lines.append(f"  source: {h['recurrence_source']}")
        cf = h.get("closed_form")
        if cf:
            lines.append(f"closed form: {cf['product_form']}")
            for key in ("pochhammer_form", "factorial_form"):
                if cf.get(key):
                    lines.append(f"  {cf[key]}")
    sp = doc.get("slow_path")
    if sp:
        lines.append(f"slow path G3 = {_clip(sp['guess']['poly'])}")
        lines.append(f"  divides G: {sp['divides_G']}, divided by G: {sp['divided_by_G']}")
    err = doc.get("error")
    if err:
        lines.append(f"error in stage {err['stage']}: {err['type']}: {err['message']}")
    if timings:
        lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in timings.items()))
    return "\n".join(lines) + "\n"


__all__ = [
    "PipelineConfig",
    "PipelineResult",
    "run_pipeline",
    "recheck",
    "render_report",
    "dumps",
    "exit_code_for",
]
