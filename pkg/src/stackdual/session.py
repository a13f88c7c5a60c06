"""Execute a parsed session and assemble human and machine reports.

Every numeric field in the machine-readable report is an integer or an
exact rational string, never floating point, and two runs of the same
session produce byte-identical JSON.  Wall-clock timings therefore go to
the human output only unless explicitly requested.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .caps import ResourceCapError, command_caps
from .complexes import homology, koszul
from .dsl import Command, SessionAst
from .duality import (CMReport, DualityReport, canonical_module,
                      cm_gorenstein_check, compare_modules, ext_dualizing,
                      finite_shriek, lci_dualizing, pushforward_check)
from .gmodule import (ModulePresentation, hilbert_function, hom_module,
                      invariant_part, minimalize)
from .poly import Bidegree

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_CAP = 3


# ---------------------------------------------------------------------------
# JSON helpers (deterministic, exact)


def bidegree_json(d: Bidegree) -> dict:
    return {"zdeg": d.zdeg, "weight": {"residue": d.weight, "modulus": d.modulus}}


def module_json(M: ModulePresentation) -> dict:
    return {
        "ring": M.ring.name,
        "generators": [bidegree_json(d) for d in M.free.bidegrees],
        "relations": [[str(p) for p in col] for col in M.relations],
    }


def table_json(table: dict) -> list:
    out = []
    for (z, w), dim in sorted(table.items()):
        out.append({"zdeg": z, "weight": w, "dim": dim})
    return out


def duality_report_json(rep: DualityReport) -> dict:
    return {
        "description": rep.description,
        "module": module_json(rep.module),
        "twist": rep.twist_label(),
        "is_sheaf": rep.is_sheaf,
        "is_free_rank_one": rep.is_free_rank_one,
        "generator_bidegrees": [bidegree_json(d) for d in rep.generator_bidegrees],
        "fiber_representation": [
            {"residue": d.weight, "modulus": d.modulus,
             "lambda": d.lambda_exponent()} for d in rep.generator_bidegrees],
        "ext_profile": {str(i): {"zero": z, "min_generators": n}
                        for i, (z, n) in sorted(rep.ext_profile.items())},
        "depth": rep.depth,
        "notes": rep.notes,
    }


def cm_report_json(rep: CMReport) -> dict:
    return {
        "codimension": rep.codimension,
        "ext_profile": {str(i): {"zero": z, "min_generators": n}
                        for i, (z, n) in sorted(rep.ext_profile.items())},
        "cohen_macaulay": rep.cohen_macaulay,
        "gorenstein": rep.gorenstein,
        "inconclusive": rep.inconclusive,
        "notes": rep.notes,
    }


# ---------------------------------------------------------------------------
# command execution


@dataclass
class CommandOutcome:
    name: str
    inputs: str
    result: dict
    verdicts: dict
    human: list[str]
    failed_check: bool = False
    timing_ms: Optional[int] = None


@dataclass
class RunReport:
    outcomes: list[CommandOutcome] = field(default_factory=list)
    partial: bool = False
    error: Optional[str] = None

    def exit_code(self) -> int:
        if self.error == "resource-cap":
            return EXIT_RESOURCE_CAP
        if self.error is not None:
            return EXIT_INPUT_ERROR
        if any(o.failed_check for o in self.outcomes):
            return EXIT_FAILED_CHECK
        return EXIT_OK

    def to_json(self, include_timings: bool = False) -> str:
        commands = []
        for o in self.outcomes:
            entry = {"name": o.name, "inputs": o.inputs,
                     "result": o.result, "verdicts": o.verdicts}
            if include_timings:
                entry["timing_ms"] = o.timing_ms
            commands.append(entry)
        doc = {"schema_version": SCHEMA_VERSION, "commands": commands}
        if self.partial:
            doc["partial"] = True
            doc["error"] = self.error
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def human_text(self) -> str:
        blocks = []
        for o in self.outcomes:
            blocks.append("\n".join([f"== {o.inputs}"] + o.human))
        if self.error:
            blocks.append(f"!! session aborted: {self.error}")
        return "\n\n".join(blocks) + "\n"


def run_session(ast: SessionAst, default_depth: Optional[int] = None,
                default_bound: Optional[int] = None,
                max_terms: Optional[int] = None,
                time_limit: Optional[float] = None) -> RunReport:
    report = RunReport()
    for cmd in ast.commands():
        started = time.monotonic()
        try:
            with command_caps(max_terms=max_terms, time_limit=time_limit):
                outcome = _execute(cmd, default_depth, default_bound)
        except ResourceCapError as exc:
            report.partial = True
            report.error = "resource-cap"
            report.outcomes.append(CommandOutcome(
                cmd.kind, cmd.text, {"error": str(exc)}, {"aborted": True},
                [f"aborted: {exc}"], failed_check=False))
            break
        except ValueError as exc:
            report.partial = True
            report.error = str(exc)
            report.outcomes.append(CommandOutcome(
                cmd.kind, cmd.text, {"error": str(exc)}, {"aborted": True},
                [f"error: {exc}"], failed_check=False))
            break
        outcome.timing_ms = int((time.monotonic() - started) * 1000)
        report.outcomes.append(outcome)
    return report


def _execute(cmd: Command, default_depth: Optional[int],
             default_bound: Optional[int]) -> CommandOutcome:
    handler = _HANDLERS[(cmd.kind, cmd.subkind)]
    return handler(cmd, default_depth, default_bound)


def _run_hom(cmd: Command, _d, _b) -> CommandOutcome:
    h = minimalize(hom_module(cmd.args["M"], cmd.args["N"]))
    return CommandOutcome(
        "hom", cmd.text, {"module": module_json(h)},
        {"min_generators": h.rank},
        [f"Hom module: {h}"])


def _run_ext(cmd: Command, _d, _b) -> CommandOutcome:
    ring = cmd.args["ring"]
    omega = cmd.args["omega"]
    if omega is None:
        omega = canonical_module(ring)
    exts = ext_dualizing(ring, cmd.args["ideal"], omega, cmd.options["max"])
    result = {"ext": [{"i": i, "module": module_json(e)} for i, e in exts]}
    human = [f"Ext^{i}: {e if e.rank else '0'}" for i, e in exts]
    nonzero = [i for i, e in exts if e.rank]
    return CommandOutcome("ext", cmd.text, result,
                          {"nonvanishing_indices": nonzero}, human)


def _run_koszul(cmd: Command, _d, _b) -> CommandOutcome:
    kc = koszul(cmd.args["ring"], cmd.args["seq"])
    homology_zero = all(minimalize(homology(kc, i)).rank == 0
                        for i in range(1, kc.length + 1))
    result = {
        "ranks": kc.ranks(),
        "generator_bidegrees": [[bidegree_json(d) for d in t.free.bidegrees]
                                for t in kc.terms],
        "regular_sequence": homology_zero,
    }
    human = [f"Koszul ranks: {kc.ranks()}",
             f"higher homology vanishes (regular sequence): {homology_zero}"]
    return CommandOutcome("koszul", cmd.text, result,
                          {"regular_sequence": homology_zero}, human,
                          failed_check=not homology_zero)


def _run_dualize_finite(cmd: Command, default_depth, _b) -> CommandOutcome:
    depth = cmd.options["depth"] if default_depth is None else default_depth
    rep = finite_shriek(cmd.args["map"], cmd.args["omega"], depth)
    return CommandOutcome(
        "dualize-finite", cmd.text, duality_report_json(rep),
        {"is_sheaf": rep.is_sheaf, "is_free_rank_one": rep.is_free_rank_one,
         "fiber_weights": list(rep.fiber_representation)},
        rep.summary_lines())


def _run_dualize_lci(cmd: Command, default_depth, _b) -> CommandOutcome:
    ring = cmd.args["ring"]
    omega = cmd.args["omega"]
    if omega is None:
        omega = canonical_module(ring)
    imax = cmd.options.get("depth")
    if imax is None and default_depth is not None:
        imax = default_depth
    rep = lci_dualizing(ring, cmd.args["seq"], omega, imax)
    failed = any("FAILED" in n for n in rep.notes)
    return CommandOutcome(
        "dualize-lci", cmd.text, duality_report_json(rep),
        {"twist": rep.twist_label(), "fiber_weights": list(rep.fiber_representation),
         "cross_check_ok": not failed},
        rep.summary_lines(), failed_check=failed)


def _run_check_gorenstein(cmd: Command, _d, _b) -> CommandOutcome:
    rep = cm_gorenstein_check(cmd.args["ring"], cmd.args["ideal"],
                              cmd.options["max"])
    return CommandOutcome(
        "check", cmd.text, cm_report_json(rep),
        {"cohen_macaulay": rep.cohen_macaulay, "gorenstein": rep.gorenstein,
         "inconclusive": rep.inconclusive},
        rep.summary_lines(), failed_check=rep.inconclusive)


def _run_check_pushforward(cmd: Command, _d, default_bound) -> CommandOutcome:
    bound = cmd.options["bound"] if default_bound is None else default_bound
    verdict, discrepancy = pushforward_check(
        cmd.args["map"], cmd.args["omega_b"], cmd.args["omega_a"], bound)
    human = [f"invariant part vs moduli dualizing module: {verdict}"]
    if discrepancy:
        human.append(discrepancy)
    return CommandOutcome(
        "check", cmd.text,
        {"verdict": verdict, "first_discrepancy": discrepancy},
        {"verdict": verdict}, human, failed_check=verdict != "equal")


def _run_hilbert(cmd: Command, _d, default_bound) -> CommandOutcome:
    zmax = cmd.options["max"] if default_bound is None else default_bound
    table = hilbert_function(cmd.args["M"], zmax)
    human = ["bigraded dimensions (zdeg, weight) -> dim:"]
    human += [f"  ({z}, {w}) -> {dim}" for (z, w), dim in sorted(table.items())]
    return CommandOutcome("hilbert", cmd.text, {"table": table_json(table)},
                          {}, human)


def _run_invariants(cmd: Command, _d, default_bound) -> CommandOutcome:
    bound = cmd.options["bound"] if default_bound is None else default_bound
    dims, elements = invariant_part(cmd.args["M"], bound)
    human = ["weight-0 dimensions by zdeg:"]
    human += [f"  {z} -> {d}" for z, d in sorted(dims.items())]
    human += [f"  low-degree elements: {', '.join(elements[:8])}"] if elements else []
    return CommandOutcome(
        "invariants", cmd.text,
        {"dims": [{"zdeg": z, "dim": d} for z, d in sorted(dims.items())],
         "elements": elements},
        {}, human)


def _run_compare(cmd: Command, _d, default_bound) -> CommandOutcome:
    bound = cmd.options["bound"] if default_bound is None else default_bound
    verdict = compare_modules(cmd.args["M"], cmd.args["N"], bound)
    return CommandOutcome(
        "compare", cmd.text, {"verdict": verdict}, {"verdict": verdict},
        [f"comparison verdict: {verdict}"],
        failed_check=verdict != "isomorphic-up-to-bound")


_HANDLERS = {
    ("hom", None): _run_hom,
    ("ext", None): _run_ext,
    ("koszul", None): _run_koszul,
    ("dualize-finite", None): _run_dualize_finite,
    ("dualize-lci", None): _run_dualize_lci,
    ("check", "gorenstein"): _run_check_gorenstein,
    ("check", "pushforward"): _run_check_pushforward,
    ("hilbert", None): _run_hilbert,
    ("invariants", None): _run_invariants,
    ("compare", None): _run_compare,
}
