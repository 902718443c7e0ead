"""``epc-check``: explore a model and check ATLE formulas against it.

Exit status is 0 when every verdict was computed (true or false), 1 when
exploration or checking hit a limit or internal error, and 2 on parse,
validation or file errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import formulas as F
from .checker import Checker
from .epistemic import agent_partition, common_classes
from .errors import EPCError, EPCSyntaxError, ValidationError
from .parser import parse_formula, parse_model, read_formulas
from .semantics import ExplorationLimits, dump_graph, explore

SCHEMA = "epc-check/1"


@dataclass
class RunConfig:
    model_path: str
    formulas: List[str] = field(default_factory=list)
    init: Optional[str] = None
    limits: ExplorationLimits = ExplorationLimits()
    max_strategies: Optional[int] = None
    output_format: str = "text"
    dump_graph: bool = False
    dump_epistemic: Optional[str] = None
    jobs: int = 1


class _InputError(Exception):
    """Bad input; message already carries the location prefix."""


def _located(where, exc):
    if isinstance(exc, (EPCSyntaxError, ValidationError)) and getattr(exc, "line", None) is not None:
        detail = str(exc).split(": ", 1)[1] if str(exc).startswith(f"{exc.line}:") else str(exc)
        return f"{where}:{exc.line}:{exc.col}: {detail}"
    return f"{where}: {exc}"


def _formula_sources(entries) -> List[Tuple[str, str]]:
    """Expand ``-f`` arguments into ``(location, text)`` pairs.

    An argument naming an existing file is read as an ``.atle`` file.
    """
    out = []
    for k, entry in enumerate(entries, 1):
        if os.path.isfile(entry):
            with open(entry, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
            for lineno, raw in enumerate(lines, 1):
                for text in read_formulas(raw):
                    out.append((f"{entry}:{lineno}", text))
        elif entry.endswith(".atle"):
            raise _InputError(f"{entry}: formula file not found")
        else:
            out.append((f"<formula {k}>", entry))
    return out


def _witness_record(strat):
    if strat is None:
        return None
    return {
        "coalition": sorted(strat.coalition),
        "domain": [s for s, _ in strat.choice],
        "choice": {s: str(label) for s, label in strat.choice},
    }


def _epistemic_dump(model, space, agents_arg):
    coalition = [a.strip() for a in agents_arg.split(",") if a.strip()]
    for a in coalition:
        if a not in model.agents:
            raise ValidationError("UnknownAgent", a)
    if not coalition:
        raise ValidationError("EmptyCoalition", "--dump-epistemic")

    def show(cls):
        return "{" + ", ".join(f"{i}:{space.configs[i].state}" for i in sorted(cls)) + "}"

    lines = []
    for a in coalition:
        parts = sorted(agent_partition(model.h_map, a, space), key=min)
        lines.append(f"K {a}: " + " ".join(show(c) for c in parts))
    classes = sorted(set(common_classes(model.h_map, coalition, space)), key=min)
    lines.append(f"C {','.join(coalition)}: " + " ".join(show(c) for c in classes))
    return lines


def run_query(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        try:
            with open(cfg.model_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _InputError(f"{cfg.model_path}: cannot read model file ({exc.strerror})")
        try:
            model = parse_model(text)
        except (EPCSyntaxError, ValidationError) as exc:
            raise _InputError(_located(cfg.model_path, exc))

        if cfg.init:
            state, _, term = cfg.init.partition(":")
            if state not in model.states:
                raise _InputError(f"--init: unknown state {state!r}")
            changes = {"init_state": state}
            if term:
                if not model.explicit or term not in model.explicit_terms:
                    raise _InputError(f"--init: unknown term name {term!r}")
                changes["init_term"] = term
            model = dataclasses.replace(model, **changes)

        sources = _formula_sources(cfg.formulas)
        parsed = []
        for where, text in sources:
            try:
                parsed.append((text, parse_formula(text, model)))
            except (EPCSyntaxError, ValidationError) as exc:
                raise _InputError(_located(where, exc))
        if not parsed and not (cfg.dump_graph or cfg.dump_epistemic):
            raise _InputError("no formulas given (use -f) and no dump requested")

        space = explore(model, cfg.limits)
        epi = _epistemic_dump(model, space, cfg.dump_epistemic) if cfg.dump_epistemic else None
        checker = Checker(model, space, max_strategies=cfg.max_strategies, jobs=cfg.jobs)
        records = []
        for text, phi in parsed:
            v = checker.verdict(phi)
            records.append({
                "formula": text,
                "parsed": F.pretty(phi),
                "verdict": v.value,
                "witness": _witness_record(v.witness),
                "stats": v.stats.as_dict(),
            })
    except _InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except EPCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 1

    if cfg.output_format == "json":
        doc = {"schema": SCHEMA, "model": cfg.model_path,
               "configurations": len(space), "transitions": len(space.edges),
               "results": records}
        if cfg.dump_graph:
            doc["graph"] = dump_graph(space)
        if epi is not None:
            doc["epistemic"] = epi
        json.dump(doc, out, indent=2)
        out.write("\n")
        return 0

    if cfg.dump_graph:
        for line in dump_graph(space):
            print(line, file=out)
    if epi is not None:
        for line in epi:
            print(line, file=out)
    for rec in records:
        print(f"{rec['formula']}: {'true' if rec['verdict'] else 'false'}", file=out)
        w = rec["witness"]
        if w is not None:
            choice = ", ".join(f"{s} -> {a}" for s, a in w["choice"].items())
            print(f"  witness: U={{{', '.join(w['domain'])}}} choice: {choice or '(none)'}",
                  file=out)
        st = rec["stats"]
        print(f"  stats: configs={st['configs']} strategies={st['strategies_examined']}"
              f" scc_runs={st['scc_runs']}", file=out)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="epc-check",
        description="Check ATLE formulas against an epistemic process calculus model.")
    p.add_argument("model", help="model file (.epc)")
    p.add_argument("-f", "--formulas", action="append", default=[], metavar="FORMULA|FILE",
                   help="formula text, or an .atle file with one formula per line "
                        "(repeatable)")
    p.add_argument("--init", metavar="STATE[:TERM]",
                   help="start from another state (and, in explicit mode, term name)")
    p.add_argument("--max-configs", type=int, default=ExplorationLimits.max_configs)
    p.add_argument("--max-unfold", type=int, default=ExplorationLimits.max_const_unfold_depth,
                   help="bound on unguarded constant unfolding")
    p.add_argument("--max-strategies", type=int, default=None,
                   help="abort when one coalition operator needs more strategies")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--dump-graph", action="store_true",
                   help="print the configuration graph as N/E lines")
    p.add_argument("--dump-epistemic", metavar="AGENTS",
                   help="print indistinguishability classes for a comma-separated group")
    p.add_argument("--jobs", type=int, default=1, help="threads for strategy evaluation")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        limits = ExplorationLimits(args.max_configs, args.max_unfold)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = RunConfig(
        model_path=args.model, formulas=args.formulas, init=args.init, limits=limits,
        max_strategies=args.max_strategies, output_format=args.format,
        dump_graph=args.dump_graph, dump_epistemic=args.dump_epistemic, jobs=args.jobs,
    )
    return run_query(cfg)


if __name__ == "__main__":
    sys.exit(main())
