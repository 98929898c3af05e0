"""``symlie`` command line: build models, run the invariant construction, verify identities.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .cdgl import check_d_squared, derivation_component
from .core import Element, element_to_dict, format_element, format_rational
from .models import (
    CircuitModel,
    cdgl_to_dict,
    circuit_model,
    equivariance_defects,
    triangle_model,
)
from .solver import LoopInconsistency, NoPath, NotExact, build_symmetric_triangle, full_invariant_mc
from .verify import CheckResult, check, fault_suite, plain_triangle_suite, run_all, symmetric_triangle_checks

MAX_UNGUARDED_TRUNCATION = 6


class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.results: list[CheckResult] = []
        self.elements: dict[str, Element] = {}
        self.extra: dict = {}
        self.text: list[str] = []

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "config": self.config,
            "results": [r.to_dict() for r in self.results],
            "elements": {name: element_to_dict(e) for name, e in self.elements.items()},
        }
        data.update(self.extra)
        return json.dumps(data, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"# symlie {self.command} " + " ".join(f"{k}={v}" for k, v in self.config.items())]
        lines += self.text
        if self.elements:
            lines.append("")
            lines += [f"{name} = {format_element(e)}" for name, e in self.elements.items()]
        lines.append("")
        lines += [r.line() for r in self.results]
        n_fail = sum(not r.passed for r in self.results)
        lines.append(f"{len(self.results) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines) + "\n"


def _generator_lines(model_dict: dict) -> list[str]:
    return ["generators: " + ", ".join(f"{g['name']} ({g['degree']})" for g in model_dict["generators"])]


def _table_lines(name: str, table: dict) -> list[str]:
    return [f"{name}: " + ", ".join(f"{k} -> {v}" for k, v in table.items())]


def _d_squared_result(label: str, L) -> CheckResult:
    rep = check_d_squared(L)
    return check(f"{label} d^2 = 0", "d^2 = 0", [f"d^2 {n}: {format_element(r)}" for n, r in rep.residuals.items() if r])


def cmd_circuit(cfg: dict) -> Report:
    rep = Report("circuit", cfg)
    model = circuit_model(cfg["k"], cfg["truncation"])
    L = model.cdgl
    d1 = derivation_component(L.differential, 1)
    data = cdgl_to_dict(L, {"sigma": model.sigma, "tau": model.tau})
    rep.extra["model"] = data
    rep.text += _generator_lines(data)
    for g in model.ctx.generators:
        rep.text.append(f"d1({g.name}) = {format_element(d1.image(g.name))}")
    for g in model.ctx.generators:
        rep.text.append(f"d({g.name}) = {format_element(L.differential.image(g.name))}")
    rep.text += _table_lines("sigma", model.sigma.table()) + _table_lines("tau", model.tau.table())
    rep.results.append(_d_squared_result(f"circuit k={model.k}", L))
    for name, m in (("sigma", model.sigma), ("tau", model.tau)):
        defects = equivariance_defects(L, m)
        rep.results.append(
            check(f"{name} commutes with d", "dihedral action", [f"{g}: {format_element(r)}" for g, r in defects.items() if r])
        )
    if cfg.get("inject_fault"):
        rep.results += fault_suite(cfg["k"], cfg["truncation"])
    return rep


def _stage_diagnostics(stages) -> list[dict]:
    return [s.to_dict() for s in stages]


def cmd_invariant_mc(cfg: dict) -> Report:
    rep = Report("invariant-mc", cfg)
    model: CircuitModel = circuit_model(cfg["k"], cfg["truncation"])
    try:
        res = full_invariant_mc(model)
    except (NoPath, NotExact, LoopInconsistency, RuntimeError) as exc:
        rep.results.append(CheckResult("invariant MC construction", "invariant MC element", False, str(exc)))
        obstruction = getattr(exc, "obstruction", None)
        if obstruction is not None:
            rep.elements["obstruction"] = obstruction
        return rep
    rep.elements.update({"P": res.P, "w": res.w, "alpha": res.alpha, "Omega": res.omega})
    rep.results += [check(name, "invariant MC element", r) for name, r in res.checks.items()]
    rep.extra["diagnostics"] = _stage_diagnostics(res.stages)
    return rep


def cmd_triangle(cfg: dict) -> Report:
    rep = Report("triangle", cfg)
    plain = triangle_model(cfg["truncation"])
    L = plain.cdgl
    data = cdgl_to_dict(L)
    rep.extra["model"] = data
    rep.text += _generator_lines(data)
    rep.text.append(f"d({plain.face}) = {format_element(L.differential.image(plain.face))}")
    rep.results += plain_triangle_suite(cfg["truncation"])
    return rep


def cmd_symmetric_triangle(cfg: dict) -> Report:
    rep = Report("symmetric-triangle", cfg)
    try:
        sym = build_symmetric_triangle(cfg["truncation"])
    except (NoPath, NotExact, LoopInconsistency, RuntimeError) as exc:
        rep.results.append(CheckResult("symmetric triangle construction", "symmetric triangle", False, str(exc)))
        return rep
    m = sym.model
    data = cdgl_to_dict(m.cdgl, {"sigma": m.sigma, "tau": m.tau})
    rep.extra["model"] = data
    rep.extra["loop_relations"] = {"lambda": format_rational(sym.lam), "mu": format_rational(sym.mu)}
    rep.text += _generator_lines(data)
    rep.text.append(f"lambda = {format_rational(sym.lam)}, mu = {format_rational(sym.mu)}")
    rep.elements.update({"Omega": sym.invariant.omega, "beta": sym.beta, f"d({m.face})": m.cdgl.differential.image(m.face)})
    rep.results += [check(name, "invariant MC element", r) for name, r in sym.invariant.checks.items()]
    rep.results += symmetric_triangle_checks(sym)
    return rep


def cmd_verify(cfg: dict) -> Report:
    rep = Report("verify", cfg)
    rep.results = run_all(cfg["seed"], cfg["k"], cfg["truncation"], cfg["trials"], cfg.get("inject_fault", False))
    return rep


COMMANDS = {
    "circuit": cmd_circuit,
    "invariant-mc": cmd_invariant_mc,
    "triangle": cmd_triangle,
    "symmetric-triangle": cmd_symmetric_triangle,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=3, help="number of edges of the circuit (>= 3)")
    common.add_argument("--truncation", "-N", type=int, default=4, help="word-length truncation (default 4)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument(
        "--allow-large", action="store_true", help=f"permit truncation above {MAX_UNGUARDED_TRUNCATION}"
    )
    parser = argparse.ArgumentParser(prog="symlie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("circuit", parents=[common], help="circuit model of a k-gon").add_argument(
        "--inject-fault", action="store_true", help="also check a deliberately corrupted model"
    )
    sub.add_parser("invariant-mc", parents=[common], help="dihedral-invariant MC element")
    sub.add_parser("triangle", parents=[common], help="plain triangle model")
    sub.add_parser("symmetric-triangle", parents=[common], help="triangle model with the symmetric face")
    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--trials", type=int, default=10, help="random samples per randomized identity")
    v.add_argument("--inject-fault", action="store_true", help="append a check on a corrupted model (must fail)")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> dict:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.k < 3:
        parser.error("--k must be at least 3")
    if args.truncation < 1:
        parser.error("--truncation must be at least 1")
    if args.truncation > MAX_UNGUARDED_TRUNCATION and not args.allow_large:
        parser.error(f"--truncation above {MAX_UNGUARDED_TRUNCATION} needs --allow-large")
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be positive")
    cfg = {
        "command": args.command,
        "k": 3 if args.command in ("triangle", "symmetric-triangle") else args.k,
        "truncation": args.truncation,
        "format": args.format,
        "output": args.output,
        "seed": args.seed,
    }
    if hasattr(args, "trials"):
        cfg["trials"] = args.trials
    if getattr(args, "inject_fault", False):
        cfg["inject_fault"] = True
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_config(argv)
    shown = {k: v for k, v in cfg.items() if k not in ("command", "output", "format")}
    report = COMMANDS[cfg["command"]](dict(shown))
    text = report.to_json() if cfg["format"] == "json" else report.to_text()
    if cfg["output"]:
        with open(cfg["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
