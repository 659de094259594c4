"""Command-line front end: deterministic JSON and text reports.

Exit codes: 0 when every executed check passes (a negative certificate is not
a failure), 1 when a mathematical identity check fails, 2 for usage or
environment errors.  Reports carry exact rationals as strings and an integer
millisecond timing field; two runs with the same seed differ at most in the
timing field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import __version__
from .cm_engine import (
    check_closed_form,
    check_cm0_suite,
    check_galois_invariance,
    check_induced_character,
    check_pair_reduction_suite,
)
from .certifier import certify, orbit_table
from .errors import BruteCapExceeded, CmredError, ParseError
from .galois_model import build_model
from .group_algebra import BRUTE_CAP
from .group_zoo import ZooSpec, build, parse_zoo_spec, zoo_list
from .permgroup import is_permutation

LARGE_SPECS = ("sp6f2:+", "sp6f2:-")


@dataclass
class RunConfig:
    command: str  # zoo-list | verify | orbits | certify
    spec: str | None = None
    eps_max: int | None = None
    brute_cap: int = BRUTE_CAP
    seed: int = 0
    fmt: str = "json"
    large: bool = False

    def __post_init__(self):
        if self.eps_max is not None and not 0 <= self.eps_max <= 64:
            raise ParseError(f"--eps-max must be in 0..64, got {self.eps_max}")


def parse_spec(text: str):
    """A zoo spec, or ('file', degree, group_gens, subgroup_gens)."""
    if text.startswith("file:"):
        path = text[len("file:"):]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read group file {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}")
        if not isinstance(data, dict):
            raise ParseError(f"{path}: top level must be an object")
        try:
            degree = int(data["degree"])
            group_gens = data["group_generators"]
            subgroup_gens = data["subgroup_generators"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(
                f"{path}: need keys degree, group_generators, subgroup_generators ({exc})")
        for label, gens in (("group_generators", group_gens),
                            ("subgroup_generators", subgroup_gens)):
            if not isinstance(gens, list):
                raise ParseError(f"{path}: {label} must be a list")
            for k, g in enumerate(gens):
                if not (isinstance(g, list)
                        and is_permutation([int(x) for x in g], degree)):
                    raise ParseError(
                        f"{path}: {label}[{k}] is not a permutation of degree {degree}")
        return ("file", degree,
                [tuple(int(x) for x in g) for g in group_gens],
                [tuple(int(x) for x in g) for g in subgroup_gens])
    try:
        return parse_zoo_spec(text)
    except CmredError as exc:
        raise ParseError(str(exc))


def _build_from_spec(parsed, config: RunConfig):
    if isinstance(parsed, ZooSpec):
        if str(parsed) in LARGE_SPECS and not config.large:
            raise ParseError(
                f"{parsed} is gated behind --large (about 1.5M elements)")
        G, H_gens = build(parsed)
        return build_model(G, H_gens)
    _, degree, group_gens, subgroup_gens = parsed
    from .permgroup import close_generators
    return build_model(close_generators(degree, group_gens), subgroup_gens)


def _check_or_skip(fn, name):
    try:
        return fn().to_dict()
    except BruteCapExceeded as exc:
        return {"name": name, "status": "skipped", "reason": f"cap: {exc}"}


def run(config: RunConfig):
    """Execute a command; returns (report dict, exit code)."""
    started = time.monotonic()
    report = {"version": __version__, "command": config.command}
    if config.command == "zoo-list":
        report["zoo"] = [{"spec": s, "description": d} for s, d in zoo_list()]
        report["timing"] = {"total_ms": int((time.monotonic() - started) * 1000)}
        return report, 0

    parsed = parse_spec(config.spec)
    report["spec"] = config.spec
    model = _build_from_spec(parsed, config)
    report["group"] = {"order": model.group.order, "n": model.n,
                       "h": model.h, "classes": model.classes.count}
    report["seed"] = config.seed

    if config.command == "verify":
        if config.eps_max is not None:
            identity_eps = config.eps_max
        elif model.gamma_order <= config.brute_cap:
            identity_eps = model.n
        else:
            identity_eps = 2  # keep the closed path affordable on large groups
        checks = [
            _check_or_skip(
                lambda: check_closed_form(model, eps_max=identity_eps,
                                          seed=config.seed,
                                          brute_cap=config.brute_cap),
                "closed-form"),
            _check_or_skip(lambda: check_induced_character(model),
                           "induced-character"),
            _check_or_skip(
                lambda: check_pair_reduction_suite(model, eps_max=identity_eps,
                                                   seed=config.seed),
                "pair-reduction"),
            _check_or_skip(
                lambda: check_cm0_suite(model, eps_max=identity_eps,
                                        seed=config.seed,
                                        brute_cap=config.brute_cap),
                "cm0-membership"),
            _check_or_skip(
                lambda: check_galois_invariance(model, pairs=50, seed=config.seed,
                                                eps_max=identity_eps),
                "galois-invariance"),
        ]
        report["checks"] = checks
        orbit_eps = min(model.n, config.eps_max if config.eps_max is not None else 2)
        report["orbits"] = orbit_table(model, orbit_eps).to_dict()
        report["certificate"] = certify(model).to_dict()
        code = 1 if any(c["status"] == "fail" for c in checks) else 0
    elif config.command == "orbits":
        orbit_eps = min(model.n, config.eps_max if config.eps_max is not None else 2)
        report["orbits"] = orbit_table(model, orbit_eps).to_dict()
        code = 0
    elif config.command == "certify":
        report["certificate"] = certify(model).to_dict()
        code = 0
    else:
        raise ParseError(f"unknown command {config.command!r}")
    report["timing"] = {"total_ms": int((time.monotonic() - started) * 1000)}
    return report, code


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def render_text(report: dict) -> str:
    lines = [f"cmred {report['version']} - {report['command']}"]
    if "zoo" in report:
        for entry in report["zoo"]:
            lines.append(f"  {entry['spec']:14s} {entry['description']}")
    if "group" in report:
        g = report["group"]
        lines.append(f"group {report.get('spec', '')}: order {g['order']}, "
                     f"n = {g['n']}, h = {g['h']}, {g['classes']} classes")
    for check in report.get("checks", ()):
        status = check["status"].upper()
        extra = ""
        if check.get("detail"):
            extra = " " + json.dumps(check["detail"], sort_keys=True)
        if check.get("witness"):
            extra += " witness=" + json.dumps(check["witness"], sort_keys=True)
        if check.get("reason"):
            extra += f" ({check['reason']})"
        lines.append(f"  [{status:7s}] {check['name']}{extra}")
    if "orbits" in report:
        for eps, entry in sorted(report["orbits"].items(), key=lambda kv: int(kv[0])):
            b0, full = entry["bit0"], entry["full"]
            lines.append(f"  orbits eps={eps}: bit0 {b0['count']} "
                         f"(sizes {b0['sizes']}), full {full['count']}")
    if "certificate" in report:
        cert = report["certificate"]
        lines.append(f"  certificate: 2-transitive={cert['two_transitive']} "
                     f"pair orbits={cert['pair_orbit_count']} "
                     f"criterion_met={cert['criterion_met']}")
        lines.append(f"  {cert['statement']}")
    if "timing" in report:
        lines.append(f"  ({report['timing']['total_ms']} ms)")
    return "\n".join(lines)


def _add_common(parser):
    parser.add_argument("--format", dest="fmt", choices=("json", "text"),
                        default="text")
    parser.add_argument("--large", action="store_true",
                        help="allow the gated large groups (sp6f2)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cmred",
        description="Exact verification of CM-type class-function identities "
                    "and 2-transitivity certificates for built-in groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    zoo_p = sub.add_parser("zoo", help="zoo utilities")
    zoo_sub = zoo_p.add_subparsers(dest="zoo_command", required=True)
    zoo_list_p = zoo_sub.add_parser("list", help="list built-in group specs")
    zoo_list_p.add_argument("--format", dest="fmt", choices=("json", "text"),
                            default="text")

    for name, help_text in (("verify", "run every identity check"),
                            ("orbits", "orbit table of CM types"),
                            ("certify", "double-transitivity certificate")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="zoo spec like sym:4, or file:<path>")
        _add_common(p)
        if name in ("verify", "orbits"):
            p.add_argument("--eps-max", dest="eps_max", type=int, default=None)
        if name == "verify":
            p.add_argument("--brute-cap", dest="brute_cap", type=int,
                           default=BRUTE_CAP)
            p.add_argument("--seed", dest="seed", type=int, default=0)

    args = parser.parse_args(argv)
    try:
        if args.command == "zoo":
            config = RunConfig(command="zoo-list", fmt=args.fmt)
        else:
            config = RunConfig(
                command=args.command, spec=args.spec,
                eps_max=getattr(args, "eps_max", None),
                brute_cap=getattr(args, "brute_cap", BRUTE_CAP),
                seed=getattr(args, "seed", 0),
                fmt=args.fmt, large=args.large)
        report, code = run(config)
    except CmredError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(render_json(report) if config.fmt == "json" else render_text(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
