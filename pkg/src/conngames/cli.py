"""Command-line surface: load domain/instance files, dispatch to solvers with
automatic tree detection, and emit deterministic text/JSON/CSV reports.

Exit codes: 0 ok, 2 input or usage error, 3 resource cap exceeded,
4 degenerate domain. Reports never mix Monte Carlo estimates with exact
values without per-value method tags, and contain nothing run-dependent
(no timings), so identical inputs and seeds reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import powerindex, reductions, stability, trees
from .domain import classify, domain_from_dict, domain_to_dict, validate
from .errors import CapExceededError, DegenerateDomainError, NotTreeError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_DEGENERATE = 4

ENV_EXACT_CAP = "CONNGAMES_EXACT_CAP"
ENV_LP_CAP = "CONNGAMES_LP_CAP"


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def _load_domain(path: str):
    data = _load_json(path)
    domain = domain_from_dict(data)
    report = validate(domain)
    if not report.ok:
        raise ValueError(f"{path} failed validation: " + "; ".join(report.violations))
    return domain


def _load_imputation(path: str) -> list:
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("imputation")
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a payoff list or {{\"imputation\": [...]}}")
    return data


def _resolve_cap(value: int | None, env_name: str, default: int) -> int:
    if value is not None:
        return value
    env = os.environ.get(env_name)
    return int(env) if env else default


def _rational(value) -> str | None:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(Fraction(value))
    return None


def _domain_summary(domain, classification) -> dict:
    return {
        "agents": domain.n_agents,
        "vertices": domain.vertex_count,
        "edges": len(domain.edges),
        "degenerate_all_win": classification.degenerate_all_win,
        "degenerate_all_lose": classification.degenerate_all_lose,
        "is_tree": classification.is_tree,
    }


def _emit_json(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _summary_lines(summary: dict) -> list[str]:
    flags = []
    if summary["degenerate_all_win"]:
        flags.append("degenerate: all coalitions win")
    if summary["degenerate_all_lose"]:
        flags.append("degenerate: all coalitions lose")
    if summary["is_tree"]:
        flags.append("tree")
    suffix = f" [{', '.join(flags)}]" if flags else ""
    return [f"domain: {summary['vertices']} vertices, {summary['edges']} edges, "
            f"{summary['agents']} agents{suffix}"]


def _value_cell(value) -> str:
    rational = _rational(value)
    if rational is None:
        return repr(float(value))
    return f"{rational} ({float(value)!r})"


# ---------------------------------------------------------------- indices

def _index_payload(domain, vector: powerindex.IndexVector) -> dict:
    values = []
    for agent, value in enumerate(vector.values):
        values.append({
            "agent": agent,
            "vertex": domain.vertex_of(agent),
            "value_rational": _rational(value),
            "value_float": float(value),
        })
    ranking = sorted(range(domain.n_agents),
                     key=lambda i: (-float(vector.values[i]), i))
    return {
        "index_kind": vector.kind,
        "method": vector.method,
        "samples": vector.samples,
        "seed": vector.seed,
        "values": values,
        "ranking": ranking,
    }


def _render_indices_text(summary, payloads) -> None:
    for line in _summary_lines(summary):
        print(line)
    for payload in payloads:
        meta = payload["method"]
        if payload["samples"] is not None:
            meta += f", samples={payload['samples']}, seed={payload['seed']}"
        print(f"{payload['index_kind']} ({meta}):")
        by_agent = {row["agent"]: row for row in payload["values"]}
        for rank, agent in enumerate(payload["ranking"], start=1):
            row = by_agent[agent]
            rational = row["value_rational"]
            shown = (f"{rational} ({row['value_float']!r})" if rational is not None
                     else repr(row["value_float"]))
            print(f"  #{rank} agent {agent} (vertex {row['vertex']}): {shown}")


def _render_indices_csv(payloads) -> None:
    print("agent,vertex,index_kind,value_rational,value_float,method")
    for payload in payloads:
        by_agent = {row["agent"]: row for row in payload["values"]}
        for agent in payload["ranking"]:
            row = by_agent[agent]
            rational = row["value_rational"] or ""
            print(f"{agent},{row['vertex']},{payload['index_kind']},"
                  f"{rational},{row['value_float']!r},{payload['method']}")


def cmd_indices(args) -> int:
    try:
        domain = _load_domain(args.domain)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    classification = classify(domain)
    cap = _resolve_cap(args.exact_cap, ENV_EXACT_CAP, powerindex.DEFAULT_ENUMERATION_CAP)
    kinds = ["banzhaf", "shapley"] if args.index == "both" else [args.index]

    method = args.method
    if method == "auto":
        try:
            trees.essential_vertices(domain)
            method = "tree"
        except (NotTreeError, DegenerateDomainError):
            method = "exact" if domain.n_agents <= cap else "mc"

    vectors = []
    try:
        for kind in kinds:
            if method == "tree":
                vectors.append(trees.tree_banzhaf(domain) if kind == "banzhaf"
                               else trees.tree_shapley(domain))
            elif method == "exact":
                vectors.append(powerindex.banzhaf_exact(domain, cap=cap) if kind == "banzhaf"
                               else powerindex.shapley_exact(domain, cap=cap))
            else:
                params = powerindex.ApproxParams(args.epsilon, args.delta, args.seed)
                vectors.append(powerindex.banzhaf_mc_all(domain, params) if kind == "banzhaf"
                               else powerindex.shapley_mc_all(domain, params))
    except CapExceededError as exc:
        return _fail(str(exc), EXIT_CAP)
    except (NotTreeError, DegenerateDomainError) as exc:
        return _fail(f"tree method not applicable: {exc}", EXIT_INPUT)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)

    summary = _domain_summary(domain, classification)
    payloads = [_index_payload(domain, vector) for vector in vectors]
    if args.format == "json":
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "indices",
                    "domain": summary, "results": payloads})
    elif args.format == "csv":
        _render_indices_csv(payloads)
    else:
        _render_indices_text(summary, payloads)
    return EXIT_OK


# ---------------------------------------------------------------- core

def cmd_core(args) -> int:
    try:
        domain = _load_domain(args.domain)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    classification = classify(domain)
    if classification.degenerate:
        kind = "all coalitions win" if classification.degenerate_all_win \
            else "all coalitions lose"
        return _fail(f"degenerate domain ({kind}); core queries refused", EXIT_DEGENERATE)

    core = stability.veto_players(domain)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "core",
        "domain": _domain_summary(domain, classification),
        "veto_agents": list(core.veto_agents),
        "core_empty": core.is_empty,
    }
    if args.imputation:
        try:
            payoffs = _load_imputation(args.imputation)
            report["in_core"] = stability.is_in_core(domain, payoffs)
        except ValueError as exc:
            return _fail(str(exc), EXIT_INPUT)

    if args.format == "json":
        _emit_json(report)
    else:
        for line in _summary_lines(report["domain"]):
            print(line)
        agents = ", ".join(str(a) for a in core.veto_agents) or "(none)"
        print(f"veto agents: {agents}")
        print(f"core empty: {'yes' if core.is_empty else 'no'}")
        if "in_core" in report:
            print(f"in core: {'yes' if report['in_core'] else 'no'}")
    return EXIT_OK


# ---------------------------------------------------------------- ecm

def cmd_ecm(args) -> int:
    if args.epsilon < 0:
        return _fail("epsilon must be nonnegative", EXIT_INPUT)
    try:
        domain = _load_domain(args.domain)
        payoffs = _load_imputation(args.imputation)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    classification = classify(domain)
    cap = _resolve_cap(args.exact_cap, ENV_EXACT_CAP, powerindex.DEFAULT_ENUMERATION_CAP)

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "ecm",
        "domain": _domain_summary(domain, classification),
        "epsilon": args.epsilon,
    }
    try:
        essential = trees.essential_vertices(domain)
    except (NotTreeError, DegenerateDomainError):
        essential = None
    try:
        if essential is not None:
            verdict = trees.tree_ecm(domain, payoffs, args.epsilon)
            imputation = stability.Imputation.of(payoffs)
            essential_payment = sum(
                (imputation[i] for i in essential.members), Fraction(0))
            report["method"] = "tree-essential-sum"
            report["essential_agents"] = list(essential.members)
            report["essential_payment"] = float(essential_payment)
            report["threshold"] = 1.0 - args.epsilon
        else:
            if domain.n_agents > cap:
                return _fail(
                    f"non-tree domain with {domain.n_agents} agents exceeds the "
                    f"enumeration cap of {cap}", EXIT_CAP)
            excess = stability.max_excess(domain, payoffs, cap=cap, epsilon=args.epsilon)
            verdict = bool(excess.epsilon_verdict)
            report["method"] = "exact-enumeration"
            report["max_excess"] = float(excess.max_excess)
            report["max_excess_rational"] = _rational(excess.max_excess)
            report["witness"] = sorted(excess.witness.members())
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    report["in_epsilon_core"] = verdict

    if args.format == "json":
        _emit_json(report)
    else:
        for line in _summary_lines(report["domain"]):
            print(line)
        print(f"epsilon: {args.epsilon!r}")
        print(f"method: {report['method']}")
        if report["method"] == "tree-essential-sum":
            print(f"essential payment: {report['essential_payment']!r} "
                  f"(threshold 1 - eps = {report['threshold']!r})")
        else:
            print(f"max excess: {_value_cell(Fraction(report['max_excess_rational']))}")
            witness = ", ".join(str(a) for a in report["witness"]) or "(empty)"
            print(f"witness coalition: {witness}")
        print(f"in epsilon-core: {'yes' if verdict else 'no'}")
    return EXIT_OK


# ---------------------------------------------------------------- leastcore

def cmd_leastcore(args) -> int:
    try:
        domain = _load_domain(args.domain)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    classification = classify(domain)
    if classification.degenerate:
        kind = "all coalitions win" if classification.degenerate_all_win \
            else "all coalitions lose"
        return _fail(f"degenerate domain ({kind}); least-core queries refused",
                     EXIT_DEGENERATE)
    lp_cap = _resolve_cap(args.lp_cap, ENV_LP_CAP, stability.DEFAULT_LP_CAP)

    try:
        tree = trees.tree_core(domain)
        epsilon: Fraction | float = Fraction(0)
        imputation = tree.canonical_imputation
        method = powerindex.TREE_CLOSED_FORM
    except (NotTreeError, DegenerateDomainError):
        try:
            result = stability.least_core_value(domain, lp_cap=lp_cap)
        except CapExceededError as exc:
            return _fail(str(exc), EXIT_CAP)
        epsilon, imputation, method = result.epsilon, result.imputation, result.method

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "leastcore",
        "domain": _domain_summary(domain, classification),
        "method": method,
        "epsilon_min": float(epsilon),
        "epsilon_min_rational": _rational(epsilon),
        "imputation": [
            {"agent": i, "value_rational": _rational(v), "value_float": float(v)}
            for i, v in enumerate(imputation)
        ],
    }
    if args.format == "json":
        _emit_json(report)
    else:
        for line in _summary_lines(report["domain"]):
            print(line)
        print(f"method: {method}")
        print(f"least-core epsilon: {_value_cell(epsilon)}")
        for row in report["imputation"]:
            rational = row["value_rational"]
            shown = (f"{rational} ({row['value_float']!r})" if rational is not None
                     else repr(row["value_float"]))
            print(f"  agent {row['agent']}: {shown}")
    return EXIT_OK


# ---------------------------------------------------------------- generate

def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def cmd_generate(args) -> int:
    try:
        data = _load_json(args.instance)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    out = Path(args.out)

    if args.kind == "setcover":
        try:
            instance = reductions.setcover_from_dict(data)
        except ValueError as exc:
            return _fail(str(exc), EXIT_INPUT)
        uncovered = instance.uncovered_items()
        if uncovered:
            print(f"warning: items {list(uncovered)} are in no set; "
                  f"no cover exists (count is 0)", file=sys.stderr)
        domain, target = reductions.setcover_to_cg(instance)
        payload = domain_to_dict(domain)
        payload["meta"] = {"construction": "setcover", "target_agent": target}
        _write_json(out, payload)
        print(f"wrote domain ({domain.vertex_count} vertices, {domain.n_agents} agents, "
              f"target agent {target}) to {out}")
        return EXIT_OK

    try:
        instance = reductions.vertexcover_from_dict(data)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        domain, imputation, epsilon = reductions.vertexcover_to_ecm(instance)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    payload = domain_to_dict(domain)
    payload["meta"] = {"construction": "vertexcover", "threshold": instance.threshold}
    _write_json(out, payload)
    sidecar = out.with_name(out.stem + ".imputation.json")
    _write_json(sidecar, {
        "imputation": [str(v) for v in imputation],
        "imputation_float": [float(v) for v in imputation],
        "epsilon": str(epsilon),
        "epsilon_float": float(epsilon),
    })
    print(f"wrote domain ({domain.vertex_count} vertices, {domain.n_agents} agents) "
          f"to {out}")
    print(f"wrote equal imputation and epsilon {epsilon} to {sidecar}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conngames",
        description="Analyze connectivity games: power indices, core, "
                    "epsilon-core, least core.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indices", help="per-agent Banzhaf / Shapley indices")
    p.add_argument("domain", help="domain JSON file")
    p.add_argument("--index", choices=["banzhaf", "shapley", "both"], default="both")
    p.add_argument("--method", choices=["auto", "exact", "tree", "mc"], default="auto")
    p.add_argument("--epsilon", type=float, default=0.05, help="MC accuracy target")
    p.add_argument("--delta", type=float, default=0.05, help="MC failure probability")
    p.add_argument("--seed", type=int, default=0, help="MC random seed")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--exact-cap", type=int, default=None,
                   help=f"agents allowed for exact enumeration "
                        f"(default {powerindex.DEFAULT_ENUMERATION_CAP}, "
                        f"env {ENV_EXACT_CAP})")
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("core", help="veto agents and core membership")
    p.add_argument("domain")
    p.add_argument("--imputation", help="payoff JSON file to test for core membership")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("ecm", help="epsilon-core membership of an imputation")
    p.add_argument("domain")
    p.add_argument("imputation", help="payoff JSON file")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--exact-cap", type=int, default=None,
                   help=f"agents allowed for exact enumeration on non-trees "
                        f"(default {powerindex.DEFAULT_ENUMERATION_CAP}, "
                        f"env {ENV_EXACT_CAP})")
    p.set_defaults(func=cmd_ecm)

    p = sub.add_parser("leastcore", help="least-core value and an optimal imputation")
    p.add_argument("domain")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--lp-cap", type=int, default=None,
                   help=f"agents allowed for the least-core LP "
                        f"(default {stability.DEFAULT_LP_CAP}, env {ENV_LP_CAP})")
    p.set_defaults(func=cmd_leastcore)

    p = sub.add_parser("generate", help="build a domain from a covering instance")
    p.add_argument("kind", choices=["setcover", "vertexcover"])
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--out", required=True, help="output domain JSON path")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
