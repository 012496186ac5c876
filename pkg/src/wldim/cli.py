"""Command-line frontend.

Every subcommand prints one JSON document (sorted keys) on stdout.  Exit
codes: 0 success, 1 domain error, 2 budget exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import config
from .answers import ans_via_interpolation
from .cfi import cfi
from .errors import BudgetExceeded, WldimError
from .graph import parse_graph
from .query import count_answers, minimize, parse_query
from .quantum import count_dominating_sets, eval_quantum, hsew, normalize_quantum, parse_quantum
from .width import extension_width, semantic_extension_width, treewidth
from .witness import WitnessCertificate, build_witness, verify_witness
from .wl import wl_equivalent, wl_refine

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise WldimError(f"cannot read {path}: {e.strerror}") from None


def _query(path):
    return parse_query(_read(path))


def _graph(path):
    return parse_graph(_read(path))


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


# ---------------------------------------------------------------------------
# subcommands


def cmd_width(a):
    q = _query(a.query)
    return {"sew": semantic_extension_width(q), "ew": extension_width(q), "tw": treewidth(q.H)[0]}


def cmd_minimize(a):
    q = _query(a.query)
    core = minimize(q)
    return {"query": core.to_dsl(), "vertices": core.H.n, "edges": core.H.m, "free": core.k}


def cmd_count(a):
    q = _query(a.query)
    return {"answers": count_answers(q, _graph(a.graph))}


def cmd_cfi(a):
    g = _graph(a.graph)
    odd = [int(x) for x in a.odd.split(",") if x.strip()] if a.odd else []
    c = cfi(g, odd)
    out = {
        "n": c.result.n,
        "m": c.result.m,
        "odd": sorted(c.odd_set),
        "labels": {str(v): c.result.label(v) for v in range(c.result.n)},
    }
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(c.result.to_text())
        out["out"] = a.out
    else:
        out["graph"] = c.result.to_text()
    return out


def cmd_wl(a):
    g1, g2 = _graph(a.g1), _graph(a.g2)
    eq = wl_equivalent(g1, g2, a.k)
    if a.k == 0:
        return {"equivalent": eq, "rounds": [0, 0], "histogramHash": [None, None]}
    c1, c2 = wl_refine(g1, a.k), wl_refine(g2, a.k)
    return {
        "equivalent": eq,
        "rounds": [c1.rounds, c2.rounds],
        "histogramHash": [c1.histogram_hash(), c2.histogram_hash()],
    }


def cmd_witness(a):
    cert = build_witness(_query(a.query), oracle_bound=a.oracle_bound)
    doc = cert.to_json()
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return doc


def cmd_verify(a):
    try:
        doc = json.loads(_read(a.cert))
        cert = WitnessCertificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise WldimError(f"malformed certificate: {e}") from None
    report = verify_witness(cert)
    return {"checks": report, "allPass": all(report.values())}


def cmd_domset(a):
    g = _graph(a.graph)
    return {"k": a.k, "dominatingSets": count_dominating_sets(a.k, g)}


def cmd_quantum_eval(a):
    Q = normalize_quantum(parse_quantum(_read(a.spec)))
    g = _graph(a.graph)
    return {
        "value": _num(eval_quantum(Q, g)),
        "terms": [{"coeff": _num(c), "query": q.to_dsl()} for c, q in Q.terms],
        "hsew": hsew(Q) if Q.terms else None,
    }


def cmd_interpolate(a):
    q, g = _query(a.query), _graph(a.graph)
    via = ans_via_interpolation(q, g, a.max_nhat)
    direct = count_answers(q, g)
    return {"answers": via, "direct": direct, "match": via == direct}


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=["json", "plain"], default=d("json"))
    p.add_argument("--threads", type=int, default=d(1), help="thread cap (kernels are single-threaded)")
    p.add_argument("--max-assignments", type=int, default=d(None))
    p.add_argument("--max-cfi-degree", type=int, default=d(None))
    p.add_argument("--max-tw-vertices", type=int, default=d(None))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wldim", description="WL-dimension of conjunctive queries")
    _global_options(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser(parents=[common], name="width", help="sew, ew and tw of a query")
    s.add_argument("query")
    s.set_defaults(func=cmd_width)

    s = sub.add_parser(parents=[common], name="minimize", help="counting-minimal core")
    s.add_argument("query")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser(parents=[common], name="count", help="number of answers")
    s.add_argument("--query", required=True)
    s.add_argument("graph")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser(parents=[common], name="cfi", help="CFI graph of a base graph")
    s.add_argument("graph")
    s.add_argument("--odd", default="", help="comma-separated odd vertices")
    s.add_argument("--out")
    s.set_defaults(func=cmd_cfi)

    s = sub.add_parser(parents=[common], name="wl", help="k-WL equivalence of two graphs")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("g1")
    s.add_argument("g2")
    s.set_defaults(func=cmd_wl)

    s = sub.add_parser(parents=[common], name="witness", help="build a lower-bound witness certificate")
    s.add_argument("--query", required=True)
    s.add_argument("--out")
    s.add_argument("--oracle-bound", type=int, default=7)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser(parents=[common], name="verify", help="re-check a witness certificate")
    s.add_argument("cert")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser(parents=[common], name="domset", help="count dominating sets of size k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("graph")
    s.set_defaults(func=cmd_domset)

    s = sub.add_parser(parents=[common], name="quantum-eval", help="evaluate a quantum query")
    s.add_argument("--spec", required=True)
    s.add_argument("graph")
    s.set_defaults(func=cmd_quantum_eval)

    s = sub.add_parser(parents=[common], name="interpolate", help="answers recovered from l-copy hom counts")
    s.add_argument("--query", required=True)
    s.add_argument("graph")
    s.add_argument("--max-nhat", type=int, default=27)
    s.set_defaults(func=cmd_interpolate)
    return p


def _plain(doc, prefix="") -> list:
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            lines.extend(_plain(val, f"{prefix}{key}."))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(val) if not isinstance(val, str) else val}")
    return lines


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError("wldim: a subcommand is required")
        overrides = {
            "max_assignments": a.max_assignments,
            "max_cfi_degree": a.max_cfi_degree,
            "max_treewidth_vertices": a.max_tw_vertices,
        }
        overrides = {k: v for k, v in overrides.items() if v is not None}
        try:
            config.Limits(**overrides)
        except ValueError as e:
            raise UsageError(f"wldim: {e}") from None
        if a.threads < 1:
            raise UsageError("wldim: --threads must be positive")
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=stderr)
        print(str(e), file=stderr)
        return EXIT_USAGE
    try:
        with config.limits(**overrides):
            doc = a.func(a)
        code = EXIT_OK
    except BudgetExceeded as e:
        doc, code = {"error": str(e), "kind": "budget"}, EXIT_BUDGET
    except WldimError as e:
        doc, code = {"error": str(e), "kind": type(e).__name__}, EXIT_DOMAIN
    except ValueError as e:
        doc, code = {"error": str(e), "kind": "ValueError"}, EXIT_DOMAIN
    if a.format == "plain":
        stdout.write("\n".join(_plain(doc)) + "\n")
    else:
        stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    return code


def main(argv=None):  # pragma: no cover - thin wrapper
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
