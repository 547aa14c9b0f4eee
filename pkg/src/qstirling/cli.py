"""Command line interface: enumerate, stats, map, poly, gamma, verify, sweep.

Exit codes: 0 pass, 1 identity failure, 2 usage error, 3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from . import __version__
from .bijections import (BijectionError, Psi, Psi_inverse, phi, phi_inverse, psi1, psi1_inverse,
                         psi2, psi2_inverse)
from .coding import build_coding
from .core import (DEFAULT_MAX_M, GuardExceeded, MultisetSpec, RootedWord,
                   cyclic_stats, double_descents, dsd_literal, enumerate_quasi_stirling,
                   enumerate_rooted, enumerate_stirling, is_quasi_stirling, is_stirling, parse_word,
                   set_max_M, sibling_stats, word_stats)
from .jsonio import (coding_to_json, from_json, kind_of, partition_to_json, to_json)
from .partitions import (BarredPartition, OrderedBlockPartition, enumerate_barred,
                         enumerate_partitions, format_blocks, is_valid_barred, partition_stats)
from .polynomials import (cyclic_eulerian_xy, egf_power_side, eulerian_t, eulerian_xy,
                          gamma_extract, partial_gamma, qstirling_poly, qstirling_t,
                          rhs_multiset_eulerian, stirling_poly)
from .registry import DEFAULT_ORDER, REGISTRY, run_identity, sweep
from .trees import (RegularGraph, UnorderedVETree, VETree, class_size, edge_words,
                    enumerate_regular_graphs, enumerate_trees, forget_order, tree_stats,
                    validate_graph, validate_tree)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
DEFAULT_SWEEP_M = 5


class UsageError(Exception):
    pass


@dataclass
class Output:
    payload: Any
    rows: list = field(default_factory=list)
    text: str = ""
    code: int = EXIT_PASS


# -- helpers -----------------------------------------------------------------------


def _multiset(args) -> MultisetSpec:
    if not args.multiset:
        raise UsageError("--multiset is required (comma separated multiplicities, e.g. 2,2)")
    return MultisetSpec.parse(args.multiset)


def _read_input(args) -> tuple[Any, bytes]:
    src = args.input
    if src is None:
        raise UsageError("--input is required (a JSON file, or - for stdin)")
    data = sys.stdin.buffer.read() if src == "-" else open(src, "rb").read()
    try:
        return json.loads(data), data
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from exc


def blob_sha1(data: bytes) -> str:
    """Git's object id for a blob with these contents."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _compact(obj) -> str:
    return json.dumps(to_json(obj), separators=(",", ":"), sort_keys=True)


def _word_text(w) -> str:
    return "".join(str(v) if v < 10 else f"({v})" for v in w) or "ε"


# -- enumerate ---------------------------------------------------------------------


KINDS = ("words", "rooted", "stirling", "trees", "unordered", "graphs", "partitions", "barred")


def cmd_enumerate(args) -> Output:
    kind = args.kind
    limit = args.limit
    if kind == "stirling":
        if args.n is None:
            raise UsageError("--n is required for stirling")
        stream = enumerate_stirling(args.n)
        label = {"n": args.n}
    else:
        m = _multiset(args)
        label = {"multiset": list(m.multiplicities)}
        if kind == "words":
            stream = enumerate_quasi_stirling(m)
        elif kind == "rooted":
            stream = enumerate_rooted(m)
        elif kind == "trees":
            stream = enumerate_trees(m)
        elif kind == "unordered":
            stream = _unique(forget_order(t) for t in enumerate_trees(m))
        elif kind == "graphs":
            stream = enumerate_regular_graphs(m)
        elif kind == "partitions":
            stream = enumerate_partitions(m.n, m.k)
        else:
            if args.bars is None:
                raise UsageError("--bars is required for barred partitions")
            stream = enumerate_barred(m.n, m.k, args.bars)
    items = list(itertools.islice(stream, limit) if limit is not None else stream)
    rows, lines = [], []
    for x in items:
        if isinstance(x, tuple):
            js = {"word": list(x)}
            txt = _word_text(x)
        else:
            js = to_json(x)
            txt = format_blocks(x.blocks) if isinstance(x, OrderedBlockPartition) else str(x)
        rows.append({"value": txt, "json": json.dumps(js, separators=(",", ":"))})
        lines.append(txt)
    payload = {"kind": kind, **label, "count": len(items),
               "items": [json.loads(r["json"]) for r in rows]}
    return Output(payload, rows, "\n".join(lines + [f"# {len(items)} {kind}"]))


def _unique(stream):
    seen = set()
    for x in stream:
        if x not in seen:
            seen.add(x)
            yield x


# -- stats ---------------------------------------------------------------------------


def _word_stats(w, root=None) -> dict:
    s = word_stats(w)
    out = {"word": list(w), "des": s.des, "asc": s.asc, "plat": s.plat,
           "dd": double_descents(w), "quasi_stirling": is_quasi_stirling(w),
           "stirling": is_stirling(w)}
    if w:
        out["cdes"], out["casc"] = cyclic_stats(w)
    if out["quasi_stirling"]:
        ss = sibling_stats(w)
        out.update(sd=ss.sd, dsd=ss.dsd, dsd_literal=dsd_literal(w),
                   sibling_descents=[list(p) for p in ss.positions])
    if root is not None:
        out["root"] = root
    return out


def _tree_stats(t: VETree) -> dict:
    bad = validate_tree(t)
    if bad:
        raise UsageError(f"invalid tree: condition {bad[0].condition}: {bad[0].message}")
    s = tree_stats(t)
    return {"cdes": s.cdes, "casc": s.casc, "leaf_star": s.leaf_star,
            "class_size": class_size(t),
            "edge_words": {str(i): list(w) for i, w in sorted(edge_words(t).items())}}


def _partition_stats(p: OrderedBlockPartition) -> dict:
    s = partition_stats(p)
    return {"blocks": format_blocks(p.blocks), "des": s.des, "asc": s.asc, "emp": s.emp,
            "dd": s.dd}


def cmd_stats(args) -> Output:
    inputs = b""
    if args.word is not None:
        w = parse_word(args.word)
        out = _word_stats(w, args.root)
    else:
        d, inputs = _read_input(args)
        obj = from_json(d)
        if isinstance(obj, RootedWord):
            out = _word_stats(obj.word, obj.root)
        elif isinstance(obj, VETree):
            out = _tree_stats(obj)
        elif isinstance(obj, OrderedBlockPartition):
            out = _partition_stats(obj)
        elif isinstance(obj, BarredPartition):
            out = {"valid": is_valid_barred(obj), "bars": obj.bar_count}
        else:
            raise UsageError(f"no statistics for a {kind_of(d)}")
    args._inputs = inputs
    row = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in out.items()}
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    return Output(out, [row], text)


# -- map -------------------------------------------------------------------------------


MAPS = ("phi", "phi-inverse", "forget-order", "psi1", "psi1-inverse", "psi2", "psi2-inverse",
        "Psi", "Psi-inverse", "coding")


def _expect(obj, cls, name):
    if not isinstance(obj, cls):
        raise UsageError(f"{name} expects a {cls.__name__}, got {type(obj).__name__}")
    return obj


def cmd_map(args) -> Output:
    name = args.name
    if name == "coding":
        m = _multiset(args)
        rows = coding_to_json(build_coding(m, args.r))
        return Output({"multiset": list(m.multiplicities), "r": args.r, "rows": rows},
                      [{**r, "code": json.dumps(r["code"])} for r in rows],
                      "\n".join(f"{r['value']}_{r['copy']} -> {r['code']}" for r in rows))
    d, args._inputs = _read_input(args)
    if isinstance(d, dict) and "multiplicities" not in d and args.multiset:
        d = {**d, "multiplicities": list(_multiset(args).multiplicities)}
    obj = from_json(d)
    if name == "phi":
        t = _expect(obj, VETree, name)
        bad = validate_tree(t)
        if bad:
            raise UsageError(f"invalid tree: {bad[0].message}")
        res = phi(t)
    elif name == "phi-inverse":
        rw = _expect(obj, RootedWord, name)
        m = _multiset(args) if args.multiset else MultisetSpec.from_word(rw.word)
        res = phi_inverse(rw, m)
    elif name == "forget-order":
        res = forget_order(_expect(obj, VETree, name))
    elif name == "psi1":
        ut = obj if isinstance(obj, UnorderedVETree) else forget_order(_expect(obj, VETree, name))
        res = psi1(ut)
    elif name == "psi1-inverse":
        res = psi1_inverse(_expect(obj, RegularGraph, name))
    elif name == "psi2":
        g = _expect(obj, RegularGraph, name)
        bad = validate_graph(g)
        if bad:
            raise UsageError(f"invalid graph: {bad[0].message}")
        res = partition_to_json(psi2(g))
    elif name == "psi2-inverse":
        blocks = tuple(tuple(b) for b in d["blocks"])
        res = psi2_inverse(blocks, _multiset(args))
    elif name == "Psi":
        res = Psi(_expect(obj, VETree, name))
    else:
        res = Psi_inverse(_expect(obj, OrderedBlockPartition, name), _multiset(args))
    js = to_json(res)
    if isinstance(res, OrderedBlockPartition):
        text = format_blocks(res.blocks)
    elif isinstance(res, dict) and "blocks" in res:
        text = format_blocks(res["blocks"])
    else:
        text = str(res)
    return Output(js, [{"value": text, "json": _compact(js)}], text)


# -- poly ---------------------------------------------------------------------------------


POLYS = ("eulerian", "eulerian-xy", "cyclic-eulerian", "stirling", "qstirling", "qstirling-t",
         "multiset-eulerian", "egf-power")


def cmd_poly(args) -> Output:
    name = args.name
    if name in ("eulerian", "eulerian-xy", "cyclic-eulerian", "stirling"):
        if args.n is None:
            raise UsageError(f"--n is required for {name}")
        fn = {"eulerian": eulerian_t, "eulerian-xy": eulerian_xy,
              "cyclic-eulerian": cyclic_eulerian_xy, "stirling": stirling_poly}[name]
        p = fn(args.n)
    else:
        m = _multiset(args)
        fn = {"qstirling": qstirling_poly, "qstirling-t": qstirling_t,
              "multiset-eulerian": rhs_multiset_eulerian, "egf-power": egf_power_side}[name]
        p = fn(m)
    js = to_json(p)
    rows = [{"exp": " ".join(map(str, e)), "coef": str(c)} for e, c in p.sorted_terms()]
    return Output(js, rows, repr(p))


# -- gamma --------------------------------------------------------------------------------


def cmd_gamma(args) -> Output:
    if args.n is not None and not args.multiset:
        res = gamma_extract(eulerian_xy(args.n))
        payload = {"n": args.n, "degree": res.degree, "gammas": list(res.gammas),
                   "ok": res.ok, "positive": res.positive, "failure": res.failure}
        rows = [{"j": j, "gamma": g} for j, g in enumerate(res.gammas)]
        text = "\n".join(f"gamma_{j} = {g}" for j, g in enumerate(res.gammas))
        return Output(payload, rows, text, EXIT_PASS if res.positive else EXIT_FAIL)
    m = _multiset(args)
    table = partial_gamma(m)
    keys = sorted(set(table.by_slice) | set(table.by_words) | set(table.by_partitions))
    rows = [{"i": i, "j": j, "slice": table.by_slice.get((i, j), 0),
             "words": table.by_words.get((i, j), 0),
             "partitions": table.by_partitions.get((i, j), 0)} for i, j in keys]
    rows = [r for r in rows if r["slice"] or r["words"] or r["partitions"]]
    payload = {"multiset": list(m.multiplicities), "ok": table.ok,
               "nonnegative": table.nonnegative, "rows": rows,
               "witnesses": {f"{i},{j}": list(w) for (i, j), w in sorted(table.witnesses.items())},
               "mismatches": to_json(table.mismatches)}
    text = "\n".join(["i j  gamma (slice / words / partitions)"] +
                     [f"{r['i']} {r['j']}  {r['slice']} / {r['words']} / {r['partitions']}"
                      for r in rows] + [f"agree: {table.ok}, nonnegative: {table.nonnegative}"])
    code = EXIT_PASS if table.ok and table.nonnegative else EXIT_FAIL
    return Output(payload, rows, text, code)


# -- verify and sweep -----------------------------------------------------------------------


def cmd_verify(args) -> Output:
    ids = sorted(REGISTRY) if args.ids == ["all"] else args.ids
    for i in ids:
        if i not in REGISTRY:
            raise UsageError(f"unknown identity {i!r}; known: {', '.join(sorted(REGISTRY))}")
    params = {"multiset": list(_multiset(args).multiplicities) if args.multiset else None,
              "n": args.n, "order": args.order,
              "word": list(parse_word(args.word)) if args.word else None, "root": args.root}
    results = []
    for i in ids:
        try:
            results.append(run_identity(i, params, args.max_M).to_json())
        except ValueError as exc:
            if len(ids) == 1:
                raise UsageError(str(exc)) from exc
    if not results:
        raise UsageError("no identity accepted these parameters")
    statuses = {r["status"] for r in results}
    code = EXIT_FAIL if "fail" in statuses else EXIT_GUARD if "skipped" in statuses else EXIT_PASS
    rows = [{"id": r["id"], "status": r["status"], "params": _compact(r["params"]),
             "detail": _compact(r["detail"])} for r in results]
    text = "\n".join(f"{r['status']:7} {r['id']}  {_compact(r['params'])}" for r in results)
    payload = results[0] if len(results) == 1 else {"results": results}
    return Output(payload, rows, text, code)


def cmd_sweep(args) -> Output:
    bound = args.max_M if args.max_M is not None else DEFAULT_SWEEP_M
    report = sweep(bound, jobs=args.jobs, order=args.order, guard=DEFAULT_MAX_M)
    rows = [{"id": r["id"], "status": r["status"], "params": _compact(r["params"])}
            for r in report["results"]]
    text = "\n".join([f"{r['status']:7} {r['id']}  {r['params']}" for r in rows] +
                     [f"# {report['passed']} passed, {report['failed']} failed, "
                      f"{report['skipped']} skipped over {report['multisets']} multisets"])
    return Output(report, rows, text, EXIT_PASS if report["ok"] else EXIT_FAIL)


# -- driver -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--multiset", help="multiplicities, e.g. 2,2 for {1^2,2^2}")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series truncation order")
    common.add_argument("--max-M", dest="max_M", type=int, default=None,
                        help=f"size guard (default {DEFAULT_MAX_M}); for sweep, the largest M swept "
                             f"(default {DEFAULT_SWEEP_M})")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweep")
    common.add_argument("--log", help="append a JSON line describing this run")

    ap = argparse.ArgumentParser(prog="qstirling",
                                 description="Quasi-Stirling multipermutations: objects, bijections "
                                             "and identity checks.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list objects for a multiset")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, help="n for stirling permutations")
    p.add_argument("--bars", type=int, help="bar count for barred partitions")
    p.add_argument("--limit", type=int, help="stop after this many objects")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stats", parents=[common], help="statistics of a word, tree or partition")
    p.add_argument("--word", help="a word such as 31221 or 3,1,2,2,1")
    p.add_argument("--root", type=int, help="1-based root position for --word")
    p.add_argument("--input", help="JSON object (file path, or - for stdin)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("map", parents=[common], help="apply a bijection to a JSON object")
    p.add_argument("name", choices=MAPS)
    p.add_argument("--input", help="JSON object (file path, or - for stdin)")
    p.add_argument("--r", type=int, default=0, help="r for the coding table")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("poly", parents=[common], help="enumerator polynomials")
    p.add_argument("name", choices=POLYS)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("gamma", parents=[common], help="gamma tables")
    p.add_argument("--n", type=int, help="bivariate Eulerian gamma vector instead of a multiset table")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("verify", parents=[common], help="run identity checks")
    p.add_argument("ids", nargs="+", help=f"identity ids or 'all': {', '.join(sorted(REGISTRY))}")
    p.add_argument("--n", type=int)
    p.add_argument("--word", help="single word for phi-statistics")
    p.add_argument("--root", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="run every identity on every small multiset")
    p.set_defaults(func=cmd_sweep)
    return ap


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.payload, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return out.text + "\n"
    buf = io.StringIO()
    if out.rows:
        writer = csv.DictWriter(buf, fieldnames=list(out.rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(out.rows)
    return buf.getvalue()


def _log(args, argv, code: int, elapsed: float, rendered: str) -> None:
    params = {k: v for k, v in sorted(vars(args).items())
              if not k.startswith("_") and k not in ("func", "log", "out")}
    inputs = json.dumps(params, sort_keys=True).encode() + getattr(args, "_inputs", b"")
    entry = {"command": args.command, "argv": list(argv), "params": params, "exit_code": code,
             "elapsed_s": round(elapsed, 6), "input_sha1": blob_sha1(inputs),
             "output_sha1": blob_sha1(rendered.encode()), "version": __version__,
             "time": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
    with open(args.log, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry, sort_keys=True) + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if args.max_M is not None and args.command != "sweep":
        set_max_M(args.max_M)
    else:
        set_max_M(DEFAULT_MAX_M)
    start = time.perf_counter()
    try:
        out = args.func(args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        out = Output({"error": "guard", "message": str(exc)}, [], str(exc), EXIT_GUARD)
    except (UsageError, BijectionError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rendered = render(out, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    if out.code == EXIT_FAIL and (args.out or args.format != "json"):
        # failures always reach stdout as JSON so CI logs show the counterexample
        sys.stdout.write(json.dumps(out.payload, sort_keys=True) + "\n")
    if args.log:
        _log(args, argv, out.code, time.perf_counter() - start, rendered)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
