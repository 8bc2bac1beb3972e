"""Command-line entry point.

Exit codes: 0 success, 1 computational failure (non-convergence, budget,
precision, mismatches), 2 usage error (bad flags, unreadable or malformed
input).  Data goes to stdout or files, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .arith import log10_sig12
from .backbone import (
    Checkpoint,
    GenerationReport,
    PrecisionExhausted,
    WindowConfig,
    crosscheck,
    generate_sa,
)
from .exhaustive import enumerate_records, sieve_oracle
from .formats import (
    ListFile,
    ParseError,
    emit_checkpoint,
    emit_list,
    emit_rows,
    export_table,
    ingest_reference,
    parse_checkpoint,
    read_list,
)
from .lattice import classify, conjectural_closure, connectivity, counterexample_report, summary
from .primes import DEFAULT_BITS
from .records import NonConvergence, ResourceBudgetExceeded, SaRecord
from .signature import MalformedScn, NonCanonical, Signature, factored, format_scn, parse_scn


class UsageError(Exception):
    pass


def log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _load(path, bits=DEFAULT_BITS) -> ListFile:
    try:
        return read_list(path, bits=bits)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# --- generate -----------------------------------------------------------------


def run_config(args) -> dict:
    """Everything that determines the output; paths and threads are excluded."""
    cfg = {"engine": args.engine, "bits": args.bits}
    if args.max_log10 is not None:
        cfg["max_log10"] = args.max_log10
    else:
        cfg["count"] = args.count
    if args.engine == "backbone":
        cfg["method"] = args.method
        if args.method == "window":
            cfg.update(radius=args.radius, escalation=args.escalation, cap=args.cap)
    else:
        if args.max_pops is not None:
            cfg["max_pops"] = args.max_pops
        if args.max_heap is not None:
            cfg["max_heap"] = args.max_heap
    return cfg


def _apply_replay(args) -> None:
    cfg = _load(args.replay).config
    if not cfg:
        raise UsageError(f"{args.replay} carries no config")
    args.engine = cfg.get("engine", args.engine)
    args.bits = cfg.get("bits", args.bits)
    args.max_log10 = cfg.get("max_log10")
    args.count = cfg.get("count")
    args.method = cfg.get("method", args.method)
    args.radius = cfg.get("radius", args.radius)
    args.escalation = cfg.get("escalation", args.escalation)
    args.cap = cfg.get("cap", args.cap)
    args.max_pops = cfg.get("max_pops")
    args.max_heap = cfg.get("max_heap")


def cmd_generate(args) -> int:
    if args.replay:
        _apply_replay(args)
    if (args.max_log10 is None) == (args.count is None):
        raise UsageError("give exactly one of --max-log10 or --count")
    if args.count is not None and args.count < 1:
        raise UsageError("--count must be at least 1")
    if args.max_log10 is not None:
        try:
            if float(args.max_log10) < 0:
                raise ValueError
        except ValueError:
            raise UsageError(f"--max-log10 must be a nonnegative number, got {args.max_log10!r}") from None
    if args.resume and args.engine != "backbone":
        raise UsageError("--resume is only supported by the backbone engine")
    if args.resume and args.output in (None, "-"):
        raise UsageError("--resume needs --output pointing at the partial list")
    cfg = run_config(args)
    t0 = time.time()
    records: list[SaRecord] = []

    if args.engine == "exhaustive":
        records = list(
            enumerate_records(
                args.max_log10, args.count, bits=args.bits, max_pops=args.max_pops, max_heap=args.max_heap
            )
        )
    else:
        wcfg = WindowConfig(args.radius, args.escalation, args.cap)
        resume = None
        if args.resume:
            resume = parse_checkpoint(open(args.resume, encoding="utf-8").read())
            if os.path.exists(args.output):
                records = _load(args.output, args.bits).records[: resume.emitted]
            if len(records) != resume.emitted:
                raise UsageError(f"{args.output} holds fewer than {resume.emitted} records")
        rep = GenerationReport()
        partial = args.checkpoint and args.output not in (None, "-")
        written = len(records)
        if partial:
            with open(args.output, "w", encoding="utf-8", newline="\n") as f:
                f.write(emit_list(ListFile(records, "backbone", cfg, args.max_log10)))

        def on_interval(cp: Checkpoint) -> None:
            nonlocal written
            if not args.checkpoint:
                return
            # the partial list is extended first so it always covers the checkpoint
            if partial:
                with open(args.output, "a", encoding="utf-8", newline="\n") as f:
                    f.write(emit_rows(records[written:]))
                written = len(records)
            tmp = args.checkpoint + ".tmp"
            with open(tmp, "w", encoding="utf-8", newline="\n") as f:
                f.write(emit_checkpoint(cp, "backbone", cfg))
            os.replace(tmp, args.checkpoint)

        for r in generate_sa(
            args.max_log10,
            args.count,
            wcfg,
            method=args.method,
            bits=args.bits,
            report=rep,
            resume=resume,
            on_interval=on_interval,
        ):
            records.append(r)
            if args.verbose and r.index % 1000 == 0:
                log(f"index {r.index}  log10 {log10_sig12(r.signature)}  {time.time() - t0:.1f}s")
        log(f"intervals {rep.intervals}, candidates {rep.candidates}, search nodes {rep.nodes}")
        if args.method == "window":
            log(f"largest window radius {rep.max_radius}")
    _write_text(args.output, emit_list(ListFile(records, args.engine, cfg, args.max_log10)))
    log(f"{len(records)} records in {time.time() - t0:.1f}s")
    return 0


# --- analysis commands ----------------------------------------------------------


def _nonempty(lf: ListFile, path) -> list[SaRecord]:
    if not lf.records:
        raise UsageError(f"{path} holds no records")
    return lf.records


def cmd_classify(args) -> int:
    lf = _load(args.list, args.bits)
    sa = _nonempty(lf, args.list)
    top = args.top_log10 if args.top_log10 is not None else lf.top_log10
    classes = classify(sa, top, threads=args.threads, bits=args.bits)
    rows = counterexample_report(sa, classes)
    _write_text(args.table, export_table(rows, args.table_format))
    if args.dump:
        lines = ["index\tkind\tsa_successors\tsa_predecessors\tundecided_successors"]
        for idx, c in classes:
            lines.append(
                f"{idx}\t{c.kind}\t{','.join(map(str, c.sa_successors))}"
                f"\t{','.join(map(str, c.sa_predecessors))}\t{','.join(map(str, c.undecided_successors))}"
            )
        _write_text(args.dump, "\n".join(lines) + "\n")
    counts = summary(classes)
    sources = counts["source"] + counts["source-and-sink"]
    sinks = counts["sink"] + counts["source-and-sink"]
    undecided = counts["indeterminate-up"] + counts["indeterminate-down"]
    log(f"records {len(sa)}, sources {sources}, sinks {sinks}, indeterminate {undecided}")
    undecided_idx = [i for i, c in classes if c.kind.startswith("indeterminate")]
    if undecided_idx:
        shown = ", ".join(map(str, undecided_idx[:20]))
        log(f"indeterminate records (products beyond the list): {shown}{' ...' if len(undecided_idx) > 20 else ''}")
    return 0


def cmd_closure(args) -> int:
    lf = _load(args.list, args.bits)
    sa = _nonempty(lf, args.list)
    res = conjectural_closure(sa)
    first = res.first_missing
    if first is None:
        print("first missing index: none")
    else:
        sig = sa[first - 1].signature
        print(f"first missing index: {first}")
        print(f"scn: {format_scn(sig)}")
        print(f"log10: {log10_sig12(sig)}")
    log(f"reachable {len(res.reachable)} of {len(sa)}, missing {len(res.missing)}")
    return 0


def cmd_connect(args) -> int:
    lf = _load(args.list, args.bits)
    sa = _nonempty(lf, args.list)
    top = args.top_log10 if args.top_log10 is not None else lf.top_log10
    rep = connectivity(sa, top, bits=args.bits)
    print(f"components: {len(rep.components)}")
    print(f"connected (decidable records): {'yes' if rep.decidable_connected() else 'no'}")
    for comp in rep.components[1:]:
        log(f"component from index {comp[0]} ({len(comp)} records)")
    return 0


def _parse_number(text: str) -> Signature:
    text = text.strip()
    if text.startswith("{"):
        return parse_scn(text)
    if text.isdigit():
        return Signature.from_int(int(text))
    from .formats import parse_factored_line

    return parse_factored_line(f"1: {text}")[1]


def cmd_scn(args) -> int:
    try:
        if args.action == "encode":
            sig = _parse_number(args.value)
            print(format_scn(sig))
        else:
            sig = parse_scn(args.value)
            print(factored(sig))
            print(f"log10 = {log10_sig12(sig)}")
    except (MalformedScn, NonCanonical, ParseError) as exc:
        raise UsageError(str(exc)) from None
    return 0


def cmd_verify(args) -> int:
    a = ingest_reference(args.list, args.format, bits=args.bits)
    b = ingest_reference(args.against, args.format, bits=args.bits)
    mism = crosscheck(a, b)
    for m in mism[: args.show]:
        log(f"index {m.index}: {m.field} differs: {m.left} vs {m.right}")
    common = len({r.index for r in a} & {r.index for r in b})
    print(f"{len(mism)} mismatches")
    log(f"compared {common} common indices")
    return 0 if not mism else 1


def cmd_sieve(args) -> int:
    if args.limit < 1:
        raise UsageError("--limit must be positive")
    recs = [SaRecord.make(i, Signature.from_int(n), args.bits) for i, (n, _) in enumerate(sieve_oracle(args.limit), 1)]
    cfg = {"engine": "sieve", "limit": args.limit, "bits": args.bits}
    _write_text(args.output, emit_list(ListFile(recs, "sieve", cfg, None)))
    return 0


def cmd_selfcheck(args) -> int:
    failures = 0
    sieve = [Signature.from_int(n) for n, _ in sieve_oracle(args.sieve_limit)]
    # one extra record shows nothing was missed between the last one and the limit
    ex = [r.signature for r in enumerate_records(count=len(sieve) + 1, bits=args.bits)]
    ok = ex[:-1] == sieve and ex[-1].to_int() > args.sieve_limit
    failures += not ok
    log(f"sieve vs exhaustive up to {args.sieve_limit}: {'ok' if ok else 'MISMATCH'} ({len(sieve)} records)")
    ex = list(enumerate_records(args.max_log10, bits=args.bits))
    bb = list(generate_sa(args.max_log10, bits=args.bits))
    mism = crosscheck(ex, bb)
    ok = not mism and len(ex) == len(bb)
    failures += not ok
    log(f"exhaustive vs backbone up to 10^{args.max_log10}: {'ok' if ok else 'MISMATCH'} ({len(ex)} records)")
    print("selfcheck passed" if not failures else f"selfcheck failed ({failures} suites)")
    return 0 if not failures else 1


# --- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superabundant", description="Generate and analyse superabundant numbers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--bits", type=int, default=DEFAULT_BITS, help="fixed-point precision (default 256)")

    g = sub.add_parser("generate", help="write a list file of SA numbers")
    common(g)
    g.add_argument("--engine", choices=("exhaustive", "backbone"), default="backbone")
    lim = g.add_mutually_exclusive_group()
    lim.add_argument("--max-log10", help="include every SA number n <= 10**X")
    lim.add_argument("--count", type=int, help="the first N SA numbers")
    g.add_argument("--method", choices=("bounded", "window"), default="bounded", help="backbone interval search")
    g.add_argument("--radius", type=int, default=4)
    g.add_argument("--escalation", type=int, default=2)
    g.add_argument("--cap", type=int, default=12)
    g.add_argument("--max-pops", type=int, help="exhaustive engine pop budget")
    g.add_argument("--max-heap", type=int, help="exhaustive engine heap budget")
    g.add_argument("--threads", type=int, default=1, help="accepted for symmetry; generation is sequential")
    g.add_argument("-o", "--output", help="list file (default stdout)")
    g.add_argument("--checkpoint", help="rewrite this checkpoint file after every interval")
    g.add_argument("--resume", help="continue from a checkpoint and the partial --output list")
    g.add_argument("--replay", help="take engine and limits from the config header of a list file")
    g.add_argument("-v", "--verbose", action="store_true")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", help="sources, sinks and the counterexample table")
    common(c)
    c.add_argument("--list", required=True)
    c.add_argument("--top-log10", help="range the list is complete to (default from its header)")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--table", help="table output (default stdout)")
    c.add_argument("--table-format", choices=("csv", "latex", "tsv"), default="csv")
    c.add_argument("--dump", help="per-record class dump (TSV)")
    c.set_defaults(func=cmd_classify)

    cl = sub.add_parser("closure", help="first record not reachable from 1 by prime products")
    common(cl)
    cl.add_argument("--list", required=True)
    cl.set_defaults(func=cmd_closure)

    cn = sub.add_parser("connect", help="connected components of the SA lattice")
    common(cn)
    cn.add_argument("--list", required=True)
    cn.add_argument("--top-log10")
    cn.set_defaults(func=cmd_connect)

    s = sub.add_parser("scn", help="convert between SCN and factored forms")
    s.add_argument("action", choices=("encode", "decode"))
    s.add_argument("value", help="decode: an SCN string; encode: an integer or '2^3 * 3 * 5 * 7'")
    s.set_defaults(func=cmd_scn)

    v = sub.add_parser("verify", help="diff two lists over their common indices")
    common(v)
    v.add_argument("--list", required=True)
    v.add_argument("--against", required=True)
    v.add_argument("--format", choices=("auto", "native", "factored"), default="auto")
    v.add_argument("--show", type=int, default=20, help="mismatches to print")
    v.set_defaults(func=cmd_verify)

    sv = sub.add_parser("sieve", help="SA numbers up to N by a divisor-sum sieve")
    common(sv)
    sv.add_argument("--limit", type=int, required=True)
    sv.add_argument("-o", "--output")
    sv.set_defaults(func=cmd_sieve)

    sc = sub.add_parser("selfcheck", help="oracle and cross-engine agreement")
    common(sc)
    sc.add_argument("--sieve-limit", type=int, default=10**6)
    sc.add_argument("--max-log10", default="25")
    sc.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        log(f"error: {exc}")
        return 2
    except ParseError as exc:
        log(f"error: {exc}")
        return 2
    except (NonConvergence, ResourceBudgetExceeded, PrecisionExhausted) as exc:
        log(f"failed: {type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
