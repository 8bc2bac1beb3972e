"""Text formats: SA list files, checkpoints, reference ingestion, table export.

List file layout (UTF-8, LF, no BOM)::

    # sa-list 1
    # engine: backbone
    # config: {"bits":256,"max_log10":"2500"}
    # top-log10: 2500
    1	0	{}
    2	0.301029995664	{1}
    ...

Body rows are ``index TAB log10 n TAB SCN``.  The log10 column (12
significant digits) is a checksum for human auditing; the SCN string is the
source of truth.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .arith import log10_sig12, log_magnitude
from .primes import DEFAULT_BITS, prime_table
from .records import SaRecord
from .signature import MalformedScn, Signature, format_scn, parse_scn

FORMAT_NAME = "sa-list"
FORMAT_VERSION = 1
CHECKPOINT_NAME = "sa-checkpoint"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ChecksumMismatch(ParseError):
    """The stored log10 disagrees with the value recomputed from the SCN."""


class NonCanonicalSignature(ParseError):
    """Reference data whose exponents are not nonincreasing."""


@dataclass
class ListFile:
    records: list[SaRecord]
    engine: str = "unknown"
    config: dict = field(default_factory=dict)
    top_log10: str | None = None
    version: int = FORMAT_VERSION


def _config_json(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def emit_header(lf: ListFile) -> str:
    out = [f"# {FORMAT_NAME} {lf.version}", f"# engine: {lf.engine}", f"# config: {_config_json(lf.config)}"]
    if lf.top_log10 is not None:
        out.append(f"# top-log10: {lf.top_log10}")
    return "\n".join(out) + "\n"


def emit_rows(records: Iterable[SaRecord]) -> str:
    return "".join(f"{r.index}\t{log10_sig12(r.signature)}\t{format_scn(r.signature)}\n" for r in records)


def emit_list(lf: ListFile) -> str:
    return emit_header(lf) + emit_rows(lf.records)


def _parse_header(line: str, lineno: int, meta: dict) -> None:
    body = line[1:].strip()
    if lineno == 1:
        m = re.fullmatch(r"([a-z-]+) (\d+)", body)
        if not m or m.group(1) != FORMAT_NAME:
            raise ParseError(f"expected '# {FORMAT_NAME} <version>' header", lineno)
        meta["version"] = int(m.group(2))
        if meta["version"] != FORMAT_VERSION:
            raise ParseError(f"unsupported format version {meta['version']}", lineno)
        return
    key, sep, value = body.partition(":")
    if not sep:
        raise ParseError(f"malformed header line {line!r}", lineno)
    key, value = key.strip(), value.strip()
    if key == "engine":
        meta["engine"] = value
    elif key == "config":
        try:
            meta["config"] = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config is not valid JSON: {exc}", lineno) from None
    elif key == "top-log10":
        meta["top_log10"] = value
    else:
        meta.setdefault("extra", {})[key] = value


def _checksum(sig: Signature, stored: str, lineno: int, bits: int) -> None:
    try:
        want = float(stored)
    except ValueError:
        raise ParseError(f"log10 column is not a number: {stored!r}", lineno) from None
    got = float(log_magnitude(sig, bits).log10())
    if not math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-12):
        raise ChecksumMismatch(f"stored log10 {stored} but SCN gives {got:.12g}", lineno)


def parse_list(text: str, *, check: bool = True, bits: int = DEFAULT_BITS) -> ListFile:
    """Parse a list file.  Indices must run 1, 2, 3, ... without gaps."""
    if text.startswith("﻿"):
        raise ParseError("byte order mark not allowed", 1)
    meta: dict = {}
    records = []
    in_body = False
    for lineno, line in enumerate(text.split("\n"), 1):
        if line.endswith("\r"):
            raise ParseError("CRLF line ending", lineno)
        if not line:
            continue
        if line.startswith("#"):
            if in_body:
                raise ParseError("header line after body rows", lineno)
            _parse_header(line, lineno, meta)
            continue
        if "version" not in meta:
            raise ParseError(f"missing '# {FORMAT_NAME}' header", lineno)
        in_body = True
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        idx_s, log_s, scn_s = parts
        if not re.fullmatch(r"[1-9][0-9]*", idx_s):
            raise ParseError(f"bad index {idx_s!r}", lineno)
        idx = int(idx_s)
        if idx != len(records) + 1:
            raise ParseError(f"expected index {len(records) + 1}, found {idx}", lineno)
        try:
            sig = parse_scn(scn_s)
        except MalformedScn as exc:
            raise ParseError(f"non-canonical SCN {scn_s!r}: {exc}", lineno) from None
        if check:
            _checksum(sig, log_s, lineno, bits)
        records.append(SaRecord.make(idx, sig, bits))
    if "version" not in meta:
        raise ParseError(f"missing '# {FORMAT_NAME}' header", 1)
    return ListFile(
        records,
        meta.get("engine", "unknown"),
        meta.get("config", {}),
        meta.get("top_log10"),
        meta["version"],
    )


def write_list(path, lf: ListFile) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(emit_list(lf))


def read_list(path, *, check: bool = True, bits: int = DEFAULT_BITS) -> ListFile:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_list(f.read(), check=check, bits=bits)


# --- checkpoints ------------------------------------------------------------


def emit_checkpoint(cp, engine: str = "backbone", config: dict | None = None) -> str:
    """A list-file style header block holding generator state."""
    lines = [
        f"# {CHECKPOINT_NAME} {FORMAT_VERSION}",
        f"# engine: {engine}",
        f"# config: {_config_json(config or {})}",
        f"# backbone: {format_scn(cp.backbone)}",
        f"# record: {format_scn(cp.record)}",
        f"# radius: {cp.radius}",
        f"# emitted: {cp.emitted}",
    ]
    return "\n".join(lines) + "\n"


def parse_checkpoint(text: str):
    from .backbone import Checkpoint

    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line:
            continue
        if not line.startswith("# "):
            raise ParseError("checkpoint lines must start with '# '", lineno)
        body = line[2:]
        if lineno == 1:
            if body != f"{CHECKPOINT_NAME} {FORMAT_VERSION}":
                raise ParseError("not a checkpoint file", lineno)
            continue
        key, sep, value = body.partition(": ")
        if not sep:
            raise ParseError(f"malformed line {line!r}", lineno)
        fields[key] = (value, lineno)
    try:
        return Checkpoint(
            parse_scn(fields["backbone"][0]),
            parse_scn(fields["record"][0]),
            int(fields["radius"][0]),
            int(fields["emitted"][0]),
        )
    except KeyError as exc:
        raise ParseError(f"checkpoint is missing {exc.args[0]!r}") from None
    except (MalformedScn, ValueError) as exc:
        raise ParseError(str(exc)) from None


# --- reference lists ----------------------------------------------------------

_FACTOR_LINE = re.compile(r"^\s*([1-9][0-9]*)\s*:\s*(.+?)\s*$")
_FACTOR = re.compile(r"^([1-9][0-9]*)(?:\^([1-9][0-9]*))?$")


def parse_factored_line(line: str, lineno: int | None = None) -> tuple[int, Signature]:
    """``15: 2^3 * 3 * 5 * 7`` -> (15, signature).  ``1`` stands for n = 1."""
    m = _FACTOR_LINE.match(line)
    if not m:
        raise ParseError(f"expected 'index: p1^e1 * p2^e2 * ...', got {line!r}", lineno)
    idx = int(m.group(1))
    body = m.group(2)
    if body == "1":
        return idx, Signature()
    table = prime_table()
    exps = []
    for i, part in enumerate(body.split("*")):
        fm = _FACTOR.match(part.strip())
        if not fm:
            raise ParseError(f"bad factor {part.strip()!r}", lineno)
        p = int(fm.group(1))
        e = int(fm.group(2) or 1)
        table.ensure(i + 1)
        if p != table.primes[i]:
            raise NonCanonicalSignature(
                f"factor {i + 1} is {p}, expected consecutive primes from 2 ({table.primes[i]})", lineno
            )
        if exps and e > exps[-1]:
            raise NonCanonicalSignature(f"exponent of {p} exceeds that of the previous prime", lineno)
        exps.append(e)
    return idx, Signature(exps)


def emit_factored(records: Iterable[SaRecord]) -> str:
    return "".join(f"{r.index}: {r.signature}\n" for r in records)


def ingest_reference(source, hint: str = "auto", *, check: bool = True, bits: int = DEFAULT_BITS) -> list[SaRecord]:
    """Read a reference list given as a path or as text.

    A ``Path``, or a one-line string naming an existing file, is read from
    disk; any other string is parsed as the list itself.

    ``hint`` is "native" (list file), "factored" (``index: 2^e1 * 3^e2 ...``
    per line, blank lines and ``#`` comments ignored) or "auto", which picks
    native when the first line is a list-file header.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    if hint == "auto":
        hint = "native" if text.startswith(f"# {FORMAT_NAME} ") else "factored"
    if hint == "native":
        return parse_list(text, check=check, bits=bits).records
    if hint != "factored":
        raise ValueError(f"unknown format hint {hint!r}")
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        idx, sig = parse_factored_line(line, lineno)
        out.append(SaRecord.make(idx, sig, bits))
    return out


# --- table export -------------------------------------------------------------

CSV_HEADER = ["Index", "Type", "Group", "log10 n", "SCN Representation"]
_LATEX_TYPES = {"np": "$np$", "n/q": "$n/q$"}


def export_table(rows: Sequence, fmt: str = "csv") -> str:
    """Render counterexample rows (anything with index/type/group/log10/scn)."""
    rows = sorted(rows, key=lambda r: (r.index, r.type))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.index, r.type, r.group, r.log10, r.scn])
        return buf.getvalue()
    if fmt == "tsv":
        lines = ["index\ttype\tgroup\tlog10\tscn"]
        lines += [f"{r.index}\t{r.type}\t{r.group}\t{r.log10}\t{r.scn}" for r in rows]
        return "\n".join(lines) + "\n"
    if fmt == "latex":
        lines = [
            r"\begin{longtable}{r|c|r|r|l}\hline",
            r"\textbf{Index}&\textbf{Type}&\textbf{Group}&$\boldsymbol{\log_{10} n}$"
            r"&\textbf{SCN Representation}\\\hline\hline\endhead",
        ]
        for r in rows:
            scn = r.scn.replace("{", r"\{").replace("}", r"\}")
            lines.append(f"{r.index}&{_LATEX_TYPES.get(r.type, r.type)}&{r.group}&{r.log10}&{scn}\\\\")
        lines.append(r"\end{longtable}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def diff_lists(a: Sequence[SaRecord], b: Sequence[SaRecord]):
    """Mismatches over the common index range of two lists."""
    from .backbone import crosscheck

    return crosscheck(list(a), list(b))
