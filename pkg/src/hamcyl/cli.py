"""Batch commands: count, digraph, series, analyze, crosscheck.

Exit codes: 0 success, 2 crosscheck mismatch, 3 resource guard, 4 bad config.
Failures print one JSON object ``{"error", "message", "exit_code"}`` to stderr.
Exact integers are always written as decimal strings.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import struct
import sys
import tempfile
from array import array
from pathlib import Path
from typing import Sequence

from . import __version__
from .brute_oracle import DEFAULT_MAX_VERTICES, GuardError, oracle_counts
from .columns import EXT, INT, ColumnDigraph, parse, render
from .ext_coding import build_ext_digraph
from .grid_core import build_cylinder
from .int_coding import build_int_digraph
from .seq_analysis import InsufficientTerms, modular_order, report, terms_for_order
from .transfer_engine import ORACLE, SeriesPrefix, phi_profile

EXIT_OK, EXIT_MISMATCH, EXIT_GUARD, EXIT_CONFIG = 0, 2, 3, 4
DEFAULT_MAX_DIGRAPH_VERTICES = 20000
_MAGIC = b"HAMCYLDG1\n"
_SOURCES = ("columns.py", "ext_coding.py", "int_coding.py")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means mismatch here
        raise ConfigError(message)


# ---------------------------------------------------------------- disk cache

def code_version() -> str:
    h = hashlib.sha256(__version__.encode())
    here = Path(__file__).parent
    for name in _SOURCES:
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


def cache_dir() -> Path:
    env = os.environ.get("HAMCYL_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "hamcyl"


def _cache_path(m: int, coding: str) -> Path:
    return cache_dir() / f"{coding}_m{m}_{code_version()}.dg"


def dump_digraph(d: ColumnDigraph) -> bytes:
    """JSON header (labels, boundary) followed by the arc lists as uint32."""
    header = json.dumps({
        "coding": d.coding, "m": d.m, "version": code_version(),
        "vertices": [render(v) for v in d.vertices],
        "first": [render(f) for f in d.first],
        "boundary": [list(t) for t in d.boundary],
    }).encode()
    body = array("I", [len(s) for s in d.succ])
    for s in d.succ:
        body.extend(s)
    return _MAGIC + struct.pack("<Q", len(header)) + header + body.tobytes()


def load_digraph_bytes(raw: bytes) -> ColumnDigraph:
    if not raw.startswith(_MAGIC):
        raise ValueError("not a digraph cache file")
    pos = len(_MAGIC)
    (hlen,) = struct.unpack_from("<Q", raw, pos)
    pos += 8
    head = json.loads(raw[pos:pos + hlen])
    body = array("I")
    body.frombytes(raw[pos + hlen:])
    nv = len(head["vertices"])
    degs, k, succ = body[:nv], nv, []
    for deg in degs:
        succ.append(tuple(body[k:k + deg]))
        k += deg
    return ColumnDigraph(head["coding"], head["m"], [parse(v) for v in head["vertices"]], succ,
                         [parse(f) for f in head["first"]], [tuple(t) for t in head["boundary"]])


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def get_digraph(m: int, coding: str, max_vertices: int, use_cache: bool = True) -> ColumnDigraph:
    path = _cache_path(m, coding)
    if use_cache and path.exists():
        d = load_digraph_bytes(path.read_bytes())
        if len(d.vertices) > max_vertices:
            raise GuardError(f"{coding} digraph for m={m} has {len(d.vertices)} vertices, above {max_vertices}")
        return d
    build = build_ext_digraph if coding == EXT else build_int_digraph
    d = build(m, max_vertices=max_vertices)
    if use_cache:
        try:
            _atomic_write(path, dump_digraph(d))
        except OSError:
            pass  # a read-only cache location only costs a rebuild
    return d


# ---------------------------------------------------------------- commands

def _check_m(m: int) -> None:
    if m < 1:
        raise ConfigError("--m must be at least 1")


def _oracle_guard(m: int, n: int, limit: int) -> None:
    if (m + 1) * n > limit:
        raise GuardError(f"oracle on {m}x{n} needs {(m + 1) * n} vertices, above {limit}")


def _methods(method: str) -> list[str]:
    return [EXT, INT, ORACLE] if method == "all" else [method]


def _h_coding(args, m: int, n: int, coding: str) -> int:
    d = get_digraph(m, coding, args.max_digraph_vertices, not args.no_cache)
    return n * phi_profile(d, n - 2, args.threads)[n - 2]


def cmd_count(args) -> dict:
    _check_m(args.m)
    if args.n < 2:
        raise ConfigError("--n must be at least 2")
    methods = _methods(args.method)
    if ORACLE in methods:
        _oracle_guard(args.m, args.n, args.max_oracle_vertices)
    results = {}
    for meth in methods:
        if meth == ORACLE:
            oc = oracle_counts(build_cylinder(args.m, args.n), args.max_oracle_vertices)
            results[meth] = {"h_c": str(oc.h_c), "h_nc": str(oc.h_nc), "h": str(oc.total)}
        else:
            results[meth] = {"h_c": str(_h_coding(args, args.m, args.n, meth))}
    values = {r["h_c"] for r in results.values()}
    out = {"command": "count", "m": args.m, "n": args.n, "results": results, "agree": len(values) == 1}
    if args.format == "text":
        lines = []
        for meth, r in results.items():
            extra = f"  h_nc={r['h_nc']}  h={r['h']}" if "h_nc" in r else ""
            lines.append(f"h_c({args.m},{args.n}) = {r['h_c']}  [{meth}]{extra}")
        out["_text"] = "\n".join(lines)
    if len(values) > 1:
        out["_exit"] = EXIT_MISMATCH
    return out


def cmd_digraph(args) -> dict:
    _check_m(args.m)
    d = get_digraph(args.m, args.coding, args.max_digraph_vertices, not args.no_cache)
    summ = d.summary()
    if args.coding == EXT:
        line = (f"{summ['vertices']} vertices, {summ['arcs']} arcs, "
                f"{summ['first_columns']} first-columns, {summ['lfs_triples']} triples")
    else:
        line = f"{summ['vertices']} vertices, {summ['arcs']} arcs, {summ['fl_pairs']} fl-pairs"
    out = {"command": "digraph", **summ, "summary": line}
    if args.format == "dot":
        out["_text"] = d.to_dot()
    elif args.format == "json":
        out["_body"] = d.to_json()
    else:
        out["_text"] = line
    out["_summary_line"] = line
    return out


def _series(args, m: int, n_max: int, method: str) -> SeriesPrefix:
    if method == ORACLE:
        _oracle_guard(m, n_max, args.max_oracle_vertices)
        vals = [(n, oracle_counts(build_cylinder(m, n), args.max_oracle_vertices).h_c)
                for n in range(2, n_max + 1)]
        return SeriesPrefix(m, method, vals)
    d = get_digraph(m, method, args.max_digraph_vertices, not args.no_cache)
    prof = phi_profile(d, n_max - 2, args.threads)
    return SeriesPrefix(m, method, [(n, n * prof[n - 2]) for n in range(2, n_max + 1)])


def cmd_series(args) -> dict:
    _check_m(args.m)
    if args.n_max < 2:
        raise ConfigError("--n-max must be at least 2")
    if args.method == "all":
        raise ConfigError("series takes a single method; use crosscheck to compare")
    sp = _series(args, args.m, args.n_max, args.method)
    out = {"command": "series", "m": args.m, "method": args.method,
           "values": [{"n": n, "h_c": str(h)} for n, h in sp.values]}
    if args.format == "csv":
        out["_text"] = sp.to_csv().rstrip("\n")
    elif args.format == "text":
        out["_text"] = ", ".join(str(h) for h in sp.coefficients())
    return out


def cmd_analyze(args) -> dict:
    _check_m(args.m)
    if args.method not in (EXT, INT):
        raise ConfigError("analyze needs --method ext or int")
    d = get_digraph(args.m, args.method, args.max_digraph_vertices, not args.no_cache)
    if args.terms:
        seq = phi_profile(d, args.terms - 1, args.threads)
        rep = report(args.m, seq, args.method, args.digits)
    else:
        # the modular order of a generous prefix sizes the exact fit
        terms = 60
        while True:
            seq = phi_profile(d, terms - 1, args.threads)
            est = modular_order(seq)
            if 2 * est + 10 < terms or terms >= args.max_terms:
                terms = min(args.max_terms, max(terms, terms_for_order(est)))
                seq = phi_profile(d, terms - 1, args.threads)
                break
            terms = min(args.max_terms, 2 * terms)
        rep = report(args.m, seq, args.method, args.digits)
    out = {"command": "analyze", **rep}
    if args.format == "text":
        out["_text"] = "\n".join([
            f"m = {rep['m']}  recurrence order = {rep['recurrence_order']}",
            f"denominator degrees: Phi {rep['denominator_degree_phi']}, H {rep['denominator_degree_h']}",
            f"theta = {rep['theta']}",
            f"a = {rep['amplitude']}  (sequence limit {rep['amplitude_sequence_limit']}, gap {rep['amplitude_gap']})",
        ])
    return out


def cmd_crosscheck(args) -> dict:
    if args.m_max < 1 or args.n_max < 2:
        raise ConfigError("--m-max must be at least 1 and --n-max at least 2")
    m_min = args.m_min
    _oracle_guard(args.m_max, args.n_max, args.max_oracle_vertices)
    rows, mismatches = [], []
    for m in range(m_min, args.m_max + 1):
        per = {meth: _series(args, m, args.n_max, meth).values for meth in (EXT, INT, ORACLE)}
        for k, n in enumerate(range(2, args.n_max + 1)):
            vals = {meth: per[meth][k][1] for meth in per}
            row = {"m": m, "n": n, **{meth: str(v) for meth, v in vals.items()}}
            rows.append(row)
            if len(set(vals.values())) > 1:
                mismatches.append(row)
        if m == 2:
            nc = [oracle_counts(build_cylinder(2, n), args.max_oracle_vertices).h_nc
                  for n in range(2, args.n_max + 1)]
            for n, v in zip(range(2, args.n_max + 1), nc):
                if v != 2 ** n - 2:
                    mismatches.append({"m": 2, "n": n, "h_nc": str(v), "expected": str(2 ** n - 2)})
    status = "all agree" if not mismatches else f"{len(mismatches)} mismatches"
    out = {"command": "crosscheck", "status": status, "rows": rows, "mismatches": mismatches}
    if args.format == "text":
        lines = [f"m={r['m']} n={r['n']} ext={r['ext']} int={r['int']} oracle={r['oracle']}" for r in rows]
        out["_text"] = "\n".join(lines + [json.dumps(x) for x in mismatches] + [status])
    if mismatches:
        out["_exit"] = EXIT_MISMATCH
    return out


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamcyl", description="Contractible Hamiltonian cycles on thick grid cylinders.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats, default="text"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--max-oracle-vertices", type=int, default=DEFAULT_MAX_VERTICES)
        sp.add_argument("--max-digraph-vertices", type=int, default=DEFAULT_MAX_DIGRAPH_VERTICES)
        sp.add_argument("--no-cache", action="store_true", help="neither read nor write the digraph cache")

    sp = sub.add_parser("count", help="h_c(m, n) by one or all methods")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=[EXT, INT, ORACLE, "all"], default=INT)
    common(sp, ["text", "json"])

    sp = sub.add_parser("digraph", help="build a column digraph and print its sizes")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--coding", choices=[EXT, INT], default=INT)
    common(sp, ["text", "json", "dot"])

    sp = sub.add_parser("series", help="h_c(m, n) for n = 2..n_max")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--method", choices=[EXT, INT, ORACLE, "all"], default=INT)
    common(sp, ["text", "json", "csv"])

    sp = sub.add_parser("analyze", help="recurrence, generating function, theta and amplitude")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--method", choices=[EXT, INT], default=INT)
    sp.add_argument("--terms", type=int, help="phi terms to use (default: sized automatically)")
    sp.add_argument("--max-terms", type=int, default=1200)
    sp.add_argument("--digits", type=int, default=30)
    common(sp, ["text", "json"])

    sp = sub.add_parser("crosscheck", help="ext vs int vs oracle on a grid of (m, n)")
    sp.add_argument("--m-min", type=int, default=1)
    sp.add_argument("--m-max", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    common(sp, ["text", "json"])
    return p


_COMMANDS = {"count": cmd_count, "digraph": cmd_digraph, "series": cmd_series,
             "analyze": cmd_analyze, "crosscheck": cmd_crosscheck}


def _fail(kind: str, message: str, code: int, extra: dict | None = None) -> int:
    err = {"error": kind, "message": message, "exit_code": code}
    if extra:
        err.update(extra)
    print(json.dumps(err), file=sys.stderr)
    return code


def _emit(out: dict, args) -> int:
    code = out.pop("_exit", EXIT_OK)
    summary = out.pop("_summary_line", None)
    text, body = out.pop("_text", None), out.pop("_body", None)
    if args.format == "json":
        payload = json.dumps(body if body is not None else out, indent=2)
    else:
        payload = text
    if args.output:
        _atomic_write(Path(args.output), (payload + "\n").encode())
        if summary:
            print(summary)
    else:
        print(payload)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        out = _COMMANDS[args.command](args)
    except ConfigError as e:
        return _fail("bad_config", str(e), EXIT_CONFIG)
    except GuardError as e:
        return _fail("resource_guard", str(e), EXIT_GUARD)
    except InsufficientTerms as e:
        return _fail("insufficient_terms", str(e), EXIT_GUARD,
                     {"terms_needed": e.needed})
    return _emit(out, args)


if __name__ == "__main__":
    sys.exit(main())
