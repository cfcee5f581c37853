"""Command-line front end: count tables, verification suites and the brute-force oracle.

    maprec table --family torus1 --lengths 2..14 --qmax 8 --format md
    maprec check --suite remark-l2 --qmax 8
    maprec oracle --genus 0 --lengths 2,2 --quads 2 --class fully-simple

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .exactnum import frac_to_str
from .extract import (
    CountTable,
    cylinder_fully_simple,
    cylinder_mixed,
    cylinder_ordinary,
    cylinder_simple,
    disk_coeffs,
    fully_simple_coeffs,
    fully_simple_disk_coeffs,
    ordinary_coeffs,
    symbolic_curves,
)
from .maps_oracle import BOUNDARY_CLASSES, CapExceeded, EnumSpec, dump_witness, enumerate_maps, iter_maps
from .suites import SUITES, run_suite
from .tr_engine import tr_amplitude

__all__ = ["RunConfig", "FAMILIES", "main", "compute_row", "render", "parse_tables", "parse_lengths"]


class UsageError(ValueError):
    pass


# family -> (genus, number of boundaries, row label, default rows)
_PAIRS_ODD = [(a, 1) for a in (1, 3, 5, 7, 9)] + [(a, 2) for a in (2, 4, 6, 8)]
_ORD_CYL = _PAIRS_ODD + [(a, 3) for a in (3, 5, 7, 9)] + [(a, 4) for a in (4, 6, 8)]
_MIX_CYL = _PAIRS_ODD + [(a, 3) for a in (1, 3, 5, 7, 9)] + [(a, 4) for a in (2, 4, 6, 8)]
_SIM_CYL = [(1, b) for b in (1, 3, 5, 7, 9)] + [(2, b) for b in (2, 4, 6, 8)] + \
    [(3, b) for b in (3, 5, 7, 9)] + [(4, b) for b in (4, 6, 8)]
_PANTS = list(itertools.combinations_with_replacement((2, 4, 6, 8), 3))

FAMILIES: Dict[str, Tuple[int, int, str, List[Tuple[int, ...]]]] = {
    "disk": (0, 1, "l", [(l,) for l in (2, 4, 6, 8)]),
    "fs-disk": (0, 1, "k", [(k,) for k in (2, 4, 6, 8)]),
    "cylinder": (0, 2, "(l1,l2)", _ORD_CYL),
    "mixed-cylinder": (0, 2, "(k1,l1)", _MIX_CYL),
    "simple-cylinder": (0, 2, "(k1,k2)", _SIM_CYL),
    "fs-cylinder": (0, 2, "(k1,k2)", _SIM_CYL),
    "torus1": (1, 1, "l", [(l,) for l in range(2, 15, 2)]),
    "fs-torus1": (1, 1, "k", [(k,) for k in range(2, 15, 2)]),
    "pants": (0, 3, "(l1,l2,l3)", _PANTS),
    "fs-pants": (0, 3, "(k1,k2,k3)", _PANTS),
}

FORMATS = ("md", "json", "csv")


@dataclass
class RunConfig:
    """Validated arguments of one invocation; ``lengths`` holds one tuple per table row."""

    command: str
    family: Optional[str] = None
    genus: Optional[int] = None
    lengths: List[Tuple[int, ...]] = field(default_factory=list)
    q_max: int = 8
    order: Optional[int] = None
    format: str = "md"
    parallelism: int = 1
    cache_dir: Optional[Path] = None
    suite: Optional[str] = None
    h_max: Optional[int] = None
    gn_max: Optional[int] = None
    quads: int = 0
    boundary_class: str = "ordinary"
    cap: int = 20
    witnesses: bool = False


# ---------------------------------------------------------------------------
# Lengths syntax
# ---------------------------------------------------------------------------


def _int_list(text: str) -> List[int]:
    """'2,4,6' or '2..14' (step 2, keeping the parity of the start) or a mix."""
    out: List[int] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise UsageError(f"empty length in {text!r}")
        m = re.fullmatch(r"(\d+)\.\.(\d+)", tok)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise UsageError(f"empty range {tok!r}")
            out.extend(range(lo, hi + 1, 2))
        elif tok.isdigit():
            out.append(int(tok))
        else:
            raise UsageError(f"bad length {tok!r}")
    return out


def parse_lengths(text: str, n_boundaries: int) -> List[Tuple[int, ...]]:
    """Rows of boundary lengths for a table family with ``n_boundaries`` boundaries.

    One boundary: '2,4,6' or '2..14'.  Several: '(1,1),(3,1)' or '1,1;3,1'.
    """
    text = text.strip()
    if n_boundaries == 1:
        return [(l,) for l in _int_list(text)]
    groups = re.findall(r"\(([^()]*)\)", text) if "(" in text else text.split(";")
    rows = []
    for grp in groups:
        vals = _int_list(grp)
        if len(vals) != n_boundaries:
            raise UsageError(f"expected {n_boundaries} lengths per row, got {grp!r}")
        rows.append(tuple(vals))
    if not rows:
        raise UsageError("no lengths given")
    return rows


# ---------------------------------------------------------------------------
# Table cells
# ---------------------------------------------------------------------------


def compute_row(family: str, lengths: Tuple[int, ...], q_max: int) -> CountTable:
    genus = FAMILIES[family][0]
    ordc, exc = symbolic_curves()
    if family == "disk":
        t = disk_coeffs(lengths[0], q_max)
    elif family == "fs-disk":
        t = fully_simple_disk_coeffs(lengths[0], q_max)
    elif family == "cylinder":
        t = cylinder_ordinary(*lengths, q_max)
    elif family == "mixed-cylinder":
        t = cylinder_mixed(*lengths, q_max)
    elif family == "simple-cylinder":
        t = cylinder_simple(*lengths, q_max)
    elif family == "fs-cylinder":
        t = cylinder_fully_simple(*lengths, q_max)
    elif family in ("torus1", "pants"):
        t = ordinary_coeffs(tr_amplitude(ordc, genus, len(lengths)), lengths, q_max, ordc)
    elif family in ("fs-torus1", "fs-pants"):
        t = fully_simple_coeffs(tr_amplitude(exc, genus, len(lengths)), lengths, q_max, exc)
    else:
        raise UsageError(f"unknown family {family!r}")
    return CountTable(family, genus, tuple(lengths), dict(t.coefficients), q_max)


_CURVE_PARAMS = {
    "curve": "quadrangulation",
    "x": "c (z + 1/z)",
    "y": "1/(c z) - t c^3/z^3",
    "t": "(c^2 - 1)/(3 c^4)",
    "version": __version__,
}


def _curve_hash() -> str:
    return hashlib.sha256(json.dumps(_CURVE_PARAMS, sort_keys=True).encode()).hexdigest()[:16]


def default_cache_dir() -> Path:
    env = os.environ.get("MAPREC_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "maprec"


def _cache_path(cache_dir: Path, family: str, lengths: Tuple[int, ...]) -> Path:
    genus = FAMILIES[family][0]
    tag = "-".join(str(l) for l in lengths)
    return cache_dir / f"{family}_g{genus}_{tag}_{_curve_hash()}.json"


def cached_row(family: str, lengths: Tuple[int, ...], q_max: int, cache_dir: Optional[Path]) -> CountTable:
    path = _cache_path(cache_dir, family, lengths) if cache_dir else None
    if path is not None and path.exists():
        try:
            hit = CountTable.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError):
            hit = None
        if hit is not None and hit.truncation >= q_max:
            return CountTable(family, hit.genus, hit.lengths,
                              {q: v for q, v in hit.coefficients.items() if q <= q_max}, q_max)
    table = compute_row(family, lengths, q_max)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(table.to_json()))
        tmp.replace(path)
    return table


def _row_job(args: Tuple[str, Tuple[int, ...], int, Optional[str]]) -> CountTable:
    family, lengths, q_max, cache = args
    return cached_row(family, lengths, q_max, Path(cache) if cache else None)


def compute_tables(cfg: RunConfig) -> List[CountTable]:
    jobs = [(cfg.family, row, cfg.q_max, str(cfg.cache_dir) if cfg.cache_dir else None) for row in cfg.lengths]
    if cfg.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            return list(pool.map(_row_job, jobs))
    return [_row_job(j) for j in jobs]


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _row_label(lengths: Tuple[int, ...]) -> str:
    if len(lengths) == 1:
        return str(lengths[0])
    return "(" + ",".join(str(l) for l in lengths) + ")"


def render(tables: Sequence[CountTable], fmt: str, family: str) -> str:
    label = FAMILIES[family][2]
    q_max = max((t.truncation for t in tables), default=0)
    if fmt == "md":
        head = "| " + " | ".join([label] + [f"Q={q}" for q in range(q_max + 1)]) + " |"
        sep = "|" + "---|" * (q_max + 2)
        lines = [head, sep]
        for t in tables:
            cells = [_row_label(t.lengths)] + [frac_to_str(v) for v in t.values()]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([t.to_json() for t in tables], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([label] + [f"Q={q}" for q in range(q_max + 1)])
        for t in tables:
            w.writerow([_row_label(t.lengths)] + [frac_to_str(v) for v in t.values()])
        return buf.getvalue()
    raise UsageError(f"unknown format {fmt!r}")


def parse_tables(text: str, fmt: str, family: str) -> List[CountTable]:
    """Inverse of :func:`render`."""
    genus, n, _, _ = FAMILIES[family]
    if fmt == "json":
        return [CountTable.from_json(d) for d in json.loads(text)]
    if fmt == "md":
        rows = [[c.strip() for c in line.strip().strip("|").split("|")] for line in text.splitlines()[2:] if line.strip()]
    elif fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))[1:]
    else:
        raise UsageError(f"unknown format {fmt!r}")
    out = []
    for cells in rows:
        lengths = tuple(int(v) for v in cells[0].strip("()").split(","))
        coeffs = {q: Fraction(v) for q, v in enumerate(cells[1:])}
        out.append(CountTable(family, genus, lengths, coeffs, len(cells) - 2))
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_table(cfg: RunConfig, out=sys.stdout) -> int:
    tables = compute_tables(cfg)
    out.write(render(tables, cfg.format, cfg.family))
    return 0


def cmd_check(cfg: RunConfig, out=sys.stdout) -> int:
    res = run_suite(cfg.suite, q_max=cfg.q_max, order=cfg.order, h_max=cfg.h_max, gn_max=cfg.gn_max)
    out.write(json.dumps(res.to_json(), indent=2) + "\n")
    return 0 if res.passed else 1


def cmd_oracle(cfg: RunConfig, out=sys.stdout) -> int:
    lengths = cfg.lengths[0]
    spec = EnumSpec(cfg.genus or 0, lengths, (4,) * cfg.quads, cfg.boundary_class, True, cfg.cap)
    count = enumerate_maps(spec)
    if cfg.witnesses:
        wit = [dump_witness(m) for m in iter_maps(spec)]
        if cfg.format == "json":
            out.write(json.dumps({"count": count, "witnesses": wit}, indent=2) + "\n")
        else:
            out.write(f"{count}\n" + "".join(w + "\n" for w in wit))
        return 0
    if cfg.format == "json":
        out.write(json.dumps({"count": count}) + "\n")
    else:
        out.write(f"{count}\n")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maprec", description="Exact counts of ordinary and fully simple maps.")
    p.add_argument("--version", action="version", version=f"maprec {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=FORMATS, default="md")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
        sp.add_argument("--cache-dir", default=None, help="default: $MAPREC_CACHE or ~/.cache/maprec")
        sp.add_argument("--no-cache", action="store_true")

    t = sub.add_parser("table", help="print a count table")
    t.add_argument("--family", required=True, choices=sorted(FAMILIES))
    t.add_argument("--genus", type=int, default=None)
    t.add_argument("--lengths", default=None, help="rows, e.g. 2,4,6 or 2..14 or (1,1),(3,1)")
    t.add_argument("--qmax", type=int, default=8)
    common(t)

    c = sub.add_parser("check", help="run a verification suite")
    c.add_argument("--suite", required=True, choices=sorted(SUITES))
    c.add_argument("--qmax", type=int, default=None)
    c.add_argument("--order", type=int, default=None)
    c.add_argument("--hmax", type=int, default=None)
    c.add_argument("--gnmax", type=int, default=None)
    common(c)

    o = sub.add_parser("oracle", help="brute-force count of maps")
    o.add_argument("--genus", type=int, default=0)
    o.add_argument("--lengths", required=True, help="boundary lengths of one map, e.g. 2,2")
    o.add_argument("--quads", type=int, default=0)
    o.add_argument("--class", dest="boundary_class", choices=BOUNDARY_CLASSES, default="ordinary")
    o.add_argument("--cap", type=int, default=20, help="largest number of half-edges enumerated")
    o.add_argument("--witnesses", action="store_true")
    common(o)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.jobs < 1:
        raise UsageError("--jobs must be positive")
    cache = None if ns.no_cache else (Path(ns.cache_dir) if ns.cache_dir else default_cache_dir())
    cfg = RunConfig(ns.command, format=ns.format, parallelism=ns.jobs, cache_dir=cache)
    if ns.command == "table":
        genus, n, _, rows = FAMILIES[ns.family]
        if ns.genus is not None and ns.genus != genus:
            raise UsageError(f"family {ns.family} has genus {genus}")
        if ns.qmax < 0:
            raise UsageError("--qmax must be nonnegative")
        cfg.family, cfg.genus, cfg.q_max = ns.family, genus, ns.qmax
        cfg.lengths = parse_lengths(ns.lengths, n) if ns.lengths else list(rows)
        if any(l <= 0 for row in cfg.lengths for l in row):
            raise UsageError("boundary lengths must be positive")
    elif ns.command == "check":
        for name in ("qmax", "order", "hmax", "gnmax"):
            v = getattr(ns, name)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be nonnegative")
        cfg.suite = ns.suite
        cfg.q_max, cfg.order, cfg.h_max, cfg.gn_max = ns.qmax, ns.order, ns.hmax, ns.gnmax
    else:
        if ns.genus < 0 or ns.quads < 0:
            raise UsageError("--genus and --quads must be nonnegative")
        cfg.genus, cfg.quads = ns.genus, ns.quads
        cfg.lengths = [tuple(_int_list(ns.lengths))]
        cfg.boundary_class, cfg.cap, cfg.witnesses = ns.boundary_class, ns.cap, ns.witnesses
    return cfg


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        if cfg.command == "table":
            return cmd_table(cfg, out)
        if cfg.command == "check":
            return cmd_check(cfg, out)
        return cmd_oracle(cfg, out)
    except CapExceeded as exc:
        print(f"maprec: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"maprec: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
