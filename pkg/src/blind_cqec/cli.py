"""Command-line entry point ``blind-cqec``."""

from __future__ import annotations

import argparse
import csv
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import COMMANDS, BenchOutput
from .config import DEFAULTS, BenchmarkConfig, ConfigError, _parse_value

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % float(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def version_string() -> str:
    """``git describe`` of the source tree when available, else the package version."""
    try:
        res = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if res.returncode == 0 and res.stdout.strip():
            return f"{__version__}+g{res.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else None
    return x


def write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(row.get(c, "")) for c in columns])


def write_outputs(result: BenchOutput, cfg: BenchmarkConfig, outdir: Path, version: str) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, (columns, rows) in result.tables.items():
        path = outdir / fname
        write_csv(path, columns, rows)
        sidecar = {
            "command": result.name,
            "file": fname,
            "rows": len(rows),
            "columns": columns,
            "version": version,
            "config": cfg.sections,
        }
        path.with_suffix(".json").write_text(json.dumps(_jsonable(sidecar), indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blind-cqec", description="Blind catalytic QEC benchmarks.")
    ap.add_argument("command", choices=list(COMMANDS) + ["all"])
    ap.add_argument("--config", help="sectioned key = value configuration file")
    ap.add_argument("--seed", type=int, help="master seed (default 42)")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--workers", type=int, help="worker processes")
    ap.add_argument("--dims", help="comma-separated dimensions for the command's dims grid")
    ap.add_argument("--grid", action="append", default=[], metavar="KEY=VALUES",
                    help="override a grid of the command's section, e.g. deltas=-0.3,0,0.3")
    ap.add_argument("--check", action="store_true", help="exit 1 if any acceptance check fails")
    ap.add_argument("-q", "--quiet", action="store_true")
    return ap


def _apply_overrides(cfg: BenchmarkConfig, args) -> None:
    if args.seed is not None:
        cfg.set("run", "seed", args.seed)
    if args.out is not None:
        cfg.set("run", "out", args.out)
    if args.workers is not None:
        cfg.set("run", "workers", args.workers)
    sections = list(COMMANDS) if args.command == "all" else [args.command]
    if args.dims is not None:
        hit = False
        for s in sections:
            if "dims" in DEFAULTS[s]:
                cfg.set(s, "dims", _parse_value(args.dims, DEFAULTS[s]["dims"]))
                hit = True
        if not hit:
            raise ConfigError(f"--dims does not apply to {args.command}")
    for item in args.grid:
        if "=" not in item:
            raise ConfigError(f"--grid expects KEY=VALUES, got {item!r}")
        key, raw = item.split("=", 1)
        key = key.strip()
        targets = [s for s in sections if key in DEFAULTS[s]]
        if not targets:
            raise ConfigError(f"unknown grid {key!r} for {args.command}")
        for s in targets:
            cfg.set(s, key, _parse_value(raw, DEFAULTS[s][key]))
    cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = BenchmarkConfig.load(args.config)
        _apply_overrides(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    names = list(COMMANDS) if args.command == "all" else [args.command]
    outdir = Path(cfg.get("run", "out"))
    version = version_string()
    manifest = {"version": version, "seed": cfg.seed, "commands": {}}
    failed = []
    for name in names:
        t0 = time.perf_counter()
        result = COMMANDS[name](cfg)
        elapsed = time.perf_counter() - t0
        files = write_outputs(result, cfg, outdir, version)
        manifest["commands"][name] = {
            "files": [p.name for p in files],
            "checks": result.checks,
            "info": result.info,
            "seconds": round(elapsed, 3),
        }
        if not args.quiet:
            for check, ok in result.checks.items():
                print(f"{name:15s} {'PASS' if ok else 'FAIL'}  {check}")
            print(f"{name:15s} done in {elapsed:.1f} s -> {', '.join(p.name for p in files)}")
        failed += [f"{name}:{c}" for c, ok in result.checks.items() if not ok]
    (outdir / "run_manifest.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    if args.check and failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
