"""``ur-lab`` command line entry point.

    ur-lab <experiment> [--config PATH] [--out DIR] [--seed U64]
    ur-lab fixtures

Exit codes: 0 all checks passed, 1 a check failed (see failures.json),
2 config could not be parsed, 3 config is invalid.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__, config
from .errors import ConfigParse, ConfigValidate, UrLabError
from .experiments import RUNNERS, ExperimentResult
from .fixtures import format_catalog
from .hilbert import KERNEL_BACKEND, PRNG_ALGORITHM

META_SCHEMA_VERSION = 1
OUT_ENV = "URLAB_OUT"
EXIT_OK, EXIT_ASSERTION, EXIT_PARSE, EXIT_VALIDATE = 0, 1, 2, 3


def format_value(v: Any) -> str:
    """CSV cell text: floats round-trip with 17 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _json_value(v.item())
    return v


def render_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_rows_json(result: ExperimentResult) -> str:
    rows = [dict(zip(result.columns, _json_value(list(r)))) for r in result.rows]
    return json.dumps({"columns": result.columns, "rows": rows}, indent=1, sort_keys=True) + "\n"


def metadata(cfg: config.RunConfig, result: ExperimentResult) -> dict[str, Any]:
    return {
        "schema_version": META_SCHEMA_VERSION,
        "urlab_version": __version__,
        "experiment": cfg.experiment,
        "config": _json_value(cfg.echo()),
        "prng": PRNG_ALGORITHM,
        "seed": cfg.seed,
        "kernel_backend": KERNEL_BACKEND,
        "columns": result.columns,
        "rows": len(result.rows),
        "summary": _json_value(result.summary),
        "failed_checks": len(result.failures),
    }


def resolve_output(cfg: config.RunConfig, cli_out: str | None) -> Path:
    if cli_out:
        return Path(cli_out)
    if os.environ.get(OUT_ENV):
        return Path(os.environ[OUT_ENV])
    if cfg.output:
        return Path(cfg.output)
    return Path("runs") / cfg.experiment


def run(cfg: config.RunConfig, out_dir: Path) -> int:
    """Execute one experiment and write its report files. Returns the exit code."""
    start = time.perf_counter()
    try:
        result = RUNNERS[cfg.experiment](cfg)
    except (ValueError, KeyError) as exc:
        # bad parameter combinations surfacing inside the numerics
        raise ConfigValidate(str(exc)) from exc
    except UrLabError as exc:
        result = ExperimentResult(["error"])
        result.fail("exception", f"{type(exc).__name__}: {exc}")
    wall = time.perf_counter() - start

    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.format == "csv":
        (out_dir / "data.csv").write_text(render_csv(result))
    else:
        (out_dir / "data.json").write_text(render_rows_json(result))
    (out_dir / "meta.json").write_text(json.dumps(metadata(cfg, result), indent=2, sort_keys=True) + "\n")
    # wall time lives in its own file so data.csv and meta.json stay byte-identical across reruns
    (out_dir / "timing.json").write_text(json.dumps({"wall_time_s": wall}) + "\n")
    failures = out_dir / "failures.json"
    if result.failures:
        failures.write_text(json.dumps(_json_value(result.failures), indent=2) + "\n")
        return EXIT_ASSERTION
    if failures.exists():
        failures.unlink()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ur-lab", description="Uncertainty-relation numerics lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in config.EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="output directory (overrides config and $URLAB_OUT)")
        p.add_argument("--seed", type=int, help="unsigned 64-bit seed (overrides config)")
    sub.add_parser("fixtures", help="list named fixtures")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fixtures":
        print(format_catalog())
        return EXIT_OK
    try:
        if args.config:
            cfg = config.load(args.config, args.command)
        else:
            cfg = config.validate({"experiment": args.command})
        if args.seed is not None:
            if not 0 <= args.seed <= config.MAX_SEED:
                raise ConfigValidate("--seed must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        out = resolve_output(cfg, args.out)
        code = run(cfg, out)
    except ConfigParse as exc:
        print(f"ur-lab: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigValidate as exc:
        print(f"ur-lab: {exc}", file=sys.stderr)
        return EXIT_VALIDATE
    status = "ok" if code == EXIT_OK else "FAILED (see failures.json)"
    print(f"{cfg.experiment}: {status} -> {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
