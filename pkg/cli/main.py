"""Batch verification commands: bound, search, ekr, compress, bijection, kernels."""

import argparse
import json
import logging
import sys
import traceback
from pathlib import Path
from typing import Any, Optional

import pandas as pd
from pydantic import BaseModel, ValidationError, field_validator

from bijection.set_multiset_map import get_bijection_table
from bounds.extremal_bounds import bound_records
from compression.down_compression import kernel_reduce
from config import Config
from core.errors import BudgetExceededError, DomainError, MultisetError
from core.multisets import format_multiset
from core.universe import family_to_json, is_cross_t_intersecting, parse_family
from search.engines import ENGINES, max_sum, max_t_intersecting
from search.kernels import verify_kernel_pipeline
from search.report import SearchReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BAD_INPUT = 2
EXIT_DISCREPANCY = 3
EXIT_NOT_INTERSECTING = 4

FORMATS = ("json", "csv", "table")
DEFAULT_FORMATS = {
    "bound": "csv",
    "bijection": "csv",
    "search": "json",
    "ekr": "json",
    "compress": "json",
    "kernels": "json",
}


class RunConfig(BaseModel):
    """Validated arguments of one CLI invocation."""

    command: str
    m: Optional[int] = None
    k: Optional[int] = None
    t: Optional[int] = None
    n: Optional[int] = None
    engine: str = "closure"
    samples: int = Config.DEFAULT_SAMPLES
    seed: int = Config.DEFAULT_SEED
    threads: int = Config.THREADS
    format: Optional[str] = None
    out: Optional[Path] = None
    first: Optional[Path] = None
    second: Optional[Path] = None
    raw: bool = False
    no_prune: bool = False

    @field_validator("m", "k", "t", "n", "samples", "threads")
    @classmethod
    def _positive(cls, value):
        if value is not None and value < 1:
            raise ValueError(f"must be positive, got {value}")
        return value

    @field_validator("engine")
    @classmethod
    def _known_engine(cls, value):
        if value not in ENGINES:
            raise ValueError(f"unknown engine {value!r}")
        return value

    @field_validator("format")
    @classmethod
    def _known_format(cls, value):
        if value is not None and value not in FORMATS:
            raise ValueError(f"unknown format {value!r}")
        return value

    @property
    def output_format(self) -> str:
        return self.format or DEFAULT_FORMATS[self.command]

    def require(self, *names: str) -> None:
        missing = [f"--{name}" for name in names if getattr(self, name) is None]
        if missing:
            raise MultisetError(f"{self.command} needs {', '.join(missing)}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="ground set size")
    common.add_argument("--k", type=int, help="multiset cardinality")
    common.add_argument("--t", type=int, help="intersection threshold")
    common.add_argument("--n", type=int, help="ground set size for the set-family bound (default m+k-1)")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", type=Path, default=None, help="write the payload here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="mekr",
        description="Exact verification of intersection theorems for multiset families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bound", parents=[common], help="closed-form bounds with hypothesis flags")

    search = sub.add_parser("search", parents=[common], help="maximum |F|+|G| over cross t-intersecting pairs")
    search.add_argument("--engine", choices=ENGINES, default="closure")
    search.add_argument("--threads", type=int, default=Config.THREADS)
    search.add_argument("--raw", action="store_true", help="also list every optimal (F, Γ(F)) found")
    search.add_argument("--no-prune", action="store_true", help="disable upper-bound pruning in brute force")

    sub.add_parser("ekr", parents=[common], help="largest t-intersecting family")

    compress = sub.add_parser("compress", parents=[common], help="reduce a pair until M(m,1) is a t-kernel")
    compress.add_argument("--first", type=Path, required=True, help="JSON file with the first family")
    compress.add_argument("--second", type=Path, required=True, help="JSON file with the second family")

    sub.add_parser("bijection", parents=[common], help="dump the subset-to-multiset bijection")

    kernels = sub.add_parser("kernels", parents=[common], help="randomized kernel-reduction check")
    kernels.add_argument("--samples", type=int, default=Config.DEFAULT_SAMPLES)
    kernels.add_argument("--seed", type=int, default=Config.DEFAULT_SEED)

    return parser


def _emit(payload: Any, config: RunConfig) -> None:
    fmt = config.output_format
    if isinstance(payload, pd.DataFrame):
        if fmt == "json":
            text = payload.to_json(orient="records", indent=2)
        elif fmt == "csv":
            text = payload.to_csv(index=False)
        else:
            text = payload.to_string(index=False)
    else:
        text = json.dumps(payload, indent=2, ensure_ascii=False)
    if not text.endswith("\n"):
        text += "\n"

    if config.out is not None:
        config.out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {config.command} output to {config.out}")
    else:
        sys.stdout.write(text)


def _class_frame(report: SearchReport) -> pd.DataFrame:
    return pd.DataFrame([
        {
            "class": i,
            "F": json.dumps(record.first),
            "G": json.dumps(record.second),
            "size": record.size,
        }
        for i, record in enumerate(report.classes, start=1)
    ])


def _emit_report(report: SearchReport, config: RunConfig) -> int:
    if config.output_format == "json":
        _emit(report.to_json_dict(), config)
    else:
        _emit(_class_frame(report), config)
    if report.verdict is not None and report.verdict.discrepancy:
        logger.warning(f"Verdict {report.verdict.status}: {report.verdict.note or 'see classes'}")
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_bound(config: RunConfig) -> int:
    config.require("m", "k", "t")
    records = bound_records(config.m, config.k, config.t, config.n)
    frame = pd.DataFrame([r.model_dump() for r in records])
    frame = frame.astype({"m": "Int64", "n": "Int64"})
    _emit(frame[["m", "k", "t", "n", "formula", "value", "hypothesis_ok"]], config)
    return EXIT_OK


def cmd_search(config: RunConfig) -> int:
    config.require("m", "k", "t")
    report = max_sum(
        config.m, config.k, config.t,
        engine=config.engine,
        threads=config.threads,
        prune=not config.no_prune,
        raw_witnesses=config.raw,
    )
    return _emit_report(report, config)


def cmd_ekr(config: RunConfig) -> int:
    config.require("m", "k", "t")
    return _emit_report(max_t_intersecting(config.m, config.k, config.t), config)


def cmd_compress(config: RunConfig) -> int:
    config.require("m", "t", "first", "second")
    try:
        F = parse_family(config.first.read_text(encoding="utf-8"), config.m, config.k)
        G = parse_family(config.second.read_text(encoding="utf-8"), config.m, F.k)
    except OSError as e:
        raise MultisetError(f"Cannot read family file: {e}") from e

    if not 1 <= config.t <= F.k:
        raise DomainError(f"t must lie in [1, k={F.k}], got t={config.t}")

    if not is_cross_t_intersecting(F, G, config.t):
        logger.error(f"Input pair is not cross {config.t}-intersecting")
        return EXIT_NOT_INTERSECTING

    F2, G2, trace = kernel_reduce(F, G, config.t)
    if config.output_format == "json":
        _emit({
            "first": family_to_json(F2),
            "second": family_to_json(G2),
            "initial_kernel": list(trace.initial_kernel),
            "final_kernel": list(trace.final_kernel),
            "trace": trace.export(),
        }, config)
    else:
        _emit(pd.DataFrame(trace.export(), columns=["i", "s", "j", "changed_count", "kernel_cells"]), config)
    return EXIT_OK


def cmd_bijection(config: RunConfig) -> int:
    config.require("m", "k")
    table = get_bijection_table(config.m, config.k)
    frame = pd.DataFrame([
        {"subset": "{" + ",".join(map(str, B)) + "}", "multiset": format_multiset(F)}
        for B, F in table.rows()
    ])
    _emit(frame, config)
    return EXIT_OK


def cmd_kernels(config: RunConfig) -> int:
    config.require("m", "k", "t")
    report = verify_kernel_pipeline(config.m, config.k, config.t, config.samples, config.seed)
    _emit(report.model_dump(mode="json"), config)
    return EXIT_OK if report.ok else EXIT_DISCREPANCY


HANDLERS = {
    "bound": cmd_bound,
    "search": cmd_search,
    "ekr": cmd_ekr,
    "compress": cmd_compress,
    "bijection": cmd_bijection,
    "kernels": cmd_kernels,
}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=Config.log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        Config.validate_config()
        config = RunConfig.model_validate(vars(args))
    except (ValueError, ValidationError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_BAD_INPUT

    try:
        return HANDLERS[config.command](config)
    except (MultisetError, BudgetExceededError) as e:
        logger.error(f"{config.command} failed: {e}")
        return EXIT_BAD_INPUT
    except Exception as e:
        logger.error(f"Unexpected error in {config.command}: {e}")
        logger.debug(traceback.format_exc())
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
