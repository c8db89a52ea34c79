"""Command-line front end: scale raw data, compute depths, run property checks.

Exit codes: 0 success, 1 a property check failed, 2 input error, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .context import DEFAULT_EXTENT_CAP, FormalContext, extent_masks
from .depth import get_depth_function
from .errors import FcaDepthError, SizeLimitError
from .formats import dumps_cxt, dumps_json, read_context
from .measure import DiscreteMeasure, Sample, make_measure
from .properties import (
    BRUTEFORCE_CAP, FAILS, INCONCLUSIVE_CAP, STARSHAPED_CAP, PropertyReport, check_c_p8_membership,
    check_order_basics, check_p2, check_p9, check_p10, check_quasiconcavity, check_starshaped,
    check_strict_quasiconcavity, check_symmetry_center, consistency_report, detect_p8_blocked,
    simulate_consistency,
)
from .scaling import ScalingSpec, read_csv, read_points, read_posets, scale_halfspaces, scale_posets, scale_table

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

CHECK_NAMES = ("P2", "P3-P5", "P6", "P7", "P8", "C_P8", "C_notP8", "P9", "P10", "P11", "SYM")
DEFAULT_CHECKS = "P2,P3-P5,P6,P7"
DEFAULT_SIZES = "10,100,1000,4000"


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    context: Optional[str] = None
    data: Optional[str] = None
    spec: Optional[str] = None
    posets: Optional[str] = None
    points: Optional[str] = None
    measure: str = "uniform"
    sample: Optional[str] = None
    depth: str = "tukey"
    checks: list = field(default_factory=list)
    seed: Optional[int] = None
    sizes: list = field(default_factory=list)
    trials: int = 50
    outlier: Optional[str] = None
    dup: Optional[tuple] = None
    involution: Optional[list] = None
    center: Optional[str] = None
    cap_extents: int = DEFAULT_EXTENT_CAP
    out: Optional[str] = None
    fmt: Optional[str] = None
    float_column: bool = False
    timing: bool = False
    negations: bool = True

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        inputs = [x for x in (ns.context, ns.data, ns.posets, ns.points) if x]
        if len(inputs) != 1:
            raise InputError("give exactly one of --context, --data, --posets, --points")
        if ns.spec and not ns.data:
            raise InputError("--spec only applies to --data")
        cfg = cls(
            command=ns.command, context=ns.context, data=ns.data, spec=ns.spec, posets=ns.posets,
            points=ns.points, measure=ns.measure, sample=ns.sample, depth=ns.depth, seed=ns.seed,
            trials=ns.trials, outlier=ns.outlier, cap_extents=ns.cap_extents, out=ns.out, fmt=ns.format,
            float_column=ns.float, timing=ns.timing, negations=not ns.no_negations, center=ns.center,
        )
        cfg.checks = _split(ns.check) if ns.check else []
        for name in cfg.checks:
            if name not in CHECK_NAMES:
                raise InputError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
        try:
            cfg.sizes = [int(x) for x in _split(ns.sizes)]
            if ns.dup:
                i, j = (int(x) for x in _split(ns.dup))
                cfg.dup = (i, j)
        except ValueError:
            raise InputError("--sizes and --dup take comma separated integers") from None
        cfg.involution = _split(ns.involution) if ns.involution else None
        if "P11" in cfg.checks and cfg.seed is None:
            raise InputError("the consistency simulation needs --seed")
        return cfg


def _split(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.replace("\n", ",").split(",")) if t]


# -- input resolution ----------------------------------------------------------

def load_context(cfg: RunConfig) -> FormalContext:
    try:
        if cfg.context:
            return read_context(cfg.context)
        if cfg.data:
            spec = ScalingSpec.load(cfg.spec) if cfg.spec else None
            table, spec = read_csv(cfg.data, spec)
            return scale_table(table, spec)
        if cfg.posets:
            items, labels, posets = read_posets(cfg.posets)
            return scale_posets(len(items), posets, labels, items, include_negations=cfg.negations)
        labels, coords, directions = read_points(cfg.points)
        return scale_halfspaces(coords, directions, labels)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise InputError(f"cannot read input: {exc}") from None


def _read_labels(arg: str) -> list[str]:
    path = Path(arg)
    if path.is_file():
        return _split(path.read_text(encoding="utf-8").replace(" ", ",").replace("\t", ","))
    return _split(arg)


def load_measure(cfg: RunConfig, ctx: FormalContext) -> tuple[DiscreteMeasure, Optional[Sample]]:
    """Uniform, a JSON weights file (list or label -> weight map), or the
    empirical measure of ``--sample``."""
    if cfg.sample:
        if cfg.measure != "uniform":
            raise InputError("--sample and --measure are mutually exclusive")
        sample = Sample.from_labels(ctx, _read_labels(cfg.sample))
        return make_measure("empirical", ctx, sample=sample), sample
    if cfg.measure == "uniform":
        return make_measure("uniform", ctx), None
    try:
        data = json.loads(Path(cfg.measure).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read measure: {exc}") from None
    if isinstance(data, dict) and "weights" in data:
        data = data["weights"]
    if isinstance(data, dict):
        missing = [g for g in ctx.object_labels if g not in data]
        extra = [g for g in data if g not in ctx.object_labels]
        if missing or extra:
            raise InputError(f"measure labels do not match the context (missing {missing}, unknown {extra})")
        data = [data[g] for g in ctx.object_labels]
    try:
        return make_measure("explicit", ctx, weights=[str(w) if isinstance(w, str) else w for w in data]), None
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad weight: {exc}") from None


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------

def cmd_scale(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    if cfg.out:
        base = Path(cfg.out)
        if base.suffix.lower() in (".cxt", ".json"):
            base = base.with_suffix("")
        for suffix, text in ((".cxt", dumps_cxt(ctx)), (".json", dumps_json(ctx))):
            with open(base.with_suffix(suffix), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    else:
        sys.stdout.write(dumps_cxt(ctx))
    info = sys.stderr if not cfg.out else sys.stdout
    print(f"objects: {ctx.n_objects}", file=info)
    print(f"attributes: {ctx.n_attributes}", file=info)
    if ctx.n_objects <= cfg.cap_extents:
        print(f"extents: {len(extent_masks(ctx, cfg.cap_extents))}", file=info)
    else:
        print(f"extents: skipped (more than {cfg.cap_extents} objects)", file=info)
    return EXIT_OK


def cmd_extents(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    masks = extent_masks(ctx, cfg.cap_extents)
    doc = {"context_id": ctx.fingerprint(), "count": len(masks),
           "extents": [ctx.object_names(m) for m in masks]}
    _emit(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", cfg.out)
    return EXIT_OK


def cmd_depth(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    measure, _ = load_measure(cfg, ctx)
    depth_map = get_depth_function(cfg.depth).depth_map(ctx, measure)
    fmt = cfg.fmt or ("json" if cfg.out and cfg.out.endswith(".json") else "tsv")
    text = depth_map.to_json(cfg.float_column) if fmt == "json" else depth_map.to_tsv(cfg.float_column)
    _emit(text, cfg.out)
    return EXIT_OK


def _run_one(name: str, cfg: RunConfig, ctx, measure, sample, D) -> PropertyReport:
    if name == "P2":
        return check_p2(ctx, measure, D)
    if name == "P3-P5":
        return check_order_basics(ctx, measure, D)
    if name == "P6":
        return check_starshaped(ctx, measure, D, STARSHAPED_CAP)
    if name == "P7":
        mode = "both" if ctx.n_objects <= BRUTEFORCE_CAP else "contour"
        return check_quasiconcavity(ctx, measure, D, mode)[0]
    if name == "P8":
        return check_strict_quasiconcavity(ctx, measure, D)
    if name == "C_P8":
        return check_c_p8_membership(ctx, measure)
    if name == "C_notP8":
        return detect_p8_blocked(ctx)
    if name == "P9":
        if sample is None or cfg.dup is None:
            raise InputError("P9 needs --sample and --dup i,j (sample positions)")
        return check_p9(ctx, sample, cfg.dup, D)
    if name == "P10":
        if sample is None or cfg.outlier is None:
            raise InputError("P10 needs --sample and --outlier")
        return check_p10(ctx, sample, cfg.outlier, D)
    if name == "P11":
        if D.name != "tukey":
            raise InputError("the consistency simulation is defined for the Tukey depth")
        table = simulate_consistency(ctx, measure, cfg.sizes, cfg.trials, cfg.seed)
        return consistency_report(table)
    if name == "SYM":
        if cfg.involution is None or cfg.center is None:
            raise InputError("SYM needs --involution (image label per object) and --center")
        perm = [ctx.object_index(x) for x in cfg.involution]
        return check_symmetry_center(ctx, measure, perm, cfg.center, D)
    raise InputError(f"unknown check {name!r}")


def cmd_check(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    measure, sample = load_measure(cfg, ctx)
    D = get_depth_function(cfg.depth)
    reports = []
    for name in cfg.checks or _split(DEFAULT_CHECKS):
        try:
            report = _run_one(name, cfg, ctx, measure, sample, D)
        except SizeLimitError as exc:
            report = PropertyReport(name, INCONCLUSIVE_CAP, notes=[str(exc)])
        reports.append(report)
    doc = {
        "context_id": ctx.fingerprint(),
        "measure_id": measure.fingerprint(),
        "depth_function": D.name,
        "reports": [r.to_dict(cfg.timing) for r in reports],
    }
    _emit(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", cfg.out)
    return EXIT_FAIL if any(r.verdict == FAILS for r in reports) else EXIT_OK


COMMANDS = {"scale": cmd_scale, "depth": cmd_depth, "check": cmd_check, "extents": cmd_extents}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcadepth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("scale", "build a formal context and write .cxt/.json"),
                           ("depth", "compute a depth map"),
                           ("check", "run property checks and emit a JSON bundle"),
                           ("extents", "list every extent of the context")):
        p = sub.add_parser(name, help=helptext)
        src = p.add_argument_group("input (exactly one)")
        src.add_argument("--context", help=".cxt or .json context file")
        src.add_argument("--data", help="CSV table; header row, first column holds object labels")
        src.add_argument("--posets", help="JSON partial orders")
        src.add_argument("--points", help="JSON point cloud")
        p.add_argument("--spec", help="JSON scaling spec for --data (default: inferred)")
        p.add_argument("--no-negations", action="store_true", help="drop the non-dominance block for --posets")
        p.add_argument("--measure", default="uniform", help="'uniform' or a JSON weights file")
        p.add_argument("--sample", help="comma separated object labels, or a file of labels")
        p.add_argument("--depth", default="tukey", help="depth function: tukey or hier-free")
        p.add_argument("--check", help=f"comma separated subset of {','.join(CHECK_NAMES)} (default {DEFAULT_CHECKS})")
        p.add_argument("--seed", type=int, help="seed for the consistency simulation")
        p.add_argument("--sizes", default=DEFAULT_SIZES, help="sample sizes for the consistency simulation")
        p.add_argument("--trials", type=int, default=50, help="trials per sample size")
        p.add_argument("--outlier", help="outlier label for P10")
        p.add_argument("--dup", help="two sample positions i,j holding duplicates, for P9")
        p.add_argument("--involution", help="image label of each object, in object order, for SYM")
        p.add_argument("--center", help="symmetry centre label for SYM")
        p.add_argument("--cap-extents", type=int, default=DEFAULT_EXTENT_CAP,
                       help="largest object count for extent enumeration")
        p.add_argument("--out", help="output path (scale: base name for .cxt and .json)")
        p.add_argument("--format", choices=("tsv", "json"), help="depth output format")
        p.add_argument("--float", action="store_true", help="add a decimal column next to exact values")
        p.add_argument("--timing", action="store_true", help="record runtime_ms in reports")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, FcaDepthError, KeyError, ValueError) as exc:
        plain_key = isinstance(exc, KeyError) and not isinstance(exc, FcaDepthError)
        msg = exc.args[0] if plain_key and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
