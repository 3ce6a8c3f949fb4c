"""``vesselkit`` command line: full segmentation, single stages and batch evaluation."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import __version__
from .config import METHODS, PRESETS, ConfigError, PipelineConfig, load_config
from .pipeline import STAGES, PipelineError, run_dataset, run_segment, run_stage
from .raster import ImageIOError, RasterTypeError
from .vesselness import POLARITIES

log = logging.getLogger("vesselkit")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI configuration file")
    p.add_argument("--out", default=".", help="output directory (default: current directory)")
    p.add_argument("--format", choices=("png", "pgm"), default="png", help="image output format")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--frangi-threshold", type=int, help="intensity cut on the Frangi response (default 100)")
    p.add_argument("--max-score", type=int, help="tolerance budget of the local-sensitive filter")
    p.add_argument("--max-dist", type=int, help="ring search limit of the local-sensitive filter")
    p.add_argument("--score-threshold", type=int, help="keep pixels whose score exceeds this")
    p.add_argument("--connectivity", type=int, choices=(4, 8))
    p.add_argument("--polarity", choices=POLARITIES)
    p.add_argument("--dilations", type=int)
    p.add_argument("--erosions", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vesselkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="run the whole pipeline on one image")
    p.add_argument("image")
    _common(p)

    for stage in STAGES:
        p = sub.add_parser(stage, help=f"run the {stage} stage only")
        if stage == "eval":
            p.add_argument("prediction")
            p.add_argument("truth")
            p.add_argument("fov", nargs="?")
        else:
            p.add_argument("input")
        _common(p)

    p = sub.add_parser("batch", help="segment and evaluate a whole dataset")
    _common(p)
    p.add_argument("--preset", choices=sorted(PRESETS), help="dataset file-naming preset")
    p.add_argument("--images", help="image directory (overrides config)")
    p.add_argument("--truth", help="ground-truth directory (overrides config)")
    p.add_argument("--fov", help="FOV mask directory (overrides config)")
    p.add_argument("--workers", type=int)
    return parser


def _config_from(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    cfg = cfg.with_overrides(
        method=args.method,
        frangi_threshold=args.frangi_threshold,
        max_score=args.max_score,
        max_dist=args.max_dist,
        score_threshold=args.score_threshold,
        connectivity=args.connectivity,
        polarity=args.polarity,
        dilations=args.dilations,
        erosions=args.erosions,
        workers=getattr(args, "workers", None),
    )
    if args.command == "batch":
        layout = PRESETS[args.preset] if args.preset else cfg.dataset
        updates = {k: v for k, v in (("image_dir", args.images), ("gt_dir", args.truth),
                                     ("fov_dir", args.fov)) if v is not None}
        if args.preset:
            updates = {"image_dir": cfg.dataset.image_dir, "gt_dir": cfg.dataset.gt_dir,
                       "fov_dir": cfg.dataset.fov_dir, **updates}
        cfg = replace(cfg, dataset=replace(layout, **updates))
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config_from(args)
        if args.command == "segment":
            _, written = run_segment(args.image, cfg, args.out, args.format)
        elif args.command == "batch":
            report, _ = run_dataset(cfg, args.out, args.format)
            sys.stdout.write(report.to_table())
            return 0
        elif args.command == "eval":
            inputs = [args.prediction, args.truth] + ([args.fov] if args.fov else [])
            written = run_stage("eval", inputs, cfg, args.out, args.format)
            sys.stdout.write(written[-1].read_text())
            return 0
        else:
            written = run_stage(args.command, [args.input], cfg, args.out, args.format)
        for path in written:
            print(path)
        return 0
    except (ConfigError, PipelineError, ImageIOError, RasterTypeError, ValueError) as exc:
        print(f"vesselkit {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
