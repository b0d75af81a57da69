import argparse
import asyncio
import logging
from pathlib import Path

from src.config import settings
from src.routers.common import add_fit_options, load_optimizer_config, load_template
from src.services import PoseService
from src.utils.errors import InvalidInputError
from src.utils.io import load_calibration, write_clip_csv

logger = logging.getLogger(__name__)

MASK_SUFFIXES = {".pgm", ".pnm", ".png", ".bmp", ".tif", ".tiff"}


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "estimate-clip", parents=parents, help="Per-frame lengths and the clip length"
    )
    parser.add_argument("--masks", required=True, help="Directory of per-frame masks")
    parser.add_argument("--calib", required=True, help="Calibration JSON")
    parser.add_argument("--out", required=True, help="Output CSV")
    parser.add_argument("--workers", type=int, default=settings.MAX_WORKERS, help="Concurrent frames")
    add_fit_options(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    masks_dir = Path(args.masks)
    if not masks_dir.is_dir():
        raise InvalidInputError(f"{masks_dir}: not a directory")
    paths = [p for p in masks_dir.iterdir() if p.suffix.lower() in MASK_SUFFIXES]
    if not paths:
        raise InvalidInputError(f"{masks_dir}: no mask files")

    camera = load_calibration(args.calib)
    template = load_template(args.template)
    cfg = load_optimizer_config(args.config, args.no_bending)

    results = asyncio.run(
        PoseService.estimate_clip(
            paths, camera, template, cfg, args.seed, args.workers, use_bend_ratio=not args.no_bend_ratio
        )
    )
    frames, clip = PoseService.aggregate(results)
    write_clip_csv(
        args.out,
        [f.frame for f in frames],
        clip,
        [f.low_confidence for f in frames],
        clip_name=masks_dir.name,
    )
    logger.info(
        "Clip %s: %.1f mm from %d of %d frames", masks_dir.name, clip.final_length_mm, clip.n_kept, len(paths)
    )
    return 0
