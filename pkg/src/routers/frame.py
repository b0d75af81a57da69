import argparse
import logging

from src.routers.common import add_fit_options, load_optimizer_config, load_template, write_json
from src.services import PoseService
from src.utils.io import load_calibration, read_mask

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "estimate-frame", parents=parents, help="Length of the fish in one mask"
    )
    parser.add_argument("--mask", required=True, help="Fish mask (PGM or image)")
    parser.add_argument("--calib", required=True, help="Calibration JSON")
    parser.add_argument("--out", required=True, help="Result JSON")
    add_fit_options(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Оценивает позу и длину рыбы по одной маске.

    Пишет JSON: параметры деформации, ключевые точки, H'/C'/T', длину.
    """
    camera = load_calibration(args.calib)
    template = load_template(args.template)
    cfg = load_optimizer_config(args.config, args.no_bending)
    mask = read_mask(args.mask)

    result = PoseService.estimate_frame(
        mask, camera, template, cfg, args.seed, frame=args.mask, use_bend_ratio=not args.no_bend_ratio
    )
    write_json(args.out, result.model_dump(mode="json"))
    logger.info("Result written to %s", args.out)
    return 0
