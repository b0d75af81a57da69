import argparse
import logging
from pathlib import Path

from src.routers.common import add_bend_ratio_option, load_template, write_json
from src.schemas.params import GridSpec
from src.services import PoseService
from src.utils.io import load_calibration, read_mask
from src.utils.pose import BruteForcePoseSearch, build_projection_database, load_database, save_database

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    build = subparsers.add_parser("bfs-build", parents=parents, help="Build the projection database")
    build.add_argument("--template", default=None, help="Flat template mask (default: procedural fish)")
    build.add_argument("--grid", default=None, help="GridSpec JSON (default grid if omitted)")
    build.add_argument("--out", required=True, help="Database directory")
    build.set_defaults(handler=run_build)

    query = subparsers.add_parser("bfs-estimate", parents=parents, help="Length by database search")
    query.add_argument("--mask", required=True, help="Fish mask")
    query.add_argument("--db", required=True, help="Database directory")
    query.add_argument("--calib", required=True, help="Calibration JSON")
    query.add_argument("--template", default=None, help="Template the database was built from")
    query.add_argument("--out", required=True, help="Result JSON")
    query.add_argument("--no-bending", action="store_true", help="Search only the kappa = 0 entries (ablation)")
    add_bend_ratio_option(query)
    query.set_defaults(handler=run_estimate)


def run_build(args: argparse.Namespace) -> int:
    template = load_template(args.template)
    grid = None
    if args.grid:
        grid = GridSpec.model_validate_json(Path(args.grid).read_text(encoding="utf-8"))
    db = build_projection_database(template, grid)
    save_database(db, args.out)
    return 0


def run_estimate(args: argparse.Namespace) -> int:
    camera = load_calibration(args.calib)
    template = load_template(args.template)
    db = load_database(args.db, template)
    if args.no_bending:
        db = db.flat()
    mask = read_mask(args.mask)
    result = PoseService.estimate_frame(
        mask,
        camera,
        template,
        estimator=BruteForcePoseSearch(db),
        frame=args.mask,
        use_bend_ratio=not args.no_bend_ratio,
    )
    write_json(args.out, result.model_dump(mode="json"))
    return 0
