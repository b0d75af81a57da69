import argparse
import logging

from src.routers.common import load_template
from src.utils.io import load_scene_spec, render_synthetic, write_mask, write_scene
from src.utils.template import procedural_fish_mask

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    synth = subparsers.add_parser("synth", parents=parents, help="Render a synthetic scene")
    synth.add_argument("--spec", required=True, help="SceneSpec JSON")
    synth.add_argument("--template", default=None, help="Flat template mask (default: procedural fish)")
    synth.add_argument("--out", required=True, help="Output directory")
    synth.set_defaults(handler=run_synth)

    template = subparsers.add_parser("template", parents=parents, help="Write the procedural template mask")
    template.add_argument("--out", required=True, help="Mask file")
    template.set_defaults(handler=run_template)


def run_synth(args: argparse.Namespace) -> int:
    spec = load_scene_spec(args.spec)
    scene = render_synthetic(spec, load_template(args.template))
    write_scene(args.out, scene)
    return 0


def run_template(args: argparse.Namespace) -> int:
    write_mask(args.out, procedural_fish_mask())
    logger.info("Procedural template written to %s", args.out)
    return 0
