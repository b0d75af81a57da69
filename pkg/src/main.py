"""
fishpose: monocular fish pose and length estimation.

Exit codes: 0 success, 2 invalid input, 3 degenerate geometry.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.config import settings
from src.routers import SUBCOMMANDS
from src.routers.common import common_options
from src.utils.errors import FishPoseError
from src.utils.template import shutdown_template

logger = logging.getLogger("fishpose")

EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fishpose", description="Fish 3D pose and length from a single camera")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [common_options()]
    for module in SUBCOMMANDS:
        module.register(subparsers, parents)
    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except FishPoseError as e:
        logger.error(e.message)
        return e.exit_code
    except ValidationError as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_INPUT
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        logger.error("%s: %s", e.filename, e.strerror)
        return EXIT_INPUT
    finally:
        shutdown_template()


if __name__ == "__main__":
    sys.exit(main())
