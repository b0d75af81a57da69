"""Общие опции и загрузчики для подкоманд CLI."""
import argparse
import json
from pathlib import Path
from typing import Optional

from src.config import settings
from src.models.template import Template
from src.schemas.params import OptimizerConfig
from src.utils.template import get_default_template, init_template


def common_options() -> argparse.ArgumentParser:
    """Parent parser shared by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")
    return parent


def add_fit_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--template", default=None, help="Flat template mask (default: procedural fish)")
    parser.add_argument("--config", default=None, help="OptimizerConfig JSON file")
    parser.add_argument("--seed", type=int, default=settings.SEED, help="Seed of the multi-start order")
    parser.add_argument("--no-bending", action="store_true", help="Pin kappa = 0 (ablation)")
    add_bend_ratio_option(parser)


def add_bend_ratio_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--no-bend-ratio",
        action="store_true",
        help="Report the head-tail chord without the bending ratio (ablation)",
    )


def load_template(path: Optional[str]) -> Template:
    if path:
        return init_template(path)
    return get_default_template()


def load_optimizer_config(path: Optional[str], no_bending: bool = False) -> OptimizerConfig:
    cfg = OptimizerConfig(raster_pad=settings.RASTER_PAD)
    if path:
        cfg = OptimizerConfig.model_validate_json(Path(path).read_text(encoding="utf-8"))
        # a file without raster_pad keeps the environment value
        if "raster_pad" not in cfg.model_fields_set:
            cfg = cfg.model_copy(update={"raster_pad": settings.RASTER_PAD})
    if no_bending:
        cfg = cfg.model_copy(update={"fixed_kappa": True})
    return cfg


def write_json(path: str, data: dict) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")
    return out
