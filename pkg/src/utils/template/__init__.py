from .template import (
    apply_deformation,
    bend_points,
    build_template,
    check_bend,
    deform_points,
    get_default_template,
    init_template,
    procedural_fish_mask,
    rotate_points,
    scale_points,
    shutdown_template,
    translate_points,
)

__all__ = [
    "apply_deformation",
    "bend_points",
    "build_template",
    "check_bend",
    "deform_points",
    "get_default_template",
    "init_template",
    "procedural_fish_mask",
    "rotate_points",
    "scale_points",
    "shutdown_template",
    "translate_points",
]
