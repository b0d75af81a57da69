from .contour import (
    RasterizedPoints,
    boundary_bits,
    close_bits,
    closing_radius,
    extract_target_contour,
    pixel_labels,
    project_template_contour,
    rasterize,
    rasterize_closed,
)

__all__ = [
    "RasterizedPoints",
    "boundary_bits",
    "close_bits",
    "closing_radius",
    "extract_target_contour",
    "pixel_labels",
    "project_template_contour",
    "rasterize",
    "rasterize_closed",
]
