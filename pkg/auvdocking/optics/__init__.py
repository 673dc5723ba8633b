# auvdocking/optics/__init__.py

from .camera import Projection, project, unproject
from .raster import RasterImage
from .scene import (
    add_camera_noise,
    geometric_layers,
    locate_beacon,
    render_frame,
    render_scene,
    render_unattenuated,
    styled_texture,
)
from .water import attenuate, beacon_luminance, contrast, transmission

__all__ = [
    "Projection",
    "project",
    "unproject",
    "RasterImage",
    "add_camera_noise",
    "geometric_layers",
    "locate_beacon",
    "render_frame",
    "render_scene",
    "render_unattenuated",
    "styled_texture",
    "attenuate",
    "beacon_luminance",
    "contrast",
    "transmission",
]
