"""Range attenuation with veiling light, applied per colour channel.

    x_att = x_uw * exp(-beta_c * d) + beta_inf_c * (1 - exp(-beta_c * d))
"""

import numpy as np

from auvdocking.models.scenario import WaterModel

from .raster import RasterImage


def transmission(water: WaterModel, d: float) -> np.ndarray:
    return np.exp(-np.asarray(water.beta, dtype=float) * d)


def attenuate(image: RasterImage, d: float, water: WaterModel) -> RasterImage:
    """Attenuated copy of an image seen through d metres of water."""
    if d < 0.0:
        raise ValueError(f"Range must be non-negative, got {d}")
    t = transmission(water, d)
    veil = np.asarray(water.beta_inf, dtype=float)
    data = image.data * t + veil * (1.0 - t)
    return RasterImage(np.clip(data, 0.0, 1.0))


def beacon_luminance(water: WaterModel, d: float, source: float = 1.0) -> float:
    """Attenuated luminance of a source pixel of the given intensity."""
    t = transmission(water, d)
    veil = np.asarray(water.beta_inf, dtype=float)
    return float(np.mean(np.clip(source * t + veil * (1.0 - t), 0.0, 1.0)))


def contrast(image: RasterImage, beacon_uv) -> float:
    """Luminance of the beacon pixel above the frame median."""
    lum = image.luminance()
    u, v = (int(round(c)) for c in beacon_uv)
    return float(lum[v, u] - np.median(lum))
