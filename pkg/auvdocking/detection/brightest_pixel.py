import numpy as np

from .types import ABSENT_POSITION, Detection


def brightest_pixel(image, threshold: float) -> Detection:
    """Classical baseline: the brightest pixel is the beacon if it clears the threshold.

    Luminance is the channel mean. Ties resolve to the first maximum in row-major order.
    """
    lum = image.luminance()
    h, w = lum.shape
    flat = int(np.argmax(lum))
    if lum.flat[flat] < threshold:
        return Detection(0.0, *ABSENT_POSITION)
    row, col = divmod(flat, w)
    return Detection(1.0, col / (w - 1), row / (h - 1))
