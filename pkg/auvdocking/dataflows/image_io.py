"""Binary PPM (P6) and PGM (P5) codecs, 8 bits per sample."""

from pathlib import Path
from typing import Tuple, Union

import numpy as np

from auvdocking.optics.raster import RasterImage


def _header(magic: str, width: int, height: int) -> bytes:
    return f"{magic}\n{width} {height}\n255\n".encode("ascii")


def write_ppm(path: Union[str, Path], image: RasterImage) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(_header("P6", image.width, image.height))
        f.write(image.to_uint8().tobytes())
    return path


def write_pgm(path: Union[str, Path], gray: np.ndarray) -> Path:
    """Write an (H, W) array of values in [0, 1]."""
    gray = np.asarray(gray, dtype=float)
    pixels = np.floor(np.clip(gray, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(_header("P5", gray.shape[1], gray.shape[0]))
        f.write(pixels.tobytes())
    return path


def _parse_header(raw: bytes) -> Tuple[str, int, int, int, int]:
    """Magic, width, height, maxval and the offset of the pixel data."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("Truncated PNM header")
        tokens.append(raw[start:pos].decode("ascii"))
    # exactly one whitespace byte separates the header from the samples
    return tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3]), pos + 1


def read_pnm(path: Union[str, Path]) -> np.ndarray:
    """uint8 array, (H, W, 3) for P6 and (H, W) for P5."""
    raw = Path(path).read_bytes()
    magic, width, height, maxval, offset = _parse_header(raw)
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit files are supported (maxval {maxval})")
    channels = {"P6": 3, "P5": 1}.get(magic)
    if channels is None:
        raise ValueError(f"{path}: unsupported format {magic}")
    count = width * height * channels
    data = np.frombuffer(raw, dtype=np.uint8, count=count, offset=offset)
    return data.reshape(height, width, 3) if channels == 3 else data.reshape(height, width)


def read_ppm(path: Union[str, Path]) -> RasterImage:
    pixels = read_pnm(path)
    if pixels.ndim != 3:
        raise ValueError(f"{path} is not a colour image")
    return RasterImage.from_uint8(pixels)
