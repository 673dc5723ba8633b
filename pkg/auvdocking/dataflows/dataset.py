"""Synthetic detector datasets: balanced generation, seeded splits and augmentation.

Directory layout written by ``write_dataset``::

    <out>/images/<id>.ppm
    <out>/manifest.jsonl      one ManifestRecord per line
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from auvdocking.detection.detectors import to_input
from auvdocking.detection.tinynet import NET_INPUT
from auvdocking.detection.trainer import ArraySplit
from auvdocking.detection.types import ABSENT_POSITION
from auvdocking.dynamics.vehicle import VehicleState
from auvdocking.errors import BadRatios
from auvdocking.models.results import ManifestRecord
from auvdocking.models.scenario import CameraModel, RenderParams, WaterModel
from auvdocking.optics.camera import project, unproject
from auvdocking.optics.raster import RasterImage
from auvdocking.optics.scene import add_camera_noise, render_scene
from auvdocking.optics.water import attenuate

from .config import get_config
from .image_io import read_ppm, write_ppm
from .utils import derive_seed, read_jsonl, write_jsonl

logger = logging.getLogger(__name__)

RANGE_LIMITS = (2.0, 15.0)
CAMERA_DEPTH = 5.0
DEFAULT_RATIOS = (0.7, 0.2, 0.1)
SPLIT_NAMES = ("train", "val", "test")

# name, kind, parameters
DEFAULT_AUGMENTATIONS: List[Tuple[str, str, Dict[str, float]]] = [
    ("shift_right", "translate", {"dx": 0.05, "dy": 0.0}),
    ("shift_left", "translate", {"dx": -0.05, "dy": 0.0}),
    ("shift_down", "translate", {"dx": 0.0, "dy": 0.05}),
    ("shift_up", "translate", {"dx": 0.0, "dy": -0.05}),
    ("rotate_ccw", "rotate", {"degrees": 10.0}),
    ("rotate_cw", "rotate", {"degrees": -10.0}),
    ("hflip", "hflip", {}),
    ("dim", "brightness", {"gain": 0.8}),
    ("brighten", "brightness", {"gain": 1.2}),
    ("channel_jitter", "channel_gain", {"spread": 0.1}),
]


@dataclass
class LabeledFrame:
    id: str
    image: RasterImage
    present: int
    x: float
    y: float
    seed: int
    water: str
    range: float
    augmentation: Optional[str] = None
    source: Optional[str] = None

    def __post_init__(self):
        if self.source is None:
            self.source = self.id

    @property
    def label(self) -> Tuple[float, float, float]:
        return (float(self.present), self.x, self.y)

    def to_record(self, split: str, path: str) -> ManifestRecord:
        return ManifestRecord(
            id=self.id,
            path=path,
            split=split,
            present=self.present,
            x=self.x,
            y=self.y,
            seed=self.seed,
            water=self.water,
            range=self.range,
            augmentation=self.augmentation,
            source=self.source,
        )


@dataclass
class DatasetSplit:
    train: List[LabeledFrame] = field(default_factory=list)
    val: List[LabeledFrame] = field(default_factory=list)
    test: List[LabeledFrame] = field(default_factory=list)
    ratios: Tuple[float, float, float] = DEFAULT_RATIOS

    def parts(self) -> Dict[str, List[LabeledFrame]]:
        return {"train": self.train, "val": self.val, "test": self.test}

    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.val), len(self.test)


def _render_frame(
    index: int,
    positive: bool,
    water: WaterModel,
    camera: CameraModel,
    base_seed: int,
    params: RenderParams,
    range_limits: Tuple[float, float],
) -> LabeledFrame:
    frame_seed = derive_seed(base_seed, index)
    rng = np.random.default_rng(frame_seed)
    heading = rng.uniform(-math.pi, math.pi)
    state = VehicleState(eta1=[0.0, 0.0, CAMERA_DEPTH], eta2=[0.0, 0.0, heading])
    d = float(rng.uniform(*range_limits))

    if positive:
        u = rng.uniform(0.0, camera.width - 1.0)
        v = rng.uniform(0.0, camera.height - 1.0)
        beacon = unproject(u, v, d, state, camera)
        proj = project(beacon, state, camera)
        x, y = (float(np.clip(c, 0.0, 1.0)) for c in proj.normalized(camera))
        scene = render_scene(camera, (proj.u, proj.v), proj.range, water, rng, params)
    else:
        x, y = ABSENT_POSITION
        scene = render_scene(camera, None, d, water, rng, params)

    image = add_camera_noise(attenuate(scene, d, water), params.noise_sigma, rng)
    return LabeledFrame(
        id=f"f{index:06d}",
        image=image,
        present=int(positive),
        x=x,
        y=y,
        seed=frame_seed,
        water=water.label,
        range=d,
    )


def generate(
    n: int,
    waters: Union[WaterModel, Sequence[WaterModel]],
    camera: Optional[CameraModel] = None,
    seed: int = 0,
    params: Optional[RenderParams] = None,
    range_limits: Tuple[float, float] = RANGE_LIMITS,
    progress: Optional[bool] = None,
) -> List[LabeledFrame]:
    """Even indices are positives, odd indices negatives; each pair shares a water model."""
    if n < 1:
        raise ValueError("generate needs n >= 1")
    if isinstance(waters, WaterModel):
        waters = [waters]
    camera = camera or CameraModel()
    params = params or RenderParams()
    if progress is None:
        progress = get_config()["progress"]

    frames = []
    for i in tqdm(range(n), desc="render", disable=not progress):
        water = waters[(i // 2) % len(waters)]
        frames.append(_render_frame(i, i % 2 == 0, water, camera, seed, params, range_limits))
    logger.info("Generated %d frames (%d positive)", n, sum(f.present for f in frames))
    return frames


def _warp(data: np.ndarray, rotation: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Nearest-neighbour warp p' = R (p - c) + c + t; uncovered pixels take the channel median."""
    h, w, _ = data.shape
    centre = np.array([(w - 1) / 2.0, (h - 1) / 2.0])
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    out_pts = np.stack([xx.ravel(), yy.ravel()])
    src = rotation.T @ (out_pts - (centre + shift)[:, None]) + centre[:, None]
    sx, sy = np.rint(src).astype(int)
    valid = (sx >= 0) & (sx < w) & (sy >= 0) & (sy < h)

    fill = np.median(data.reshape(-1, 3), axis=0)
    out = np.empty((h * w, 3))
    out[:] = fill
    out[valid] = data[sy[valid], sx[valid]]
    return out.reshape(h, w, 3)


def _rotation(degrees: float) -> np.ndarray:
    a = math.radians(degrees)
    return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])


def _apply(frame: LabeledFrame, kind: str, options: Dict[str, float], rng: np.random.Generator):
    """Transformed pixel data and (present, x, y) label."""
    data = frame.image.data
    h, w, _ = data.shape
    present, x, y = frame.present, frame.x, frame.y

    if kind in ("translate", "rotate"):
        if kind == "translate":
            rotation = np.eye(2)
            shift = np.array([options["dx"] * (w - 1), options["dy"] * (h - 1)])
        else:
            rotation = _rotation(options["degrees"])
            shift = np.zeros(2)
        out = _warp(data, rotation, shift)
        if present:
            centre = np.array([(w - 1) / 2.0, (h - 1) / 2.0])
            p = rotation @ (np.array([x * (w - 1), y * (h - 1)]) - centre) + centre + shift
            x, y = p[0] / (w - 1), p[1] / (h - 1)
            if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                present, (x, y) = 0, ABSENT_POSITION
        return out, (present, x, y)
    if kind == "hflip":
        return data[:, ::-1, :].copy(), (present, 1.0 - x if present else x, y)
    if kind == "brightness":
        return np.clip(data * options["gain"], 0.0, 1.0), (present, x, y)
    if kind == "channel_gain":
        spread = options["spread"]
        gains = rng.uniform(1.0 - spread, 1.0 + spread, 3)
        return np.clip(data * gains, 0.0, 1.0), (present, x, y)
    raise ValueError(f"Unknown augmentation kind {kind!r}")


def augment(
    frame: LabeledFrame,
    augmentations: Sequence[Tuple[str, str, Dict[str, float]]] = DEFAULT_AUGMENTATIONS,
) -> List[LabeledFrame]:
    """One variant per augmentation; variants pushing the beacon out of frame are labelled absent."""
    variants = []
    for k, (name, kind, options) in enumerate(augmentations):
        rng = np.random.default_rng(derive_seed(frame.seed, k))
        data, (present, x, y) = _apply(frame, kind, options, rng)
        variants.append(
            replace(
                frame,
                id=f"{frame.source}_a{k:02d}",
                image=RasterImage(data),
                present=int(present),
                x=float(x),
                y=float(y),
                augmentation=name,
                source=frame.source,
            )
        )
    return variants


def split(
    frames: Sequence[LabeledFrame],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> DatasetSplit:
    """Seeded shuffle, then partition into train/val/test."""
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0.0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise BadRatios(f"Split ratios must be three non-negative numbers summing to 1, got {ratios}")

    n = len(frames)
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(n * ratios[0]))
    n_val = min(int(round(n * ratios[1])), n - n_train)
    shuffled = [frames[i] for i in order]
    return DatasetSplit(
        train=shuffled[:n_train],
        val=shuffled[n_train : n_train + n_val],
        test=shuffled[n_train + n_val :],
        ratios=ratios,
    )


def augment_split(dataset: DatasetSplit) -> DatasetSplit:
    """Originals plus their variants for train and val; test stays untouched."""

    def expand(frames):
        out = []
        for frame in frames:
            out.append(frame)
            out.extend(augment(frame))
        return out

    return DatasetSplit(
        train=expand(dataset.train),
        val=expand(dataset.val),
        test=list(dataset.test),
        ratios=dataset.ratios,
    )


def build_dataset(
    n: int,
    waters: Union[WaterModel, Sequence[WaterModel]],
    camera: Optional[CameraModel] = None,
    seed: int = 0,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    augmented: bool = True,
    progress: Optional[bool] = None,
) -> DatasetSplit:
    frames = generate(n, waters, camera, seed=seed, progress=progress)
    dataset = split(frames, ratios, seed=derive_seed(seed, n))
    return augment_split(dataset) if augmented else dataset


def write_dataset(dataset: DatasetSplit, out_dir: Union[str, Path]) -> Path:
    out_dir = Path(out_dir)
    records = []
    for split_name, frames in dataset.parts().items():
        for frame in frames:
            rel = f"images/{frame.id}.ppm"
            write_ppm(out_dir / rel, frame.image)
            records.append(frame.to_record(split_name, rel).model_dump(mode="json"))
    manifest = write_jsonl(records, out_dir / "manifest.jsonl")
    logger.info("Wrote %d frames to %s", len(records), out_dir)
    return manifest


def read_manifest(out_dir: Union[str, Path]) -> List[ManifestRecord]:
    return [ManifestRecord(**r) for r in read_jsonl(Path(out_dir) / "manifest.jsonl")]


def manifest_frame(out_dir: Union[str, Path]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in read_manifest(out_dir)])


def to_arrays(frames: Sequence[LabeledFrame], input_shape=NET_INPUT) -> ArraySplit:
    inputs = np.stack([to_input(f.image, input_shape) for f in frames]) if frames else np.zeros((0, *input_shape))
    labels = np.array([f.label for f in frames], dtype=float).reshape(-1, 3)
    return ArraySplit(inputs, labels)


def load_split(out_dir: Union[str, Path], split_name: str, input_shape=NET_INPUT) -> ArraySplit:
    out_dir = Path(out_dir)
    records = [r for r in read_manifest(out_dir) if r.split == split_name]
    if not records:
        return ArraySplit(np.zeros((0, *input_shape)), np.zeros((0, 3)))
    inputs = np.stack([to_input(read_ppm(out_dir / r.path), input_shape) for r in records])
    labels = np.array([[r.present, r.x, r.y] for r in records], dtype=float)
    return ArraySplit(inputs, labels)


def uniformity_chi2(frames: Sequence[LabeledFrame], bins: int = 8) -> float:
    """Chi-square statistic of positive-label positions against a uniform bins x bins grid."""
    pos = np.array([(f.x, f.y) for f in frames if f.present], dtype=float).reshape(-1, 2)
    counts, _, _ = np.histogram2d(pos[:, 0], pos[:, 1], bins=bins, range=[[0.0, 1.0], [0.0, 1.0]])
    expected = len(pos) / bins**2
    return float(((counts - expected) ** 2 / expected).sum())
