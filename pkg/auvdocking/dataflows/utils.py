import json
import logging
from pathlib import Path
from typing import Annotated, Any, Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from .config import get_config

logger = logging.getLogger(__name__)

SavePathType = Annotated[
    Optional[Union[str, Path]], "File path to save data. If None, data is not saved."
]


def save_output(data: pd.DataFrame, tag: str, save_path: SavePathType = None) -> None:
    """Write a frame as CSV with the configured float format (byte-stable across runs)."""
    if save_path:
        Path(save_path).parent.mkdir(parents=True, exist_ok=True)
        data.to_csv(
            save_path,
            index=False,
            float_format=get_config()["float_format"],
            lineterminator="\n",
        )
        logger.info("%s saved to %s", tag, save_path)


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [_to_builtin(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    return value


def to_json_line(record: Dict[str, Any]) -> str:
    """Serialize one record deterministically (sorted keys, no whitespace drift)."""
    return json.dumps(_to_builtin(record), sort_keys=True, separators=(",", ":"))


def write_jsonl(records: Iterable[Dict[str, Any]], save_path: Union[str, Path]) -> Path:
    path = Path(save_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(to_json_line(record))
            f.write("\n")
    return path


def read_jsonl(path: Union[str, Path]) -> List[Dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def derive_seed(*keys: int) -> int:
    """Stable child seed for a tuple of integer keys (base seed, scenario, episode...)."""
    seq = np.random.SeedSequence([int(k) for k in keys])
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
