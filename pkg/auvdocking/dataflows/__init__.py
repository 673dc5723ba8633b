from .config import get_config, initialize_config, reset_config, set_config
from .image_io import read_pnm, read_ppm, write_pgm, write_ppm
from .utils import (
    derive_seed,
    read_jsonl,
    save_output,
    to_json_line,
    write_jsonl,
)

__all__ = [
    # Configuration
    "get_config",
    "initialize_config",
    "reset_config",
    "set_config",
    # Image files
    "read_pnm",
    "read_ppm",
    "write_pgm",
    "write_ppm",
    # Tabular and JSONL output
    "derive_seed",
    "read_jsonl",
    "save_output",
    "to_json_line",
    "write_jsonl",
]
