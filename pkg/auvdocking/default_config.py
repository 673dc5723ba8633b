import os

_PROJECT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "."))
_RESULTS_DIR = os.getenv("AUVDOCKING_RESULTS_DIR", "./results")

DEFAULT_CONFIG = {
    "results_dir": _RESULTS_DIR,
    "log_level": os.getenv("AUVDOCKING_LOG_LEVEL", "INFO"),
    # Loop rates
    "dynamics_rate_hz": 100.0,
    "camera_rate_hz": 10.0,
    # Vehicle model
    "hydro_params_file": os.path.join(_PROJECT_DIR, "configs", "iver3.json"),
    # Detector weights
    "weights_path": os.path.join(_RESULTS_DIR, "weights", "student.tnw"),
    "teacher_weights_path": os.path.join(_RESULTS_DIR, "weights", "teacher.tnw"),
    # Bench settings
    "bench_workers": int(os.getenv("AUVDOCKING_WORKERS", "1")),
    "trajectory_log_rate_hz": 10.0,
    "float_format": "%.6f",
    # Detector bootstrap when no weights file exists
    "bootstrap_dataset_size": 1200,
    "bootstrap_epochs": 30,
    # Progress bars
    "progress": True,
}
