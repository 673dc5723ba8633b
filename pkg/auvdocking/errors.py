"""Exception hierarchy shared by every auvdocking module."""

from typing import Any, Dict, Optional


class DockingSimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(DockingSimError):
    """Raised when a scenario, parameter file or CLI option is invalid."""


class GimbalLock(DockingSimError):
    """Raised when |pitch| reaches the Euler-angle singularity guard."""

    def __init__(self, theta: float, guard: float):
        super().__init__(
            f"Pitch {theta:.6f} rad is within {guard:g} rad of the Euler singularity"
        )
        self.theta = theta
        self.guard = guard


class NumericalDivergence(DockingSimError):
    """Raised when an integration step produces non-finite state entries."""

    def __init__(self, message: str, state: Any = None, episode_seed: Optional[int] = None):
        super().__init__(message)
        self.state = state
        self.episode_seed = episode_seed

    def with_context(self, episode_seed: int, stage: str, t: float) -> "NumericalDivergence":
        err = NumericalDivergence(
            f"{self.args[0]} (episode seed {episode_seed}, stage {stage}, t={t:.2f}s)",
            state=self.state,
            episode_seed=episode_seed,
        )
        return err


class DegeneratePath(DockingSimError):
    """Start and goal poses coincide; the planner returns a zero-length path."""


class InvalidTransition(DockingSimError):
    """Raised for a (stage, events) pair the docking state machine does not define."""

    def __init__(self, stage: Any, events: Any):
        super().__init__(f"No transition from {stage} on {events}")
        self.stage = stage
        self.events = events


class BehindCamera(DockingSimError):
    """The projected point lies at or behind the image plane."""


class ShapeMismatch(DockingSimError):
    """Image dimensions do not match the network input shape."""


class NonFiniteLoss(DockingSimError):
    """Training produced a NaN/inf loss."""

    def __init__(self, epoch: int, batch: int, diagnostics: Dict[str, float]):
        details = ", ".join(f"{k}={v:.4g}" for k, v in diagnostics.items())
        super().__init__(f"Non-finite loss at epoch {epoch}, batch {batch}: {details}")
        self.epoch = epoch
        self.batch = batch
        self.diagnostics = diagnostics


class BadRatios(DockingSimError):
    """Split ratios are negative or do not sum to one."""


class NoConvergence(DockingSimError):
    """Bisection did not reach its tolerance within its iteration limit."""
