# auvdocking/guidance/__init__.py

from .autopilot import Autopilot, SteeringCommand, depth_to_pitch
from .dubins import DubinsPath, line_path, plan_dubins
from .fsm import DockingStage, StageEvents, docking_fsm_step
from .fusion import focus_of_expansion, fuse_guidance
from .ilos import IlosState, ilos_heading, remaining_length
from .waypoints import DockDrift, DockEstimator, DockPose, Waypoint, stage_waypoints

__all__ = [
    "Autopilot",
    "SteeringCommand",
    "depth_to_pitch",
    "DubinsPath",
    "line_path",
    "plan_dubins",
    "DockingStage",
    "StageEvents",
    "docking_fsm_step",
    "focus_of_expansion",
    "fuse_guidance",
    "IlosState",
    "ilos_heading",
    "remaining_length",
    "DockDrift",
    "DockEstimator",
    "DockPose",
    "Waypoint",
    "stage_waypoints",
]
