from enum import Enum


class BenchPreset(str, Enum):
    T1 = "t1"
    T2 = "t2"
    T3 = "t3"
    ALL = "all"


class WaterType(str, Enum):
    IC = "IC"
    C5 = "5C"
    C7 = "7C"


class Architecture(str, Enum):
    TEACHER = "teacher"
    STUDENT = "student"


class TrainingPreset(str, Enum):
    DESK = "desk"
    FULLSCALE = "fullscale"
