"""Step-size schedules."""

from .step_size import (
    ScheduleError,
    ScheduleKind,
    StepSchedule,
    Summability,
    classify_summability,
    p_sum_upper_bound,
    partial_p_sum,
    value,
)

__all__ = [
    "ScheduleError",
    "ScheduleKind",
    "StepSchedule",
    "Summability",
    "classify_summability",
    "p_sum_upper_bound",
    "partial_p_sum",
    "value",
]
