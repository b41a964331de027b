"""
Schema definitions for scheduling and parallel runs.
"""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, computed_field, model_validator

from ..utils.errors import MatrixFormatError

LOAD_TOLERANCE = 1e-9


class Schedule(BaseModel):
    """Assignment of subtasks 1..n to workers 1..p with predicted per-worker load."""
    assignment: List[int] = Field(description="N_j: worker of subtask j, 1-based")
    predicted_load: List[float] = Field(description="sigma_k for k = 1..p")
    p: int = Field(ge=1)
    strategy: str = "estimated"

    @model_validator(mode='after')
    def validate_assignment(self):
        """Every subtask goes to a worker in 1..p; there are p loads."""
        if not self.assignment:
            raise ValueError("schedule must assign at least one subtask")
        if len(self.predicted_load) != self.p:
            raise ValueError(f"expected {self.p} worker loads, got {len(self.predicted_load)}")
        for j, worker in enumerate(self.assignment, start=1):
            if not 1 <= worker <= self.p:
                raise ValueError(f"subtask {j} assigned to worker {worker}, outside 1..{self.p}")
        if any(load < 0 for load in self.predicted_load):
            raise ValueError("predicted loads must be non-negative")
        return self

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def makespan(self) -> float:
        return max(self.predicted_load)

    def tasks_for(self, k: int) -> List[int]:
        """Subtasks of worker ``k`` in ascending order."""
        if not 1 <= k <= self.p:
            raise ValueError(f"worker index {k} out of range 1..{self.p}")
        return [j for j, worker in enumerate(self.assignment, start=1) if worker == k]

    def check_loads(self, f_star: List[float], tolerance: float = LOAD_TOLERANCE) -> None:
        """
        Verify sigma_k = sum of f_star_j over the subtasks of worker k.

        Loads are otherwise taken as given, e.g. from a schedule dump.

        Raises:
            ValueError: if f_star has the wrong length or a load disagrees with it
        """
        if len(f_star) != self.n:
            raise ValueError(f"expected {self.n} subtask sizes, got {len(f_star)}")
        for k, load in enumerate(self.predicted_load, start=1):
            expected = math.fsum(f_star[j - 1] for j in self.tasks_for(k))
            if abs(load - expected) > tolerance:
                raise ValueError(f"worker {k} load {load} does not match its subtasks' total {expected}")

    def to_dump(self) -> str:
        return format_schedule(self)


class RunReport(BaseModel):
    """Per-worker wall times and covering counts of one parallel run."""
    p: int = Field(ge=1)
    per_worker_time: List[float]
    per_worker_count: List[int]
    estimation_seconds: float = Field(default=0.0, ge=0.0)
    strategy: Optional[str] = None

    @model_validator(mode='after')
    def validate_workers(self):
        if len(self.per_worker_time) != self.p or len(self.per_worker_count) != self.p:
            raise ValueError(f"expected {self.p} per-worker entries")
        if any(t < 0 for t in self.per_worker_time):
            raise ValueError("worker times must be non-negative")
        if any(c < 0 for c in self.per_worker_count):
            raise ValueError("worker counts must be non-negative")
        return self

    @computed_field
    @property
    def T(self) -> float:
        """T(p) = max_k T_k(p)."""
        return max(self.per_worker_time)

    @computed_field
    @property
    def T_sigma(self) -> float:
        """T_sigma(p) = sum_k T_k(p)."""
        return math.fsum(self.per_worker_time)

    @computed_field
    @property
    def total_coverings(self) -> int:
        return sum(self.per_worker_count)


class ScalingMetrics(BaseModel):
    """Speedup, efficiency and realized load levels relative to a one-worker run."""
    p: int = Field(ge=1)
    S: float = Field(gt=0.0)
    E: float = Field(gt=0.0)
    s_k: List[float]

    @model_validator(mode='after')
    def validate_levels(self):
        """Load levels sum to 1."""
        if len(self.s_k) != self.p:
            raise ValueError(f"expected {self.p} load levels, got {len(self.s_k)}")
        if abs(math.fsum(self.s_k) - 1.0) > LOAD_TOLERANCE:
            raise ValueError(f"load levels sum to {math.fsum(self.s_k)}, expected 1")
        return self

    @computed_field
    @property
    def load_spread(self) -> float:
        """max_k s_k / min_k s_k; infinite when some worker took no time."""
        low = min(self.s_k)
        return math.inf if low == 0 else max(self.s_k) / low

    @computed_field
    @property
    def ideal_speedup(self) -> int:
        return self.p


def format_schedule(schedule: Schedule) -> str:
    """n lines ``"j N_j"`` followed by p lines ``"k sigma_k"``."""
    lines = [f"{j} {worker}" for j, worker in enumerate(schedule.assignment, start=1)]
    lines += [f"{k} {load:.15f}" for k, load in enumerate(schedule.predicted_load, start=1)]
    return "\n".join(lines) + "\n"


def parse_schedule(text: str, n: int, f_star: Optional[List[float]] = None) -> Schedule:
    """
    Parse a schedule dump of ``n`` subtasks.

    When ``f_star`` is given, the worker loads must agree with it.

    Raises:
        MatrixFormatError: on malformed lines, indices out of sequence, or too few lines
    """
    lines = [(number, line) for number, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if len(lines) <= n:
        raise MatrixFormatError(f"expected {n} assignment lines plus worker loads, got {len(lines)} lines",
                                len(lines) + 1)

    assignment: List[int] = []
    loads: List[float] = []
    for position, (number, line) in enumerate(lines):
        parts = line.split()
        if len(parts) != 2:
            raise MatrixFormatError(f"expected two fields, got {line!r}", number)
        try:
            index = int(parts[0])
            value = int(parts[1]) if position < n else float(parts[1])
        except ValueError:
            raise MatrixFormatError(f"malformed schedule line {line!r}", number)
        expected = position + 1 if position < n else position - n + 1
        if index != expected:
            raise MatrixFormatError(f"expected index {expected}, got {index}", number)
        if position < n:
            assignment.append(value)
        else:
            loads.append(value)

    try:
        schedule = Schedule(assignment=assignment, predicted_load=loads, p=len(loads))
        if f_star is not None:
            schedule.check_loads(f_star)
    except ValueError as e:
        raise MatrixFormatError(str(e), lines[-1][0])
    return schedule
