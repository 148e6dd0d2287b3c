import logging
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Optional

logger = logging.getLogger(__name__)


class DecodeKind(Enum):
    UNIQUE = auto()
    LIST = auto()
    FAILURE = auto()


class Strategy(str, Enum):
    """How source encoding and channel decoding reach the concatenated code."""

    JOINT = "joint"
    SEPARATE = "separate"


class Problem(str, Enum):
    SCSI = "scsi"
    CCSI = "ccsi"


@dataclass(slots=True)
class DecodeOutcome:
    kind: DecodeKind
    codewords: list[Any] = field(default_factory=list)
    radius_used: int = 0

    @property
    def ok(self) -> bool:
        return self.kind is not DecodeKind.FAILURE

    @property
    def best(self) -> Optional[Any]:
        return self.codewords[0] if self.codewords else None


@dataclass(slots=True)
class ClauseResult:
    clause: str
    passed: bool
    detail: str = ""


@dataclass(slots=True)
class VerificationReport:
    subject: str
    clauses: list[ClauseResult] = field(default_factory=list)

    def add(self, clause: str, passed: bool, detail: str = "") -> None:
        self.clauses.append(ClauseResult(clause=clause, passed=passed, detail=detail))
        if not passed:
            logger.info(f"[{self.subject}] clause {clause} failed: {detail}")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def failed(self) -> list[str]:
        return [c.clause for c in self.clauses if not c.passed]

    def render(self) -> str:
        lines = [self.subject]
        for c in self.clauses:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  ({c.clause}) {status}  {c.detail}".rstrip())
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


@dataclass(slots=True)
class TrialRecord:
    trial: int
    seed: int
    encoder_error: bool
    rate: float
    distortion_or_weight: float
    decode_success: Optional[bool] = None
    end_to_end: Optional[float] = None
    identity_holds: Optional[bool] = None


@dataclass(slots=True)
class ExperimentSummary:
    problem: Problem
    trials: int
    N: int
    K: int
    K1: int
    K2: int
    rate: float
    mean_distortion_or_weight: Optional[float]
    encoder_error_rate: float
    decode_failure_rate: Optional[float]
    identity_violations: int
    bound: float
    gap: float
    targets: dict[str, float] = field(default_factory=dict)
    wall_clock_s: float = 0.0

    def as_rows(self) -> list[tuple[str, str]]:
        def fmt(x: Any) -> str:
            if x is None:
                return ""
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        rows = [
            ("problem", self.problem.value),
            ("trials", fmt(self.trials)),
            ("N", fmt(self.N)),
            ("K", fmt(self.K)),
            ("K1", fmt(self.K1)),
            ("K2", fmt(self.K2)),
            ("rate_K1_over_N", fmt(self.rate)),
            ("rate_K_over_N", fmt(self.K / self.N)),
            ("rate_K2_over_N", fmt(self.K2 / self.N)),
            ("mean_distortion_or_weight", fmt(self.mean_distortion_or_weight)),
            ("encoder_error_rate", fmt(self.encoder_error_rate)),
            ("decode_failure_rate", fmt(self.decode_failure_rate)),
            ("identity_violations", fmt(self.identity_violations)),
            ("bound", fmt(self.bound)),
            ("gap", fmt(self.gap)),
        ]
        rows.extend((f"target_{k}", fmt(v)) for k, v in self.targets.items())
        rows.append(("wall_clock_s", fmt(self.wall_clock_s)))
        return rows
