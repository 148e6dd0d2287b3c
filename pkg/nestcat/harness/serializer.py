import csv
import logging
from typing import Any, Optional, TextIO

from ..core.core_types import ExperimentSummary, Problem, TrialRecord

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = (
    "trial",
    "seed",
    "encoder_error",
    "decode_success",
    "distortion_or_weight",
    "end_to_end",
    "identity_holds",
    "rate",
)


class TrialSerializer:
    """Pure serializer: TrialRecord -> CSV row with a fixed column order."""

    @staticmethod
    def format_value(x: Any) -> str:
        if x is None:
            return ""
        if isinstance(x, bool):
            return "1" if x else "0"
        if isinstance(x, float):
            return f"{x:.6f}"
        return str(x)

    @staticmethod
    def serialize(record: TrialRecord) -> list[str]:
        return [TrialSerializer.format_value(getattr(record, col)) for col in TRIAL_COLUMNS]

    @staticmethod
    def writer(out: TextIO) -> "csv.writer":
        return csv.writer(out, lineterminator="\n")


class SummaryAggregator:
    """Running totals over trial rows; everything in the summary is recomputable from the CSV."""

    def __init__(self):
        self.trials = 0
        self.encoder_errors = 0
        self.decode_attempts = 0
        self.decode_failures = 0
        self.identity_violations = 0
        self._measure_sum = 0.0
        self._measured = 0

    def add(self, record: TrialRecord) -> None:
        self.trials += 1
        if record.encoder_error:
            self.encoder_errors += 1
            return
        self._measure_sum += record.distortion_or_weight
        self._measured += 1
        if record.decode_success is not None:
            self.decode_attempts += 1
            if not record.decode_success:
                self.decode_failures += 1
        if record.identity_holds is False:
            self.identity_violations += 1

    @property
    def mean_measure(self) -> Optional[float]:
        return self._measure_sum / self._measured if self._measured else None

    def summary(self, prob, wall_clock_s: float) -> ExperimentSummary:
        code = prob.code
        return ExperimentSummary(
            problem=Problem(prob.kind),
            trials=self.trials,
            N=code.N,
            K=code.K,
            K1=code.K1,
            K2=code.K2,
            rate=prob.rate,
            mean_distortion_or_weight=self.mean_measure,
            encoder_error_rate=self.encoder_errors / self.trials if self.trials else 0.0,
            decode_failure_rate=self.decode_failures / self.decode_attempts if self.decode_attempts else None,
            identity_violations=self.identity_violations,
            bound=prob.bound,
            gap=prob.gap,
            targets=prob.targets,
            wall_clock_s=wall_clock_s,
        )


def write_summary(summary: ExperimentSummary, out: TextIO) -> None:
    writer = TrialSerializer.writer(out)
    writer.writerow(("key", "value"))
    writer.writerows(summary.as_rows())


def render_summary(summary: ExperimentSummary) -> str:
    rows = summary.as_rows()
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
