import asyncio
import logging
import os
import time
from pathlib import Path
from typing import Optional, TextIO, Union

from dotenv import load_dotenv

from ..core.concat import verify_preservation
from ..core.core_types import ExperimentSummary, Problem, TrialRecord, VerificationReport
from ..core.errors import UsageError
from ..core.linear_code import code_sum
from ..core.nested_cyclic import NestedCyclicCode, verify_nested, verify_nested_views
from ..side_info.problems import ccsi_problem, run_trial, scsi_problem
from .config import CodeDescription, ExperimentConfig, build_concat, build_outer, build_subcodes
from .serializer import TRIAL_COLUMNS, SummaryAggregator, TrialSerializer, write_summary

load_dotenv()

logger = logging.getLogger(__name__)


def build_problem(config: ExperimentConfig):
    """Concatenated code plus the CCSI or SCSI problem wrapped around it."""
    exp = config.experiment
    code = build_concat(config.code)
    nu = config.code.concat.nu
    if exp.problem is Problem.CCSI:
        return ccsi_problem(code, w=exp.w, p=exp.p, strategy=exp.strategy, nu=nu)
    return scsi_problem(code, d=exp.d, p=exp.p, strategy=exp.strategy, nu=nu)


class ExperimentManager:
    """Owns the trial queue, the worker pool and the single CSV writer."""

    def __init__(self, threads: Optional[int] = None, queue_max: Optional[int] = None):
        self.threads = threads if threads is not None else int(os.getenv("NESTCAT_THREADS", "1"))
        self._queue_max = queue_max if queue_max is not None else int(os.getenv("NESTCAT_QUEUE_MAX", "256"))
        if self.threads < 1:
            raise UsageError(f"NESTCAT_THREADS must be >= 1, got {self.threads}")

    async def _producer(self, jobs: asyncio.Queue, trials: int) -> None:
        for trial in range(trials):
            # bounded queue applies backpressure to trial generation
            await jobs.put(trial)
        for _ in range(self.threads):
            await jobs.put(None)

    async def _worker(self, prob, master_seed: int, jobs: asyncio.Queue, results: asyncio.Queue) -> None:
        while True:
            trial = await jobs.get()
            if trial is None:
                return
            try:
                record = await asyncio.to_thread(run_trial, prob, master_seed, trial)
            except Exception as e:
                logger.error(f"trial {trial} failed: {e}")
                raise
            await results.put(record)

    async def _writer(self, results: asyncio.Queue, trials: int, out: TextIO, aggregator: SummaryAggregator) -> None:
        # Single-writer invariant: rows leave in trial order whatever the worker count.
        writer = TrialSerializer.writer(out)
        writer.writerow(TRIAL_COLUMNS)
        pending: dict[int, TrialRecord] = {}
        next_trial = 0
        while next_trial < trials:
            record = await results.get()
            pending[record.trial] = record
            while next_trial in pending:
                ready = pending.pop(next_trial)
                writer.writerow(TrialSerializer.serialize(ready))
                aggregator.add(ready)
                next_trial += 1

    async def run(self, prob, master_seed: int, trials: int, out: TextIO) -> ExperimentSummary:
        if trials < 1:
            raise UsageError("trials must be >= 1")
        logger.info(f"run start: {prob.kind.value} N={prob.code.N} K1={prob.code.K1} trials={trials} threads={self.threads}")
        start = time.perf_counter()
        await asyncio.to_thread(prob.pipeline.warm_up)
        jobs: asyncio.Queue = asyncio.Queue(maxsize=self._queue_max)
        results: asyncio.Queue = asyncio.Queue(maxsize=self._queue_max)
        aggregator = SummaryAggregator()
        try:
            async with asyncio.TaskGroup() as tg:
                tg.create_task(self._producer(jobs, trials))
                for _ in range(self.threads):
                    tg.create_task(self._worker(prob, master_seed, jobs, results))
                tg.create_task(self._writer(results, trials, out, aggregator))
        except ExceptionGroup as eg:
            raise eg.exceptions[0] from None
        elapsed = time.perf_counter() - start
        logger.info(f"run finished: {trials} trials in {elapsed:.2f} s")
        return aggregator.summary(prob, elapsed)


def summary_path(out: Union[str, Path]) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".summary.csv")


def run_experiment(
    config: ExperimentConfig,
    out: TextIO,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> ExperimentSummary:
    """Run every trial of ``config``, streaming the trial CSV to ``out``."""
    prob = build_problem(config)
    manager = ExperimentManager(threads=threads)
    n_trials = trials if trials is not None else config.experiment.trials
    master_seed = seed if seed is not None else config.experiment.seed
    return asyncio.run(manager.run(prob, master_seed, n_trials, out))


def save_summary(summary: ExperimentSummary, out: Union[str, Path]) -> Path:
    path = summary_path(out)
    with path.open("w", newline="") as fh:
        write_summary(summary, fh)
    return path


def verify_description(desc: CodeDescription) -> list[VerificationReport]:
    """Run every structural check the description supports."""
    reports = []
    outer = build_outer(desc) if desc.outer is not None else None
    if desc.subcodes is not None:
        c, c1, c2 = build_subcodes(desc)
        if c is None:
            if isinstance(outer, NestedCyclicCode):
                c = outer.c
            elif outer is not None:
                c = outer
            else:
                c = code_sum(c1, c2)
        reports.append(verify_nested_views(c, c1, c2, subject="explicit subcodes"))
    elif isinstance(outer, NestedCyclicCode):
        reports.append(verify_nested(outer))
    if desc.concat is not None:
        reports.append(verify_preservation(build_concat(desc, check_inner=False)))
    return reports
