"""
The two dual side-information problems over one concatenated nested code.

CCSI (channel coding, state S known at the encoder): the message i1 picks the
coset c1 + C_eq2; the encoder quantizes S + c1 onto C_eq2 and transmits the
residual E = S + c1 + c2 under a weight constraint. The channel adds S and
BSC(p) noise Z, so the decoder sees c1 + c2 + Z.

SCSI (source coding, side information Y = W + S at the decoder): the encoder
quantizes W onto C_eq and stores only the C_eq1 part i1; the decoder adds c1 to
Y and channel-decodes onto C_eq2.

Subtraction is addition over GF(2) throughout.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import galois
import numpy as np

from ..core.concat import ConcatenatedNestedCode
from ..core.core_types import Problem, Strategy, TrialRecord
from ..core.errors import UsageError
from ..core.finite_field import GF2, to_ints
from .bounds import binary_convolution, binary_entropy, ccsi_rate_targets, gp_bound, scsi_rate_targets, wz_bound
from .channel import bernoulli, bsc_apply, uniform_bits, weight_fraction
from .pipeline import SideInfoPipeline

logger = logging.getLogger(__name__)


def _check_fraction(name: str, x: float, closed_zero: bool) -> None:
    ok = (0.0 <= x < 0.5) if closed_zero else (0.0 < x <= 0.5)
    if not ok:
        raise UsageError(f"{name}={x} outside {'[0, 1/2)' if closed_zero else '(0, 1/2]'}")


@dataclass(frozen=True, eq=False)
class _SideInfoProblem:
    code: ConcatenatedNestedCode
    p: float
    strategy: Strategy
    nu: int

    @property
    def rate(self) -> float:
        return self.code.K1 / self.code.N

    @cached_property
    def pipeline(self) -> SideInfoPipeline:
        return SideInfoPipeline(self.code, self.strategy, self.nu)


@dataclass(frozen=True, eq=False)
class CCSIProblem(_SideInfoProblem):
    w: float = 0.5
    kind = Problem.CCSI

    def __post_init__(self) -> None:
        _check_fraction("W", self.w, closed_zero=False)
        _check_fraction("p", self.p, closed_zero=True)

    @property
    def bound(self) -> float:
        return gp_bound(self.w, self.p)

    @property
    def feasible(self) -> bool:
        return self.rate <= binary_entropy(self.w) - binary_entropy(self.p)

    @property
    def gap(self) -> float:
        return self.bound - self.rate

    @property
    def targets(self) -> dict[str, float]:
        return ccsi_rate_targets(self.w, self.p)


@dataclass(frozen=True, eq=False)
class SCSIProblem(_SideInfoProblem):
    d: float = 0.5
    kind = Problem.SCSI

    def __post_init__(self) -> None:
        _check_fraction("D", self.d, closed_zero=False)
        _check_fraction("p", self.p, closed_zero=True)

    @property
    def bound(self) -> float:
        return wz_bound(self.d, self.p)

    @property
    def feasible(self) -> bool:
        return self.rate >= binary_entropy(binary_convolution(self.p, self.d)) - binary_entropy(self.d)

    @property
    def gap(self) -> float:
        return self.rate - self.bound

    @property
    def targets(self) -> dict[str, float]:
        return scsi_rate_targets(self.d, self.p)


def ccsi_problem(code: ConcatenatedNestedCode, w: float, p: float, strategy: Strategy = Strategy.JOINT, nu: int = 1) -> CCSIProblem:
    return CCSIProblem(code=code, p=p, strategy=Strategy(strategy), nu=nu, w=w)


def scsi_problem(code: ConcatenatedNestedCode, d: float, p: float, strategy: Strategy = Strategy.JOINT, nu: int = 1) -> SCSIProblem:
    return SCSIProblem(code=code, p=p, strategy=Strategy(strategy), nu=nu, d=d)


@dataclass(slots=True)
class CCSIEncoding:
    c1: galois.FieldArray
    c2: galois.FieldArray
    e: galois.FieldArray
    weight: float
    encoder_error: bool

    @property
    def x(self) -> Optional[galois.FieldArray]:
        """The transmitted word, withheld on an encoder error."""
        return None if self.encoder_error else self.e


@dataclass(slots=True)
class SCSIEncoding:
    i1: Optional[galois.FieldArray]
    c: galois.FieldArray
    distortion: float
    encoder_error: bool


@dataclass(slots=True)
class SCSIDecoding:
    ok: bool
    w_hat: Optional[galois.FieldArray] = None
    c2: Optional[galois.FieldArray] = None


def ccsi_encode(prob: CCSIProblem, i1, s) -> CCSIEncoding:
    """c1 from i1, quantize S + c1 onto C_eq2, E = S + c1 + c2, then the weight check."""
    pipe = prob.pipeline
    state = GF2.gf(to_ints(s))
    if state.shape[-1] != prob.code.N:
        raise UsageError(f"state has length {state.shape[-1]}, expected N={prob.code.N}")
    c1 = pipe.message_codeword(i1)
    c2, _ = pipe.bin_quantizer.run(state + c1)
    e = state + c1 + c2
    weight = weight_fraction(e)
    error = weight > prob.w
    if error:
        logger.debug(f"ccsi encoder error: weight {weight:.4f} > W={prob.w}")
    return CCSIEncoding(c1=c1, c2=c2, e=e, weight=weight, encoder_error=error)


def ccsi_decode(prob: CCSIProblem, y) -> Optional[galois.FieldArray]:
    """Recover i1 from Y = c1 + c2 + Z; None on a decode failure."""
    pipe = prob.pipeline
    outcome = pipe.full_decoder.run(GF2.gf(to_ints(y)))
    if not outcome.ok:
        logger.debug("ccsi decode failure")
        return None
    return pipe.extract.run(outcome.best)


def scsi_encode(prob: SCSIProblem, wseq) -> SCSIEncoding:
    """Quantize W onto C_eq; keep i1 if the distortion meets D."""
    pipe = prob.pipeline
    source = GF2.gf(to_ints(wseq))
    if source.shape[-1] != prob.code.N:
        raise UsageError(f"source has length {source.shape[-1]}, expected N={prob.code.N}")
    c, distance = pipe.full_quantizer.run(source)
    distortion = distance / prob.code.N
    if distortion > prob.d:
        logger.debug(f"scsi encoder error: distortion {distortion:.4f} > D={prob.d}")
        return SCSIEncoding(i1=None, c=c, distortion=distortion, encoder_error=True)
    return SCSIEncoding(i1=pipe.extract.run(c), c=c, distortion=distortion, encoder_error=False)


def scsi_decode(prob: SCSIProblem, i1, y) -> SCSIDecoding:
    """W_hat = c1 + c2 with c2 decoded from c1 + Y = c2 + E + S.

    The search runs over the coset c1 + C_eq2 and breaks ties on W_hat itself, the
    same order the encoder uses on C_eq, so a noiseless Y reproduces the encoder's
    reconstruction exactly.
    """
    pipe = prob.pipeline
    c1 = pipe.message_codeword(i1)
    outcome = pipe.bin_decoder.run(GF2.gf(to_ints(y)), shift=c1)
    if not outcome.ok:
        logger.debug("scsi decode failure")
        return SCSIDecoding(ok=False)
    w_hat = outcome.best
    return SCSIDecoding(ok=True, w_hat=w_hat, c2=w_hat + c1)


def shares_binning_code(ccsi: CCSIProblem, scsi: SCSIProblem) -> bool:
    """The CCSI quantizer and the SCSI channel decoder both land on the same C_eq2."""
    return ccsi.code is scsi.code and ccsi.pipeline.bin_quantizer.target is scsi.pipeline.bin_decoder.target


def trial_rng(master_seed: int, trial: int) -> tuple[np.random.Generator, int]:
    """Independent stream per (master_seed, trial); the returned int identifies it in the CSV."""
    seq = np.random.SeedSequence([master_seed, trial])
    return np.random.default_rng(seq), int(seq.generate_state(1, dtype=np.uint32)[0])


def run_ccsi_trial(prob: CCSIProblem, master_seed: int, trial: int) -> TrialRecord:
    rng, seed = trial_rng(master_seed, trial)
    code = prob.code
    i1 = uniform_bits(code.K1, rng)
    s = uniform_bits(code.N, rng)
    enc = ccsi_encode(prob, i1, s)
    record = TrialRecord(trial=trial, seed=seed, encoder_error=enc.encoder_error, rate=prob.rate, distortion_or_weight=enc.weight)
    if enc.encoder_error:
        return record
    y = bsc_apply(enc.e + s, prob.p, rng)
    decoded = ccsi_decode(prob, y)
    record.identity_holds = not np.any(to_ints(enc.e + s + enc.c1 + enc.c2))
    record.decode_success = decoded is not None and np.array_equal(to_ints(decoded), to_ints(i1))
    if decoded is not None:
        record.end_to_end = float(np.count_nonzero(to_ints(decoded) != to_ints(i1))) / code.K1
    return record


def run_scsi_trial(prob: SCSIProblem, master_seed: int, trial: int) -> TrialRecord:
    rng, seed = trial_rng(master_seed, trial)
    code = prob.code
    wseq = uniform_bits(code.N, rng)
    s = bernoulli(code.N, prob.p, rng)
    y = wseq + s
    enc = scsi_encode(prob, wseq)
    record = TrialRecord(trial=trial, seed=seed, encoder_error=enc.encoder_error, rate=prob.rate, distortion_or_weight=enc.distortion)
    if enc.encoder_error:
        return record
    dec = scsi_decode(prob, enc.i1, y)
    c1 = prob.pipeline.message_codeword(enc.i1)
    c2 = enc.c + c1
    e = wseq + enc.c
    record.identity_holds = np.array_equal(to_ints(c1 + y), to_ints(c2 + e + s))
    record.decode_success = dec.ok and np.array_equal(to_ints(dec.w_hat), to_ints(enc.c))
    if dec.ok:
        record.end_to_end = float(np.count_nonzero(to_ints(dec.w_hat) != to_ints(wseq))) / code.N
    return record


def run_trial(prob: _SideInfoProblem, master_seed: int, trial: int) -> TrialRecord:
    if isinstance(prob, CCSIProblem):
        return run_ccsi_trial(prob, master_seed, trial)
    return run_scsi_trial(prob, master_seed, trial)
