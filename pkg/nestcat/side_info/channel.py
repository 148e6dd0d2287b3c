import logging

import galois
import numpy as np

from ..core.errors import UsageError
from ..core.finite_field import GF2, to_ints

logger = logging.getLogger(__name__)


def bernoulli(n: int, p: float, rng: np.random.Generator) -> galois.FieldArray:
    """n i.i.d. Bern(p) bits."""
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"crossover probability p={p} outside [0, 1]")
    return GF2.gf((rng.random(n) < p).astype(np.int64))


def uniform_bits(n: int, rng: np.random.Generator) -> galois.FieldArray:
    return GF2.gf(rng.integers(0, 2, size=n, dtype=np.int64))


def bsc_apply(x, p: float, rng: np.random.Generator) -> galois.FieldArray:
    """Binary symmetric channel: every bit flipped independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"crossover probability p={p} outside [0, 1]")
    bits = to_ints(x)
    flips = (rng.random(bits.shape) < p).astype(np.int64)
    return GF2.gf(bits ^ flips)


def weight_fraction(x) -> float:
    bits = to_ints(x)
    return float(np.count_nonzero(bits)) / bits.shape[-1]
