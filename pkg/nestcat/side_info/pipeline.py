import logging
import time as _time
from functools import cached_property
from typing import Any, Optional

import galois
import numpy as np

from ..core.concat import ConcatenatedNestedCode, phi, phi_inv, psi_star_inv
from ..core.core_types import DecodeKind, DecodeOutcome, Strategy
from ..core.errors import UsageError
from ..core.finite_field import GF2, poly_coeffs, to_ints
from ..core.linear_code import AnyCode, LinearCode, ZeroCode, hamming_distance
from ..core.nested_cyclic import NestedCyclicCode, extract_info
from ..core.rs_codes import BoundedDistanceDecoder, FoldedCode, sigma, source_encode

logger = logging.getLogger(__name__)


class PipelineNode:
    """Base class for pipeline nodes with timing and error handling."""

    def __init__(self, name: str):
        self.name = name

    def run(self, *args, **kwargs):
        start = _time.perf_counter()
        try:
            result = self.process(*args, **kwargs)
            elapsed = (_time.perf_counter() - start) * 1000
            logger.debug(f"[PipelineNode] {self.name} completed in {elapsed:.2f} ms")
            return result
        except Exception as e:
            logger.error(f"[PipelineNode] {self.name} error: {e}")
            raise

    def process(self, *args, **kwargs):
        raise NotImplementedError


def _nested_outer(code: ConcatenatedNestedCode) -> NestedCyclicCode:
    outer = code.outer
    if not isinstance(outer, NestedCyclicCode):
        raise UsageError("side-information pipelines need a nested cyclic outer code")
    return outer


class OuterEncodeNode(PipelineNode):
    """K1 information bits -> i1 g as an outer word over GF(2^m)."""

    def __init__(self, code: ConcatenatedNestedCode):
        super().__init__("OuterEncodeNode")
        self.code = code
        self.outer = _nested_outer(code)

    def process(self, i1_bits: Any) -> galois.FieldArray:
        bits = to_ints(i1_bits)
        if bits.shape[-1] != self.code.K1:
            raise UsageError(f"i1 has {bits.shape[-1]} bits, expected K1={self.code.K1}")
        message = phi_inv(bits, self.outer.params)
        return self.outer.c1.encode(message)


class ConcatenateNode(PipelineNode):
    """phi then psi_star."""

    def __init__(self, code: ConcatenatedNestedCode):
        super().__init__("ConcatenateNode")
        self.code = code

    def process(self, v: Any) -> galois.FieldArray:
        return self.code.encode_outer(v)


class _BinaryTargetNode(PipelineNode):
    """Shared plumbing for nodes that land on C_eq or C_eq2."""

    def __init__(self, name: str, code: ConcatenatedNestedCode, target: str, strategy: Strategy):
        super().__init__(name)
        if target not in ("eq", "eq2"):
            raise UsageError(f"unknown target code {target!r}")
        self.code = code
        self.outer = _nested_outer(code)
        self.target_name = target
        self.strategy = Strategy(strategy)

    @property
    def target(self) -> AnyCode:
        return self.code.eq if self.target_name == "eq" else self.code.eq2

    @property
    def outer_target(self) -> LinearCode:
        return self.outer.c if self.target_name == "eq" else self.outer.c2

    def _inner_messages(self, y: Any) -> galois.FieldArray:
        """Nearest inner codeword per block, read back as message bits."""
        inner = self.code.inner
        blocks = to_ints(y).reshape(self.code.params.l, inner.n)
        decoded = np.stack([to_ints(inner.nearest_codeword(b)[0]) for b in blocks])
        return psi_star_inv(decoded.reshape(-1), inner, self.code.params.l)


class SourceEncodeNode(_BinaryTargetNode):
    """Quantize a binary word onto the target code; returns (codeword, Hamming distortion)."""

    def __init__(self, code: ConcatenatedNestedCode, target: str, strategy: Strategy = Strategy.JOINT, nu: int = 1):
        super().__init__("SourceEncodeNode", code, target, strategy)
        self.nu = nu
        if self.strategy is Strategy.SEPARATE:
            # validates nu | n up front
            self.folded = FoldedCode(self.outer_target, nu)

    def process(self, y: Any) -> tuple[galois.FieldArray, int]:
        target = self.target
        if isinstance(target, ZeroCode):
            zero = GF2.gf.Zeros(self.code.N)
            return zero, hamming_distance(zero, y)
        if self.strategy is Strategy.JOINT:
            return target.nearest_codeword(y)
        # fold the inner-decoded bits into symbols of GF(2^(m nu))
        folded = sigma(self._inner_messages(y), self.outer.params.m, self.nu)
        v, _ = source_encode(self.folded, folded)
        c = self.code.encode_outer(v)
        return c, hamming_distance(c, y)


class ChannelDecodeNode(_BinaryTargetNode):
    """Decode a noisy binary word onto the target code."""

    def __init__(self, code: ConcatenatedNestedCode, target: str, strategy: Strategy = Strategy.JOINT):
        super().__init__("ChannelDecodeNode", code, target, strategy)

    @cached_property
    def outer_decoder(self) -> BoundedDistanceDecoder:
        g = self.outer.g if self.target_name == "eq" else self.outer.gf
        return BoundedDistanceDecoder(self.outer.params, self.outer.n, g)

    def process(self, y: Any, shift: Optional[Any] = None) -> DecodeOutcome:
        """Decode y onto shift + target (shift defaults to 0); the outcome holds coset members."""
        y = GF2.gf(to_ints(y))
        shift = GF2.gf.Zeros(self.code.N) if shift is None else GF2.gf(to_ints(shift))
        target = self.target
        if isinstance(target, ZeroCode):
            return DecodeOutcome(DecodeKind.UNIQUE, [shift], hamming_distance(shift, y))
        if self.strategy is Strategy.JOINT:
            member, distance = target.nearest_in_coset(y, shift)
            return DecodeOutcome(DecodeKind.UNIQUE, [member], distance)
        symbols = phi_inv(self._inner_messages(y + shift), self.outer.params)
        outcome = self.outer_decoder.decode(symbols)
        if not outcome.ok:
            return outcome
        member = self.code.encode_outer(outcome.best) + shift
        return DecodeOutcome(DecodeKind.UNIQUE, [member], hamming_distance(member, y))


class ExtractNode(PipelineNode):
    """Binary C_eq codeword -> outer v -> i1 = (v mod gf) / g -> K1 bits."""

    def __init__(self, code: ConcatenatedNestedCode):
        super().__init__("ExtractNode")
        self.code = code
        self.outer = _nested_outer(code)

    def process(self, c: Any) -> galois.FieldArray:
        v = self.code.decode_outer(c)
        i1 = extract_info(self.outer, v)
        return phi(poly_coeffs(i1, self.outer.k1), self.outer.params)


class SideInfoPipeline:
    """All nodes for one concatenated code, built once and shared by both problems."""

    def __init__(self, code: ConcatenatedNestedCode, strategy: Strategy = Strategy.JOINT, nu: int = 1):
        self.code = code
        self.strategy = Strategy(strategy)
        self.nu = nu
        self.outer_encode = OuterEncodeNode(code)
        self.concatenate = ConcatenateNode(code)
        self.bin_quantizer = SourceEncodeNode(code, "eq2", self.strategy, nu)
        self.full_quantizer = SourceEncodeNode(code, "eq", self.strategy, nu)
        self.full_decoder = ChannelDecodeNode(code, "eq", self.strategy)
        self.bin_decoder = ChannelDecodeNode(code, "eq2", self.strategy)
        self.extract = ExtractNode(code)

    def message_codeword(self, i1_bits: Any) -> galois.FieldArray:
        """c1 in C_eq1 carrying i1."""
        return self.concatenate.run(self.outer_encode.run(i1_bits))

    def warm_up(self) -> None:
        self.code.warm_up()
        for code in (self.code.eq, self.code.eq2):
            if isinstance(code, LinearCode) and self.strategy is Strategy.JOINT:
                code.warm_up()
        if self.strategy is Strategy.SEPARATE:
            self.code.inner.warm_up()
            self.bin_decoder.outer_decoder
            self.full_decoder.outer_decoder
            for node in (self.bin_quantizer, self.full_quantizer):
                node.outer_target.codebook
