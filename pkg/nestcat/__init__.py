from .core.concat import ConcatenatedNestedCode, concatenate
from .core.nested_cyclic import NestedCyclicCode, build_nested
from .side_info.problems import ccsi_problem, scsi_problem

__all__ = [
    "ConcatenatedNestedCode",
    "NestedCyclicCode",
    "build_nested",
    "ccsi_problem",
    "concatenate",
    "scsi_problem",
]
