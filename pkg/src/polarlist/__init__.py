"""Fast list decoding of high-rate polar codes with SPC and SR1/SPC special nodes."""

from .construction import CodeSpec, ReliabilitySequence, build_reliability, make_code_spec
from .kernel import encode, polar_transform

__all__ = ["CodeSpec", "ReliabilitySequence", "build_reliability", "make_code_spec",
           "encode", "polar_transform"]
