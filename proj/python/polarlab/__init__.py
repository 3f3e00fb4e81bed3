"""Polar-code codec laboratory: construction, list decoding, latency model."""

from ._core import (
    __version__,
    CodeSpec,
    baseline_latency,
    crc16,
    crc16_append,
    crc16_check,
    embed_message,
    encode_frame,
    extract_message,
    latency_report,
    latency_report_from_counts,
    lscd_decode,
    make_code_spec,
    polar_transform,
    run_point,
    scd_decode,
)

__all__ = [
    "__version__",
    "CodeSpec",
    "baseline_latency",
    "crc16",
    "crc16_append",
    "crc16_check",
    "embed_message",
    "encode_frame",
    "extract_message",
    "latency_report",
    "latency_report_from_counts",
    "lscd_decode",
    "make_code_spec",
    "polar_transform",
    "run_point",
    "scd_decode",
]
