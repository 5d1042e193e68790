"""Resource and timing model of the table circuit, plus file export.

BRAM usage follows the power-of-two address model: a table of ``M`` entries
needs ``ceil(log2 M)`` address bits and therefore ``2**bits / depth`` blocks,
where ``depth`` is the number of entries one BRAM18 holds at the entry width.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import ArgumentError, ExportError
from .fixedpoint import FixedPointFormat
from .table import Segment, SegmentedTable

__all__ = [
    "BRAM_DEPTHS",
    "BramLayout",
    "PipelineReport",
    "bram_count",
    "bram_layout",
    "latency_report",
    "export_mem_init",
    "export_descriptor",
    "load_descriptor",
    "DESCRIPTOR_FORMAT",
    "write_atomic",
]

# BRAM18 aspect ratios: entry width (bits) -> entries per block
BRAM_DEPTHS = {1: 16384, 2: 8192, 4: 4096, 9: 2048, 18: 1024, 32: 1024}

STAGES = {"selector_address": 3, "bram_read": 1, "interpolation": 5}

DESCRIPTOR_FORMAT = "pwlut-table/1"


@dataclass(frozen=True)
class BramLayout:
    entry_width: int
    entries_per_bram: int
    bram_count: int
    address_bits: int


@dataclass(frozen=True)
class PipelineReport:
    latency_cycles: int
    stage_breakdown: dict
    initiation_interval: int
    clock_mhz: float
    eval_time_ns: float
    throughput_meval_s: float


def _depth_for(width: int) -> int:
    for w in sorted(BRAM_DEPTHS):
        if width <= w:
            return BRAM_DEPTHS[w]
    raise ArgumentError(f"entry width {width} exceeds the widest BRAM18 configuration (32 bits)")


def bram_count(mf: int, entry_width: int = 32) -> BramLayout:
    """Blocks needed for ``mf`` entries of ``entry_width`` bits.

    Widths between the native BRAM18 configurations use the next wider one.
    """
    if mf < 1:
        raise ArgumentError(f"footprint must be at least 1, got {mf}")
    if entry_width < 1:
        raise ArgumentError(f"entry width must be positive, got {entry_width}")
    depth = _depth_for(entry_width)
    address_bits = (mf - 1).bit_length()
    per_block_bits = depth.bit_length() - 1
    blocks = 1 << max(address_bits - per_block_bits, 0)
    return BramLayout(entry_width, depth, blocks, address_bits)


def bram_layout(table: SegmentedTable) -> BramLayout:
    return bram_count(table.footprint, table.out_fmt.width)


def latency_report(table: SegmentedTable | None, clock_mhz: float) -> PipelineReport:
    # the pipeline depth does not depend on the table
    if not clock_mhz > 0:
        raise ArgumentError(f"clock frequency must be positive, got {clock_mhz!r}")
    cycles = sum(STAGES.values())
    return PipelineReport(cycles, dict(STAGES), 1, float(clock_mhz),
                          cycles * 1000.0 / clock_mhz, float(clock_mhz))


def write_atomic(destination, text: str):
    path = Path(destination) if destination not in (None, "") else None
    if path is None:
        raise ExportError("no destination path given")
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".",
                                   prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def mem_init_lines(table: SegmentedTable) -> list[str]:
    return [table.out_fmt.to_hex(w) for w in table.words]


def export_mem_init(table: SegmentedTable, destination) -> Path:
    """Write one hex word per line in address order (no header, LF endings)."""
    return write_atomic(destination, "".join(line + "\n" for line in mem_init_lines(table)))


def _num(x: float):
    return x if math.isfinite(x) else None


def descriptor_dict(table: SegmentedTable) -> dict:
    layout = bram_layout(table)
    return {
        "format": DESCRIPTOR_FORMAT,
        "fn_id": table.fn_id,
        "ea": table.ea,
        "footprint": table.footprint,
        "boundaries": list(table.boundaries),
        "segments": [asdict(s) for s in table.segments],
        "in_fmt": str(table.in_fmt),
        "out_fmt": str(table.out_fmt),
        "inv_fmt": str(table.inv_fmt),
        "bram": asdict(layout),
        "selector": {
            "depth": table.selector.depth,
            "preorder": [_num(t) for t in table.selector.preorder()],
        },
        "values": [float(v) for v in table.values],
        "words": list(table.words),
    }


def export_descriptor(table: SegmentedTable, destination) -> Path:
    text = json.dumps(descriptor_dict(table), indent=1) + "\n"
    return write_atomic(destination, text)


def table_from_descriptor(data: dict) -> SegmentedTable:
    if data.get("format") != DESCRIPTOR_FORMAT:
        raise ArgumentError(f"not a {DESCRIPTOR_FORMAT} descriptor (format={data.get('format')!r})")
    try:
        segments = tuple(Segment(**s) for s in data["segments"])
        in_fmt = FixedPointFormat.parse(data["in_fmt"])
        inv_fmt = FixedPointFormat.parse(data["inv_fmt"])
        table = SegmentedTable(
            data["fn_id"], float(data["ea"]), tuple(float(b) for b in data["boundaries"]),
            segments, data["values"], tuple(int(w) for w in data["words"]),
            in_fmt, FixedPointFormat.parse(data["out_fmt"]), inv_fmt.frac,
        )
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed descriptor: {exc}") from exc
    _validate(table)
    return table


def _validate(table: SegmentedTable):
    base = 0
    for j, s in enumerate(table.segments):
        if s.base_address != base:
            raise ArgumentError(f"segment {j}: base address {s.base_address}, expected {base}")
        if (s.count - 1) * s.delta < s.x_end - s.x_start:
            raise ArgumentError(f"segment {j}: {s.count} entries do not cover the segment")
        base += s.count
    if base != len(table.words) or base != len(table.values):
        raise ArgumentError(f"descriptor lists {base} entries, stores {len(table.words)} words")
    for addr, (v, w) in enumerate(zip(table.values, table.words)):
        if table.out_fmt.round_word(float(v)) != w:
            raise ArgumentError(f"address {addr}: word {w} is not the quantized value {v!r}")


def load_descriptor(source) -> SegmentedTable:
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read {source}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{source}: invalid descriptor at line {exc.lineno}: {exc.msg}") from exc
    return table_from_descriptor(data)
