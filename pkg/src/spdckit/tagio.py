"""Binary tag-file serialisation, plus a CSV export for debugging.

Layout (little-endian, bit-exact):

    magic "CPTT" | u32 version = 1 | u64 repetition period ps
    u32 channel count | per channel: u32 byte length + UTF-8 name
    records, 16 bytes each: u32 channel code, u32 reserved = 0,
    u64 time ps

Records appear in stream order.  The file does not carry the generator
seed; streams read back report seed -1 for unknown.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import InputError
from .tagsim import TimeTagStream

MAGIC = b"CPTT"
VERSION = 1
_RECORD_DTYPE = np.dtype([("channel", "<u4"), ("reserved", "<u4"), ("time", "<u8")])


def write_tags(path, stream: TimeTagStream) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQI", VERSION, stream.clock_period_ps,
                             len(stream.channel_names)))
        for name in stream.channel_names:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        records = np.zeros(len(stream), dtype=_RECORD_DTYPE)
        records["channel"] = stream.channels
        records["time"] = stream.times_ps
        fh.write(records.tobytes())


def read_tags(path) -> TimeTagStream:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise InputError(f"{path}: not a CPTT tag file")
        version, period, n_channels = struct.unpack("<IQI", fh.read(16))
        if version != VERSION:
            raise InputError(f"{path}: unsupported version {version}")
        names = []
        for _ in range(n_channels):
            (length,) = struct.unpack("<I", fh.read(4))
            names.append(fh.read(length).decode("utf-8"))
        records = np.frombuffer(fh.read(), dtype=_RECORD_DTYPE)
    if records.size and records["channel"].max() >= n_channels:
        raise InputError(f"{path}: record channel code outside the name table")
    return TimeTagStream(channel_names=tuple(names),
                         channels=records["channel"].astype(np.int32),
                         times_ps=records["time"].astype(np.int64),
                         clock_period_ps=int(period), seed=-1)


def export_tags_csv(path, stream: TimeTagStream) -> None:
    """Human-readable dump, one "channel,time_ps" row per record."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("channel,time_ps\n")
        for code, t in zip(stream.channels, stream.times_ps):
            fh.write(f"{stream.channel_names[code]},{t}\n")
