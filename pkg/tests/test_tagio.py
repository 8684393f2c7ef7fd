import struct

import numpy as np
import pytest

from spdckit.errors import InputError
from spdckit.jsa import synthetic_schmidt
from spdckit.tagio import export_tags_csv, read_tags, write_tags
from spdckit.tagsim import SourceBrightness, TimeTagStream, simulate_pair_tags


def small_stream(seed=17):
    sd = synthetic_schmidt([1.0, 0.4])
    return simulate_pair_tags(sd, SourceBrightness(0.05), 2000, seed=seed)


def test_round_trip_bytes_identical(tmp_path):
    stream = small_stream()
    p1 = tmp_path / "a.cptt"
    p2 = tmp_path / "b.cptt"
    write_tags(p1, stream)
    back = read_tags(p1)
    write_tags(p2, back)
    assert p1.read_bytes() == p2.read_bytes()

    assert back.channel_names == stream.channel_names
    assert back.clock_period_ps == stream.clock_period_ps
    assert np.array_equal(back.channels, stream.channels)
    assert np.array_equal(back.times_ps, stream.times_ps)
    assert back.seed == -1


def test_header_layout(tmp_path):
    stream = small_stream()
    path = tmp_path / "t.cptt"
    write_tags(path, stream)
    raw = path.read_bytes()
    assert raw[:4] == b"CPTT"
    version, period, n_ch = struct.unpack_from("<IQI", raw, 4)
    assert version == 1
    assert period == stream.clock_period_ps
    assert n_ch == 3


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.cptt"
    path.write_bytes(b"NOPE" + b"\x00" * 32)
    with pytest.raises(InputError):
        read_tags(path)


def test_bad_version(tmp_path):
    stream = small_stream()
    path = tmp_path / "t.cptt"
    write_tags(path, stream)
    raw = bytearray(path.read_bytes())
    raw[4:8] = struct.pack("<I", 99)
    path.write_bytes(bytes(raw))
    with pytest.raises(InputError):
        read_tags(path)


def test_unknown_channel_code(tmp_path):
    stream = small_stream()
    path = tmp_path / "t.cptt"
    write_tags(path, stream)
    raw = bytearray(path.read_bytes())
    # corrupt the first record's channel code, right after the header
    header_len = 4 + struct.calcsize("<IQI") + sum(
        4 + len(n.encode()) for n in stream.channel_names)
    raw[header_len:header_len + 4] = struct.pack("<I", 42)
    path.write_bytes(bytes(raw))
    with pytest.raises(InputError):
        read_tags(path)


def test_csv_export_uses_channel_names(tmp_path):
    stream = TimeTagStream(channel_names=("trigger", "signal", "idler"),
                           channels=np.array([0, 1, 2], dtype=np.int32),
                           times_ps=np.array([100, 150, 150], dtype=np.int64),
                           clock_period_ps=12500, seed=0)
    path = tmp_path / "t.csv"
    export_tags_csv(path, stream)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "channel,time_ps"
    assert lines[1] == "trigger,100"
    assert lines[2] == "signal,150"
    assert lines[3] == "idler,150"


def test_empty_stream_round_trip(tmp_path):
    stream = TimeTagStream(channel_names=("trigger", "signal", "idler"),
                           channels=np.zeros(0, dtype=np.int32),
                           times_ps=np.zeros(0, dtype=np.int64),
                           clock_period_ps=12500, seed=0)
    path = tmp_path / "empty.cptt"
    write_tags(path, stream)
    back = read_tags(path)
    assert len(back) == 0
    assert back.channel_names == ("trigger", "signal", "idler")
