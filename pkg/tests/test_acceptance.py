"""Acceptance suite: one test per exit criterion, summarised as PASS/FAIL lines.

Run alone with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``).
"""
import io
import math
import socket
import struct
import threading
import time

import numpy as np
import pytest

from stegosink import codec, experiments, metrics, sensors
from stegosink.errors import BadProtocolMagic, LengthOverflow
from stegosink.image import RgbImage, synth_image
from stegosink.prng import random_bytes

from oracles import expected_psnr

pytestmark = pytest.mark.acceptance

P1_SEEDS = range(1000, 1030)
FULL_PAYLOAD = 8186


@pytest.fixture(scope="module")
def full_capacity_reports():
    payload = random_bytes(2024, FULL_PAYLOAD).tobytes()
    reports = []
    for seed in P1_SEEDS:
        cover = synth_image(seed, 256, 256)
        stego = codec.embed(cover, payload)
        assert 48 + 8 * FULL_PAYLOAD == codec.capacity_bits(cover)
        reports.append(metrics.evaluate(cover, stego))
    return reports


def test_criterion_1_round_trip():
    """1000 randomized (cover, payload) pairs round-trip; under 30 s."""
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    failures = 0
    sides = (16, 64, 128, 256)
    for k in range(1000):
        side = sides[k % 4]
        cover = RgbImage(rng.integers(0, 256, (side, side, 3), dtype=np.uint8))
        usable = codec.usable_payload_bytes(cover)
        n = usable if k % 50 == 0 else int(rng.integers(0, usable + 1))
        payload = rng.integers(0, 256, n, dtype=np.uint8).tobytes()
        if codec.extract(codec.embed(cover, payload)) != payload:
            failures += 1
    elapsed = time.perf_counter() - start
    assert failures == 0
    assert elapsed < 30, f"took {elapsed:.1f} s"


def test_criterion_2_analytic_psnr(full_capacity_reports):
    """Full-capacity MSE mean in [0.160, 0.174]; every PSNR in [55.4, 56.4] dB."""
    mses = [r.mse for r in full_capacity_reports]
    assert len(mses) == 30
    assert 0.160 <= sum(mses) / len(mses) <= 0.174
    for r in full_capacity_reports:
        assert 55.4 <= r.psnr <= 56.4


def test_criterion_3_transparency(full_capacity_reports):
    """NCC in [0.999, 1.001] and SSIM >= 0.998 at full capacity."""
    for r in full_capacity_reports:
        assert 0.999 <= r.ncc <= 1.001
        assert r.ssim >= 0.998


P2_EXPECTED = {2043: 61.9, 4086: 58.9, 6129: 57.1, 8186: 55.9}


def test_criterion_4a_perspective2_decreasing():
    """Perspective 2 PSNR strictly decreases, each within 0.6 dB of 61.9/58.9/57.1/55.9."""
    table = experiments.run_perspective2(experiments.default_spec(2, seed=0))
    psnrs = [r.psnr for r in table.rows]
    assert [r.payload_bytes for r in table.rows] == sorted(P2_EXPECTED)
    assert all(a > b for a, b in zip(psnrs, psnrs[1:]))
    for r in table.rows:
        assert abs(r.psnr - P2_EXPECTED[r.payload_bytes]) <= 0.6
        assert abs(r.psnr - expected_psnr(48 + 8 * r.payload_bytes, 65536)) <= 0.6


@pytest.fixture(scope="module")
def p3_table():
    return experiments.run_perspective3(experiments.default_spec(3, seed=0))


def test_criterion_4b_perspective3_increasing(p3_table):
    """Perspective 3 PSNR strictly increases over 128^2..1024^2 at a 2042-byte payload."""
    assert [r.width for r in p3_table.rows] == [128, 256, 512, 1024]
    assert all(r.payload_bytes == 2042 for r in p3_table.rows)
    psnrs = [r.psnr for r in p3_table.rows]
    assert all(b > a for a, b in zip(psnrs, psnrs[1:]))


def test_criterion_4c_perspective3_top_value(p3_table):
    """Perspective 3 top (1024^2) PSNR is 67.9 +/- 0.6 dB as stated."""
    top = p3_table.rows[-1]
    analytic = expected_psnr(48 + 8 * 2042, top.width * top.height)
    assert abs(top.psnr - 67.9) <= 0.6, (
        f"measured {top.psnr:.3f} dB; the analytic mean for 16384 frame bits at 1024x1024 "
        f"is {analytic:.3f} dB"
    )


def test_criterion_5_locality():
    """100 small images: changes only at (pixel i, channel i mod 3), i < frame length, LSB only."""
    rng = np.random.default_rng(5)
    violations = 0
    for _ in range(100):
        w, h = (int(v) for v in rng.integers(7, 17, size=2))
        cover = RgbImage(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))
        n = int(rng.integers(0, codec.usable_payload_bytes(cover) + 1))
        stego = codec.embed(cover, rng.integers(0, 256, n, dtype=np.uint8).tobytes())
        nbits = 48 + 8 * n
        c, s = cover.array.tolist(), stego.array.tolist()
        for y in range(h):
            for x in range(w):
                i = y * w + x
                for ch in range(3):
                    if c[y][x][ch] == s[y][x][ch]:
                        continue
                    if not (i < nbits and ch == i % 3 and c[y][x][ch] ^ s[y][x][ch] == 1):
                        violations += 1
    assert violations == 0


def test_criterion_6_metric_identities():
    """Identity values on 50 random images; psnr = 10 log10(255^2/mse) on every experiment row."""
    rng = np.random.default_rng(6)
    for _ in range(50):
        w, h = (int(v) for v in rng.integers(1, 64, size=2))
        img = RgbImage(rng.integers(1, 256, (h, w, 3), dtype=np.uint8))
        r = metrics.evaluate(img, img)
        assert r.mse == 0.0
        assert r.psnr == math.inf
        assert r.ncc == 1.0
        assert r.ssim == 1.0
    for p in (1, 2, 3):
        for row in experiments.run_experiment(experiments.default_spec(p, seed=6)).rows:
            assert math.isclose(row.psnr, 10 * math.log10(255 ** 2 / row.mse), rel_tol=1e-9)


def test_criterion_7_pipeline():
    """250 records over loopback round-trip; bad magic and oversized lengths rejected."""
    records = [sensors.SensorRecord(int(i), int(ts), int(k), int(v)) for i, ts, k, v in zip(
        range(250), random_bytes(7, 250).astype(np.uint64) * 1_000_003,
        np.arange(250) % 5, np.arange(250) * 1234 - 150_000)]
    cover = synth_image(77, 256, 256)
    out = {}
    with sensors.FusionCenter() as center:
        def serve():
            try:
                out["ok"] = center.receive_one(timeout=10)
                for _ in range(2):
                    try:
                        center.receive_one(timeout=10)
                    except Exception as exc:
                        out.setdefault("errors", []).append(exc)
            except Exception as exc:
                out["fatal"] = exc
        t = threading.Thread(target=serve)
        t.start()
        sensors.sink_send(records, cover, center.address)
        for raw in (b"HTTP/1.1 200 OK\r\n", b"STG1" + struct.pack(">I", 2**32 - 1)):
            with socket.create_connection(center.address) as s:
                s.sendall(raw)
        t.join(20)
    assert "fatal" not in out
    got = out["ok"].records
    assert sensors.encode_aggregate(got) == sensors.encode_aggregate(records)
    assert got == records
    assert [type(e) for e in out["errors"]] == [BadProtocolMagic, LengthOverflow]
    with pytest.raises(LengthOverflow):
        sensors.read_message(io.BytesIO(b"STG1" + struct.pack(">I", 2**32 - 1)))


def test_criterion_8_determinism(tmp_path):
    """Reruns with identical seeds give byte-identical CSV and manifest files."""
    for p in (1, 2, 3):
        produced = []
        for run in ("first", "second"):
            spec = experiments.default_spec(p, seed=8)
            paths = experiments.write_outputs(spec, experiments.run_experiment(spec), tmp_path / run)
            produced.append([open(x, "rb").read() for x in paths])
        assert produced[0] == produced[1]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
