"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--sizes 256 1024] [--repeat 20]

Times each kernel on a full-capacity frame, then embed + extract + metrics
end to end, and prints the median per call in milliseconds.
"""
import argparse
import statistics
import time

import numpy as np

from stegosink import codec, kernels, metrics
from stegosink.framing import frame_bytes
from stegosink.image import synth_image
from stegosink.prng import random_bytes


def timed(fn, repeat):
    fn()
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return 1e3 * statistics.median(samples)


def use(impl):
    for name in ("embed_frame", "extract_frame", "sum_sq_diff", "dot", "channel_moments"):
        setattr(kernels, name, getattr(impl, name))


def bench(side, repeat, impls):
    cover = synth_image(1, side, side)
    payload = random_bytes(2, codec.usable_payload_bytes(cover)).tobytes()
    data = frame_bytes(payload)
    nbits = 8 * len(data)
    stego = codec.embed(cover, payload)
    a = np.ascontiguousarray(cover.interleaved())
    b = np.ascontiguousarray(stego.interleaved())

    cases = {
        "embed_frame": lambda impl: impl.embed_frame(a.copy(), data, nbits),
        "extract_frame": lambda impl: impl.extract_frame(b, len(data)),
        "sum_sq_diff": lambda impl: impl.sum_sq_diff(a, b),
        "dot": lambda impl: impl.dot(a, b),
        "channel_moments": lambda impl: impl.channel_moments(a, b),
    }
    rows = []
    for case, fn in cases.items():
        rows.append((case, {name: timed(lambda: fn(impl), repeat) for name, impl in impls.items()}))

    def pipeline():
        s = codec.embed(cover, payload)
        codec.extract(s)
        metrics.evaluate(cover, s)

    end_to_end = {}
    for name, impl in impls.items():
        use(impl)
        end_to_end[name] = timed(pipeline, repeat)
    rows.append(("embed+extract+metrics", end_to_end))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    impls = kernels.backends()
    default = {name: getattr(kernels, name) for name in
               ("embed_frame", "extract_frame", "sum_sq_diff", "dot", "channel_moments")}
    names = sorted(impls)
    print(f"default backend: {kernels.BACKEND}; comparing {', '.join(names)}")
    try:
        for side in args.sizes:
            print(f"\n{side}x{side}, full-capacity payload (median ms per call)")
            print(f"{'kernel':<24}" + "".join(f"{n:>10}" for n in names) + ("   speedup" if len(names) > 1 else ""))
            for case, times in bench(side, args.repeat, impls):
                line = f"{case:<24}" + "".join(f"{times[n]:>10.3f}" for n in names)
                if "cython" in times:
                    line += f"{times['numpy'] / times['cython']:>9.1f}x"
                print(line)
    finally:
        for name, fn in default.items():
            setattr(kernels, name, fn)


if __name__ == "__main__":
    main()
