"""Time the numba and numpy paths of the two numeric kernels.

    python3 benchmarks/bench_kernels.py --units 200000 --sentences 20000
"""

import argparse
import time

import numpy as np

from formalmt import _accel


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def coincidence_inputs(rng, units, raters, labels):
    codes = rng.integers(0, labels, size=(units, raters))
    codes[rng.random(codes.shape) < 0.2] = -1
    return codes, labels


def clipped_inputs(rng, sentences, vocab):
    def side():
        lengths = rng.integers(5, 40, size=sentences)
        offsets = np.concatenate([[0], np.cumsum(lengths)])
        return rng.integers(0, vocab, size=offsets[-1]), offsets
    h, h_off = side()
    r, r_off = side()
    return h, h_off, r, r_off


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--units", type=int, default=100000)
    parser.add_argument("--raters", type=int, default=3)
    parser.add_argument("--labels", type=int, default=4)
    parser.add_argument("--sentences", type=int, default=20000)
    parser.add_argument("--vocab", type=int, default=5000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    cases = {
        "coincidence_matrix": (
            coincidence_inputs(rng, args.units, args.raters, args.labels),
            _accel.coincidence_matrix_numpy, _accel.coincidence_matrix_numba),
        "clipped_matches": (
            clipped_inputs(rng, args.sentences, args.vocab),
            _accel.clipped_matches_numpy, _accel.clipped_matches_numba),
    }
    print(f"{'kernel':<20} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, (inputs, numpy_fn, numba_fn) in cases.items():
        t_np = best_of(lambda: numpy_fn(*inputs), args.repeat)
        if not _accel.HAVE_NUMBA:
            print(f"{name:<20} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        numba_fn(*inputs)  # compile outside the timed runs
        t_nb = best_of(lambda: numba_fn(*inputs), args.repeat)
        same = np.allclose(numpy_fn(*inputs), numba_fn(*inputs))
        print(f"{name:<20} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
