#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the batched pairwise inner products and the self-norms on a simulated
dataset, for both backends, and reports the speedup. Run directly:

    python3 benchmarks/bench_backends.py [--n-fibers 200] [--repeats 3]
"""

import argparse
import time

import numpy as np

from fiberk import KConfig, KernelParams, ProcessKind, SimConfig, make_dataset
from fiberk.backends import (
    HAVE_NUMBA,
    norms_sq_numpy,
    pair_inner_numpy,
)
from fiberk.kfunction import _pack_currents


def bench(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-fibers", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    kernel = KernelParams(p=2.0, sigma=100.0 / 3.0)
    conf = KConfig(
        kernel=kernel, t_grid=np.array([50.0]), s_grid=np.array([100.0])
    )
    fibers = make_dataset(
        SimConfig(
            process=ProcessKind.UNIFORM_BROWNIAN,
            n_fibers=args.n_fibers,
            seed=args.seed,
        )
    )
    pos, tan, offsets = _pack_currents(
        fibers, conf.center_kind, conf.resolved_spacing
    )
    ia, ib = np.triu_indices(len(fibers), k=1)
    ia = ia.astype(np.int64)
    ib = ib.astype(np.int64)
    pair_args = (pos, tan, offsets, ia, ib, kernel.p, kernel.sigma)
    norm_args = (pos, tan, offsets, kernel.p, kernel.sigma)

    n_atoms = pos.shape[0]
    print(f"{args.n_fibers} fibers, {n_atoms} atoms, {len(ia)} pairs")

    t_np_pair = bench(pair_inner_numpy, pair_args, args.repeats)
    t_np_norm = bench(norms_sq_numpy, norm_args, args.repeats)
    print(f"numpy  pair_inner: {t_np_pair:8.3f} s   self_norms: {t_np_norm:8.4f} s")

    if not HAVE_NUMBA:
        print("numba not available; skipping the compiled backend")
        return

    from fiberk.backends import _norms_sq_nb, _pair_inner_nb

    # warm up the JIT before timing
    _pair_inner_nb(*pair_args)
    _norms_sq_nb(*norm_args)
    t_nb_pair = bench(_pair_inner_nb, pair_args, args.repeats)
    t_nb_norm = bench(_norms_sq_nb, norm_args, args.repeats)
    print(f"numba  pair_inner: {t_nb_pair:8.3f} s   self_norms: {t_nb_norm:8.4f} s")
    print(
        f"speedup (numba/numpy): pair_inner {t_np_pair / t_nb_pair:5.1f}x, "
        f"self_norms {t_np_norm / t_nb_norm:5.1f}x"
    )

    got = _pair_inner_nb(*pair_args)
    want = pair_inner_numpy(*pair_args)
    assert np.allclose(got, want, rtol=1e-10), "backend mismatch"
    print("backends agree (rtol 1e-10)")


if __name__ == "__main__":
    main()
