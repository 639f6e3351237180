"""Compare the compiled kernels with the pure-Python reference.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Each kernel runs on the same seeded inputs under both backends; the table
shows the best wall time of ``--repeat`` runs and the speedup. With
``--end-to-end`` a few library workloads are also timed in subprocesses,
once with ``TEMPERED_PURE_PYTHON=1``.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from tempered.kernels import _pykernels

try:
    from tempered.kernels import _ckernels
except ImportError:
    _ckernels = None


def workloads(rng):
    dense = {(i,): rng.randint(-10**6, 10**6) for i in range(400)}
    dense2 = {(i,): rng.randint(-10**6, 10**6) for i in range(400)}
    bi = {(i, j): rng.randint(-99, 99) for i in range(30) for j in range(30)}
    rank_rows = [{c: rng.randint(-5, 5) for c in range(120) if rng.random() < 0.1}
                 for _ in range(150)]
    solve_rows = [({c: rng.randint(0, 4) for c in range(150) if rng.random() < 0.05},
                   rng.randint(0, 4)) for _ in range(300)]
    ints = [rng.randint(1, 10**30) * 3 ** rng.randint(0, 40) for _ in range(2000)]
    return {
        "convolve 1-var 400x400": lambda k: k.convolve(dense, dense2, (0,), (600,)),
        "convolve 2-var 30x30": lambda k: k.convolve(bi, bi, (0, 0), (40, 40)),
        "sparse_rank 150x120": lambda k: k.sparse_rank(rank_rows),
        "solve_mod_p 300x150": lambda k: k.solve_mod_p(solve_rows, 150, 5),
        "int_valuation x2000": lambda k: [k.int_valuation(n, 3) for n in ints],
    }


END_TO_END = {
    "P1 cover, N=24": ("from tempered.derham_cech import cech_de_rham, cohomology_dims, "
                       "projective_line",
                       "cohomology_dims(cech_de_rham(projective_line(24)))"),
    "bidisk de Rham, N=10": ("from tempered.derham_cech import AlgebraModel, cohomology_dims, "
                             "de_rham_complex",
                             "cohomology_dims(de_rham_complex(AlgebraModel.polydisk(2, 10)))"),
    "exp solve, N=64": ("from tempered.growth_series import GrowthSeries, SeriesSpec\n"
                        "from tempered.ode_solver import DiffSystem, cauchy_solve\n"
                        "G = GrowthSeries(SeriesSpec.uniform(3, 't', 63), {(0,): 1})",
                        "cauchy_solve(DiffSystem.scalar(G), 64)"),
}


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run_subprocess(setup, stmt, pure, repeat):
    env = dict(os.environ)
    if pure:
        env["TEMPERED_PURE_PYTHON"] = "1"
    else:
        env.pop("TEMPERED_PURE_PYTHON", None)
    code = ("import timeit\n"
            f"print(min(timeit.repeat({stmt!r}, {setup!r}, number=1, repeat={repeat})))")
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()
    if _ckernels is None:
        sys.exit("compiled kernels are not built; run `pip install -e .` with Cython available")

    rows = []
    for name, fn in workloads(random.Random(args.seed)).items():
        assert fn(_pykernels) == fn(_ckernels), f"backends disagree on {name}"
        rows.append((name, best(lambda: fn(_pykernels), args.repeat),
                     best(lambda: fn(_ckernels), args.repeat)))
    if args.end_to_end:
        for name, (setup, stmt) in END_TO_END.items():
            rows.append((name, run_subprocess(setup, stmt, True, args.repeat),
                         run_subprocess(setup, stmt, False, args.repeat)))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'python s':>10}  {'cython s':>10}  {'speedup':>8}")
    for name, py, cy in rows:
        print(f"{name:<{width}}  {py:>10.5f}  {cy:>10.5f}  {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
