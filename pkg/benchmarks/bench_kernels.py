"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 20000]

Times theta_1 (with three derivatives), sn(x|m), and an end-to-end Lame partner
computation with each backend swapped into the elliptic module.
"""
import argparse
import timeit

import numpy as np

from confluent_susy import elliptic
from confluent_susy._backend import load_backend
from confluent_susy.grid import make_grid
from confluent_susy.models import lame_potential, make_lame_seed
from confluent_susy.susy import confluent_partner_differential


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def partner_run():
    ls = make_lame_seed(0.5, 0.1, "inverse_beta")
    x = make_grid(-20.0, 20.0, 4001)
    confluent_partner_differential(ls.as_confluent_seed(), -45.0, lambda t: lame_potential(0.5, t), x)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=20000)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    v = rng.uniform(-3, 3, args.size) + 1j * rng.uniform(-0.7, 0.7, args.size)
    x = rng.uniform(-30, 30, args.size)

    backends = {"python": load_backend("python")}
    try:
        backends["cython"] = load_backend("cython")
    except ImportError:
        print("compiled extension not built; timing the numpy fallback only")

    results = {}
    original = elliptic.kernels
    try:
        for name, mod in backends.items():
            elliptic.kernels = mod
            results[name] = {
                f"theta1_derivs (n={args.size})": best_of(lambda: mod.theta1_derivs(v, 0.1, 8), args.repeat, 10),
                f"sn_agm (n={args.size})": best_of(lambda: mod.sn_agm(x, 0.5), args.repeat, 10),
                "lame partner, 4001 points": best_of(partner_run, args.repeat, 3),
            }
    finally:
        elliptic.kernels = original

    print(f"{'kernel':<30}" + "".join(f"{n:>14}" for n in results) + ("   speedup" if len(results) > 1 else ""))
    for key in results["python"]:
        row = f"{key:<30}" + "".join(f"{results[n][key] * 1e3:>11.3f} ms" for n in results)
        if "cython" in results:
            row += f"   {results['python'][key] / results['cython'][key]:6.2f}x"
        print(row)


if __name__ == "__main__":
    main()
