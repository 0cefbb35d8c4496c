"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both modules are imported directly, so the result does not depend on
PADIC_HARDY_PURE.  Outputs are also compared so a speedup never hides a
disagreement.
"""

import argparse
import timeit

import numpy as np

from padic_hardy.kernels import _pykernels

try:
    from padic_hardy.kernels import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    c = rng.uniform(-1, 1, 4001)
    sizes = 0.5 ** np.arange(400, -1, -1)
    x0 = np.sin(np.linspace(0, np.pi, 401))
    toe = (0.5, 2 ** -0.5, 0.0, 0.0, 0.0)
    return {
        "hardy_recurrence W=4001": lambda m: m.hardy_recurrence(c, 0.5, 0.0),
        "suffix_sum W=4001": lambda m: m.suffix_sum(c, 0.0, True),
        "weighted_power_sum W=4001": lambda m: m.weighted_power_sum(c, 1.5, 0.999, 1.0),
        "cmo_window W=401": lambda m: m.cmo_window(c[:401], sizes, 0.0, 0.0, 2.0),
        "toeplitz_apply W=401": lambda m: m.toeplitz_apply(x0, *toe, False),
        "power_iteration W=401": lambda m: m.power_iteration(x0, *toe, 200, 0.0),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the pure backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}  agree")
    for name, call in cases(rng).items():
        t_py = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:28s} {t_py:12.3f} {'-':>12s} {'-':>8s}  -")
            continue
        t_c = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=args.repeat)) * 1e3
        a, b = call(_pykernels), call(_ckernels)
        agree = np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-10, atol=1e-300)
        print(f"{name:28s} {t_py:12.3f} {t_c:12.3f} {t_py / t_c:7.1f}x  {agree}")


if __name__ == "__main__":
    main()
