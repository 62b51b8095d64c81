"""Compiled kernels against the numpy fallback.

Each backend runs in its own interpreter (the backend is fixed at import),
so this script re-invokes itself with ZPD_PURE_PYTHON set or unset.

    python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import time

CASES = {
    "hardy_Z, 20000 points in [1e3, 1e5]": (
        "import numpy as np; from zpd.zeros.hardy import hardy_Z; t = np.linspace(1e3, 1e5, 20000)",
        "hardy_Z(t)"),
    "hardy_Z (Euler-Maclaurin), 2000 points below 1e3": (
        "import numpy as np; from zpd.zeros.hardy import hardy_Z; t = np.linspace(20, 990, 2000)",
        "hardy_Z(t)"),
    "bump_eval, 10^6 points": (
        "import numpy as np; from zpd.bump import BumpFunction; B = BumpFunction.canonical(); "
        "u = np.linspace(0.9, 2.1, 10**6)",
        "B(u)"),
    "quad_I, X = 1e4 in band": (
        "import math; from zpd.bump import BumpFunction; from zpd.oscillatory import OscIntegralSpec, quad_I; "
        "s = OscIntegralSpec(1/3, BumpFunction.canonical(), 1e4, 2*math.pi/3*1e4*1.5)",
        "quad_I(s)"),
    "find_zeros to 5000": (
        "from zpd.zeros.search import find_zeros",
        "find_zeros(5000.0)"),
}


def child() -> None:
    from zpd.kernels import BACKEND
    out = {"backend": BACKEND}
    for name, (setup, stmt) in CASES.items():
        env: dict = {}
        exec(setup, env)
        exec(stmt, env)  # warm-up
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            exec(stmt, env)
            best = min(best, time.perf_counter() - t0)
        out[name] = best
    print(json.dumps(out))


def run(pure: bool) -> dict:
    env = dict(os.environ)
    env.pop("ZPD_PURE_PYTHON", None)
    if pure:
        env["ZPD_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, __file__, "--child"], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> None:
    fast, slow = run(False), run(True)
    print(f"{'case':52s} {fast['backend']:>10s} {slow['backend']:>10s} {'speed-up':>9s}")
    for name in CASES:
        print(f"{name:52s} {fast[name]:10.4f} {slow[name]:10.4f} {slow[name] / fast[name]:8.1f}x")


if __name__ == "__main__":
    child() if "--child" in sys.argv else main()
