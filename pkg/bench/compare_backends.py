"""Compare the numba and pure-numpy kernel backends.

The backend is frozen at import time by the LATENERGY_BACKEND environment
variable, so each timing runs in a fresh subprocess.

Usage: python bench/compare_backends.py [--m-sphere3 200000] [--m-sphere4 2000]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import sys
import time

import latenergy as le
from latenergy.energy import rep_fn
from latenergy.harness import energy_from_counts

m3, m4 = int(sys.argv[1]), int(sys.argv[2])

timings = {"backend": le.active_backend}

# warm up jit compilation / cache loading outside the timed region
le.enumerate_sphere(3, 10)
rep_fn(le.enumerate_sphere(4, 10), 2)

t = time.perf_counter()
S3 = le.enumerate_sphere(3, m3)
timings["enumerate sphere3"] = time.perf_counter() - t

t = time.perf_counter()
S4 = le.enumerate_sphere(4, m4)
timings["enumerate sphere4"] = time.perf_counter() - t

t = time.perf_counter()
r = rep_fn(S4, 2, support_budget=10 ** 9)
timings["pair counts sphere4"] = time.perf_counter() - t

timings["checks"] = {
    "|S3|": len(S3),
    "|S4|": len(S4),
    "E_{2,2}": energy_from_counts(r.counts, 2),
    "E_{2,3}": energy_from_counts(r.counts, 3),
}
print(json.dumps(timings))
"""


def run(backend: str, m3: int, m4: int) -> dict:
    env = dict(os.environ, LATENERGY_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(m3), str(m4)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-sphere3", type=int, default=200_000)
    ap.add_argument("--m-sphere4", type=int, default=2_000)
    args = ap.parse_args()

    results = {b: run(b, args.m_sphere3, args.m_sphere4)
               for b in ("numba", "numpy")}
    if results["numba"]["checks"] != results["numpy"]["checks"]:
        print("BACKENDS DISAGREE:", results, file=sys.stderr)
        return 1

    stages = [k for k in results["numba"] if k not in ("backend", "checks")]
    width = max(len(s) for s in stages)
    print(f"{'stage'.ljust(width)}  {'numba':>10}  {'numpy':>10}  speedup")
    for stage in stages:
        a, b = results["numba"][stage], results["numpy"][stage]
        ratio = b / a if a > 0 else float("inf")
        print(f"{stage.ljust(width)}  {a:>9.3f}s  {b:>9.3f}s  {ratio:6.1f}x")
    print("exact results agree across backends:", results["numba"]["checks"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
