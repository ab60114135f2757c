"""Compare the compiled and pure Lyndon kernels.

Each kernel runs in a fresh interpreter (the kernel is chosen at import), on
cold caches.  Usage: python benchmarks/bench_kernel.py [--bch-degree N]
"""

import argparse
import json
import os
import subprocess
import sys

PROBE = r"""
import json, sys, time
from artifact import _kernel as K
from artifact.freelie import bch_xy_part
n = int(sys.argv[1])
out = {"compiled": K.COMPILED}
t = time.perf_counter()
for m in range(1, 11):
    for w in K.lyndon_words("xyz", m):
        K.expand(w)
out["expand xyz<=10"] = time.perf_counter() - t
K.clear_caches()
t = time.perf_counter()
words = [w for m in range(1, 7) for w in K.lyndon_words("xy", m)]
for u in words:
    for v in words:
        K.bracket_words(u, v)
out["bracket xy<=6 pairs"] = time.perf_counter() - t
K.clear_caches()
t = time.perf_counter()
terms = [len(bch_xy_part(m)) for m in range(1, n + 1)]
out[f"bch to degree {n}"] = time.perf_counter() - t
out["bch terms"] = terms[-1]
print(json.dumps(out))
"""


def run(pure: bool, n: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["ARTIFACT_PURE"] = "1"
    else:
        env.pop("ARTIFACT_PURE", None)
    res = subprocess.run([sys.executable, "-c", PROBE, str(n)], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bch-degree", type=int, default=12)
    n = ap.parse_args().bch_degree
    ext, pure = run(False, n), run(True, n)
    if not ext["compiled"]:
        print("extension not built; both runs used the pure kernel")
    print(f"{'task':28s} {'compiled':>10s} {'pure':>10s} {'speedup':>8s}")
    for k, v in pure.items():
        if isinstance(v, float):
            print(f"{k:28s} {ext[k]:10.3f} {v:10.3f} {v / ext[k]:8.2f}")
    print(f"bch degree-{n} Lyndon terms: {ext['bch terms']} (pure: {pure['bch terms']})")


if __name__ == "__main__":
    main()
