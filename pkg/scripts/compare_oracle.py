"""Compare the brute-force census with the generator and the graph series at a chosen size.

    python3 scripts/compare_oracle.py --vertices 8

v=8 takes roughly twenty minutes on one core.
"""

from __future__ import annotations

import argparse
import sys

from ladderschemes.generate import generate_level, generate_schemes
from ladderschemes.oracle import census
from ladderschemes.series import G_g, melonic_T


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--vertices", type=int, default=6)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    v = args.vertices
    c = census(v, melon_free=True, workers=args.threads, bound=v)
    ok = True
    t = melonic_T(v // 2)
    series = {0: None, 1: G_g(list(generate_schemes(1).schemes.values()), v),
              2: G_g(list(generate_schemes(2).schemes.values()), v)}
    for n in range(0, v + 1, 2):
        for g in range(0, 3):
            want = c.counts.get((n, g, 0), 0)
            got = t[n // 2] if g == 0 else series[g][n]
            ok &= want == got
            print(f"v={n} g={g}: oracle {want}, series {got}")
    for g in (1, 2):
        lev = generate_level(g, v).census()
        for n in range(0, v + 1, 2):
            want = c.melon_free.get((n, g, 0), 0)
            got = lev.get(n, 0)
            ok &= want == got
            print(f"melon-free v={n} g={g}: oracle {want}, generator {got}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
