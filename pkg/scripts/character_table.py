"""Print weight multiplicities of an irreducible module as a small table.

    python3 scripts/character_table.py --algebra B1_0_1 --labels 1,0 --depth 6
"""

from __future__ import annotations

import argparse
import time

from qaffine.cartan import catalog, parse_labels
from qaffine.verma import HighestWeightModule


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="B1_0_1")
    ap.add_argument("--labels", default="1,0")
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--classical", action="store_true", help="also compute the q = 1 table and compare")
    args = ap.parse_args()

    data = catalog(args.algebra)
    labels = parse_labels(args.labels)
    t0 = time.perf_counter()
    m = HighestWeightModule(data, labels)
    char = m.character(args.depth)
    dt = time.perf_counter() - t0
    print(f"{data.name}  labels={','.join(map(str, labels))}  depth={args.depth}  ({dt:.2f} s)")
    by_height: dict[int, list] = {}
    for c, mult in char.items():
        if mult:
            by_height.setdefault(sum(c), []).append((c, mult))
    for h, rows in sorted(by_height.items()):
        cells = "  ".join(f"{list(c)}:{mult}" for c, mult in rows)
        print(f"  height {h}: {cells}")
    print(f"  total dimension to depth {args.depth}: {sum(char.values())}")
    if args.classical:
        from qaffine.scalars import CLASSICAL
        cl = HighestWeightModule(data, labels, param=CLASSICAL).character(args.depth)
        diff = [c for c in char if char[c] != cl.get(c)]
        print(f"  q = 1 table {'agrees' if not diff else f'differs at {diff}'}")


if __name__ == "__main__":
    main()
