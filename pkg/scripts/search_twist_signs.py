"""Search sign-exponent vectors for the module twist of a super family.

The e-generators are left unsigned (any weight-character twist of the e's
satisfying the cocycle condition can be absorbed into a rescaling of the
basis); the f exponent vectors run over parity classes in {0,1}^(n+1) and
each node may carry a constant sign.  Candidates are screened with the
[e_i, f_j} relations at small depth, then checked in full by verify_twist.

    python3 scripts/search_twist_signs.py --algebra A2_0_3 --labels 1,0,0
"""

from __future__ import annotations

import argparse
import itertools
import json

from qaffine.cartan import catalog, parse_labels
from qaffine.transmutation import SignCharacter, build_partner_module, verify_twist
from qaffine.verma import verify_relations


def candidates(size: int):
    zero = tuple((0,) * size for _ in range(size))
    vecs = list(itertools.product((0, 1), repeat=size))
    for f_vec in itertools.product(vecs, repeat=size):
        for f_const in itertools.product((0, 1), repeat=size):
            yield SignCharacter(zero, tuple(f_vec), "search", None, tuple(f_const))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", required=True)
    ap.add_argument("--labels", required=True)
    ap.add_argument("--screen-depth", type=int, default=2)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--limit", type=int, default=5, help="stop after this many verified solutions")
    args = ap.parse_args()

    data = catalog(args.algebra)
    labels = parse_labels(args.labels)
    size = len(data.matrix)
    found, screened = [], 0
    base = build_partner_module(data, labels).base
    for sc in candidates(size):
        tm = build_partner_module(data, labels, signs=sc)
        tm.base = base  # share Gram caches across candidates
        screened += 1
        if not verify_relations(tm, args.screen_depth, families=("ef",)).passed:
            continue
        rep = verify_twist(data, labels, args.depth, signs=sc)
        if rep.passed:
            found.append(sc.to_json())
            if len(found) >= args.limit:
                break
    print(json.dumps({"algebra": data.name, "labels": [str(x) for x in labels], "screened": screened}))
    for sol in found:
        print(json.dumps(sol, separators=(",", ":")))


if __name__ == "__main__":
    main()
