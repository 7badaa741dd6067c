"""Build the genus-two example graphs used as regression fixtures.

Each graph is assembled from two-rung realizations of the genus-one scheme
with one ladder-vertex, following the insertion moves that produce them.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from ladderschemes.generate import insert_separating, insert_structure, insert_two_edge_connection
from ladderschemes.stranded import Editor, closed_ladder, invariants, realize, reroot, to_json

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# two-rung realization: root 0, rung (1, 2), rung (3, 4)
BASE = realize(closed_ladder("Ne"))
RUNG_EDGES = (4, 6)  # tails of the two edges of the first rung
GAP_EDGES = (8, 10)  # tails of the two rails between the rungs
# four-rung realization, two edges on one rail in different gaps
LONG = realize(closed_ladder("Ne"), {1: "NNNN"})
LONG_RAIL_EDGES = (8, 24)


def with_structure(word: str, tails, base=BASE) -> object:
    ed = Editor(base)
    insert_structure(ed, word, tails)
    return ed.freeze()


def build() -> dict[str, object]:
    rung_rooted = reroot(BASE, RUNG_EDGES[0])
    rail_rooted = reroot(BASE, GAP_EDGES[0])
    return {
        "rung_contact_dipole": with_structure("N", RUNG_EDGES),
        "rung_contact_odd": with_structure("NNN", RUNG_EDGES),
        "rail_even": with_structure("NN", LONG_RAIL_EDGES, LONG),
        "gap_odd": with_structure("NNN", GAP_EDGES),
        "rung_rung_direct": insert_two_edge_connection(BASE, rung_rooted, RUNG_EDGES[0]),
        "rung_rung_bladder": insert_separating(BASE, rung_rooted, "NL", site=RUNG_EDGES[0]),
        "rail_rail_direct": insert_two_edge_connection(BASE, rail_rooted, GAP_EDGES[0]),
        "rung_rail_dipole": insert_separating(BASE, rail_rooted, "N", site=RUNG_EDGES[0]),
    }


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, g in build().items():
        inv = invariants(g)
        if (inv.g, inv.ell) != (2, 0):
            print(f"{name}: unexpected invariants {inv}", file=sys.stderr)
            return 1
        (OUT / f"{name}.json").write_text(json.dumps(to_json(g)) + "\n")
        print(f"{name}: v={inv.v}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
