"""Regenerate src/supportpoints/data/reference_integrals.json (10^7 seeded draws each)."""

import json
from dataclasses import asdict
from pathlib import Path

from supportpoints.bench import INTEGRANDS, compute_reference, reference_key
from supportpoints.dist import DistributionSpec, Marginal, borehole_spec

OUT = Path(__file__).resolve().parents[1] / "src/supportpoints/data/reference_integrals.json"

LAWS = [Marginal("normal", (0, 1)), Marginal("exponential", (1,)), Marginal("beta", (2, 4))]


def main():
    table = {}
    for law in LAWS:
        spec = DistributionSpec.iid(law, 5)
        for name in ("gapk", "osc"):
            ref = compute_reference(INTEGRANDS[name](spec), spec)
            table[reference_key(name, spec)] = asdict(ref)
            print(reference_key(name, spec), ref)
    spec = borehole_spec()
    ref = compute_reference(INTEGRANDS["borehole"](spec), spec)
    table[reference_key("borehole", spec)] = asdict(ref)
    print("borehole", ref)
    OUT.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
