"""Corner polyhedron statistics over the seeded random rational suite.

    python3 scripts/random_suite.py --count 20 --max-q 5
"""

import argparse
import dataclasses
import json
import time
from dataclasses import dataclass

from cornerlab import hull, suite


@dataclass
class Config:
    seed: int = 20240601
    count: int = 50
    max_n: int = 2
    max_P: int = 4
    max_q: int = 7
    facets: bool = True
    json_out: str | None = None


def parse() -> Config:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for f in dataclasses.fields(Config):
        flag = "--" + f.name.replace("_", "-")
        if f.type in ("bool", bool):
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=f.default)
        else:
            p.add_argument(flag, type=int if f.type in ("int", int) else str, default=f.default)
    return Config(**vars(p.parse_args()))


def main():
    cfg = parse()
    insts = suite.rational_suite(suite.SuiteConfig(cfg.seed, cfg.count, cfg.max_n, cfg.max_P, 2, cfg.max_q))
    rows = []
    print(f"{'#':>3} {'n':>2} {'|P|':>3} {'|E|':>4} {'rays':>4} {'dim':>3} {'facets':>6} {'secs':>7}")
    for i, inst in enumerate(insts):
        t0 = time.perf_counter()
        cp = hull.build(inst)
        fs = hull.facets(cp) if cfg.facets else []
        secs = time.perf_counter() - t0
        row = {"n": inst.n, "P": len(inst.P), "E": len(cp.E), "rays": len(cp.rays),
               "dim": hull.dimension(cp), "facets": len(fs), "seconds": round(secs, 4),
               "instance": inst.to_json()}
        rows.append(row)
        print(f"{i:>3} {row['n']:>2} {row['P']:>3} {row['E']:>4} {row['rays']:>4} {row['dim']:>3} "
              f"{row['facets']:>6} {secs:>7.3f}")
    total = sum(r["seconds"] for r in rows)
    print(f"{len(rows)} instances, max |E| {max(r['E'] for r in rows)}, "
          f"max rays {max(r['rays'] for r in rows)}, {total:.2f}s")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": dataclasses.asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
