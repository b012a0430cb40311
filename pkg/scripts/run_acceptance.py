"""Run the acceptance criteria and optionally dump the details as JSON.

    python3 scripts/run_acceptance.py --only 1 2 5 --json-out acceptance.json
"""

import argparse
import json
import sys

from cornerlab import acceptance


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--only", type=int, nargs="*")
    p.add_argument("--json-out")
    a = p.parse_args()
    results = acceptance.run_all(a.only or None)
    for r in results:
        print(r.line())
    if a.json_out:
        with open(a.json_out, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2, default=str)
    sys.exit(0 if all(r.ok for r in results) else 1)


if __name__ == "__main__":
    main()
