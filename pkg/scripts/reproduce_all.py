"""Run every reference re-derivation and print a one-line verdict for each."""

import argparse
import json
import sys

from qjoin.reproduce import CHECKS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", choices=sorted(CHECKS), help="subset of checks to run")
    ap.add_argument("--json", action="store_true", help="dump full details instead of verdicts")
    args = ap.parse_args()

    results = {name: CHECKS[name]() for name in (args.only or CHECKS)}
    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True, default=str))
    else:
        for name, res in results.items():
            print(f"{name:10s} {'ok' if res['passed'] else 'FAILED'}")
    return 0 if all(r["passed"] for r in results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
