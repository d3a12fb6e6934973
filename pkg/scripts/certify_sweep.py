#!/usr/bin/env python3
"""Certify minimum almost k-cover sizes over a range of small grids."""
import argparse
import json
import time

from hypercover.errors import BudgetExceeded
from hypercover.search import certify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--max-nodes", type=int, default=2_000_000)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args()
    for k in range(1, args.max_k + 1):
        for n in range(1, args.max_n + 1):
            for m in range(1, args.max_m + 1):
                t0 = time.perf_counter()
                try:
                    cert = certify(m, n, k, max_nodes=args.max_nodes)
                    row = {"m": m, "n": n, "k": k, "value": cert.value, "lower": cert.lower,
                           "tag": cert.lower_tag, "status": cert.status, "source": cert.source,
                           "nodes": cert.nodes}
                except BudgetExceeded as exc:
                    row = {"m": m, "n": n, "k": k, "status": "budget", "nodes": exc.nodes, **exc.partial}
                row["seconds"] = round(time.perf_counter() - t0, 3)
                if args.json:
                    print(json.dumps(row, sort_keys=True))
                else:
                    print(f"m={m} n={n} k={k}: value={row.get('value', '?')} lower={row.get('lower')} "
                          f"status={row['status']} nodes={row['nodes']} ({row['seconds']}s)")


if __name__ == "__main__":
    main()
