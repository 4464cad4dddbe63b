#!/usr/bin/env python3
"""Re-derive summary.csv from trials.csv and compare.

Per (dataset, trainer, fold) the trial with the best training accuracy is
kept (ties: lower training MSE, then lower seed); the summary value is the
mean of the two fold selections, printed with 6 decimals.
"""

import csv
import sys
from collections import defaultdict


def main(out_dir):
    best = {}
    rows = 0
    with open(f"{out_dir}/trials.csv", newline="") as f:
        for r in csv.DictReader(f):
            rows += 1
            if r["status"] != "ok":
                continue
            key = (r["dataset"], r["trainer"], r["fold"])
            rank = (-float(r["train_accuracy_pct"]), float(r["train_mse"]), int(r["seed"]))
            if key not in best or rank < best[key][0]:
                best[key] = (rank, r)

    cells = defaultdict(list)
    for (ds, tr, _), (_, r) in best.items():
        cells[(ds, tr)].append(r)

    bad = 0
    checked = 0
    with open(f"{out_dir}/summary.csv", newline="") as f:
        for s in csv.DictReader(f):
            picks = cells.get((s["dataset"], s["trainer"]), [])
            if len(picks) != 2:
                print(f"{s['dataset']}/{s['trainer']}: {len(picks)} fold selections")
                bad += 1
                continue
            for col in ("train_mse", "train_accuracy_pct", "test_mse", "test_accuracy_pct"):
                want = "%.6f" % (float(picks[0][col]) / 2 + float(picks[1][col]) / 2)
                checked += 1
                if want != s[col]:
                    print(f"{s['dataset']}/{s['trainer']} {col}: summary {s[col]} recomputed {want}")
                    bad += 1
    print(f"{rows} trial rows, {checked} summary values checked, {bad} mismatches")
    return 1 if bad or checked == 0 else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "."))
