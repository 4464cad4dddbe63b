#!/usr/bin/env python3
"""Download the three UCI benchmark files into data/.

Files are written in the original UCI layout that configs/benchmark.ini
declares:

  breast-cancer-wisconsin.data  id, 9 features, class (2 benign / 4 malignant), '?' = missing
  pima-indians-diabetes.data    8 features, class (0 / 1)
  bupa.data                     6 features, selector (1 / 2)

The UCI archive is tried first. When it is unreachable the script falls back to
the KEEL copies shipped inside the `keel-ds` wheel on PyPI (fetched with
`pip download`). Two differences apply to that fallback:
  * the KEEL Wisconsin copy already has the 16 incomplete rows removed and
    carries no sample code numbers, so sequential placeholder ids are written
    (the id column is ignored by the schema);
  * PIMA labels `tested_positive` / `tested_negative` are mapped to 1 / 0.
"""

import argparse
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases/"
SOURCES = {
    "breast-cancer-wisconsin.data": UCI + "breast-cancer-wisconsin/breast-cancer-wisconsin.data",
    "pima-indians-diabetes.data": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
    "bupa.data": UCI + "liver-disorders/bupa.data",
}
KEEL = {
    "breast-cancer-wisconsin.data": "wisconsin",
    "pima-indians-diabetes.data": "pima",
    "bupa.data": "bupa",
}


def fetch_url(url):
    with urllib.request.urlopen(url, timeout=20) as r:
        return r.read().decode()


def keel_rows(wheel, name):
    text = zipfile.ZipFile(wheel).read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([t.strip() for t in line.split(",")])
    return rows


def from_keel(wheel, target):
    rows = keel_rows(wheel, KEEL[target])
    out = []
    for n, r in enumerate(rows, start=1):
        if target == "breast-cancer-wisconsin.data":
            r = [str(n)] + r
        elif target == "pima-indians-diabetes.data":
            r = r[:-1] + ["1" if r[-1] == "tested_positive" else "0"]
        out.append(",".join(r))
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dest", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--offline-only", action="store_true", help="skip the UCI archive")
    args = ap.parse_args()
    dest = pathlib.Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)

    wheel = None
    for target, url in SOURCES.items():
        text = None
        if not args.offline_only:
            try:
                text = fetch_url(url)
                print(f"{target}: downloaded from {url}")
            except Exception as e:  # noqa: BLE001
                print(f"{target}: {url} unreachable ({e}); using KEEL mirror", file=sys.stderr)
        if text is None:
            if wheel is None:
                tmp = tempfile.mkdtemp()
                subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                                "keel-ds==0.2.5", "-d", tmp], check=True)
                wheel = next(pathlib.Path(tmp).glob("keel_ds-*.whl"))
            text = from_keel(wheel, target)
            print(f"{target}: extracted from {wheel.name}")
        (dest / target).write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
