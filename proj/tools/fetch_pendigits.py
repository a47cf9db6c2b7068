#!/usr/bin/env python3
"""Regenerate data/pendigits.csv from the KEEL "penbased" table.

The KEEL archive ships the full pen-based digits pool (10992 rows). The first
7494 rows are kept so the instance count matches the commonly used PenDigits
benchmark size. Output: 16 integer features then the digit label, no header.
"""
import argparse
import io
import json
import urllib.request
import zipfile

PACKAGE = "keel-ds"
MEMBER = "keel_ds/data/balanced/raw/penbased.dat"
ROWS = 7494


def wheel_url():
    with urllib.request.urlopen(f"https://pypi.org/pypi/{PACKAGE}/json") as resp:
        meta = json.load(resp)
    for entry in meta["urls"]:
        if entry["filename"].endswith(".whl"):
            return entry["url"]
    raise SystemExit("no wheel published for " + PACKAGE)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel", help="local keel-ds wheel (skips download)")
    ap.add_argument("--out", default="data/pendigits.csv")
    args = ap.parse_args()

    if args.wheel:
        blob = open(args.wheel, "rb").read()
    else:
        with urllib.request.urlopen(wheel_url()) as resp:
            blob = resp.read()
    text = zipfile.ZipFile(io.BytesIO(blob)).read(MEMBER).decode()
    rows = [l for l in text.splitlines() if l.strip() and not l.startswith("@")]
    with open(args.out, "w") as f:
        for line in rows[:ROWS]:
            f.write(",".join(x.strip() for x in line.split(",")) + "\n")
    print(f"wrote {min(ROWS, len(rows))} rows to {args.out}")


if __name__ == "__main__":
    main()
