#!/usr/bin/env python3
"""Convert the UCI glass.data file into the CSV layout this package loads.

Usage: python3 scripts/convert_glass.py /path/to/glass.data data/glass.csv

glass.data rows are: Id, RI, Na, Mg, Al, Si, K, Ca, Ba, Fe, Type.
All ten leading numeric columns are kept as raw features (the benchmark
that consumes this file counts the Id column toward its ten dimensions),
and the six glass types present (1, 2, 3, 5, 6, 7) are remapped to dense
class ids 0..5.
"""

import csv
import sys
from pathlib import Path

TYPE_TO_CLASS = {1: 0, 2: 1, 3: 2, 5: 3, 6: 4, 7: 5}


def main(argv: list[str]) -> int:
    if len(argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    src, dst = Path(argv[1]), Path(argv[2])
    rows = []
    with src.open(newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            if not record:
                continue
            *features, glass_type = record
            if len(features) != 10:
                print(f"unexpected arity: {record}", file=sys.stderr)
                return 1
            rows.append((features, TYPE_TO_CLASS[int(float(glass_type))]))
    dst.parent.mkdir(parents=True, exist_ok=True)
    with dst.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(10)] + ["label"])
        for features, cls in rows:
            writer.writerow(features + [cls])
    print(f"wrote {len(rows)} rows to {dst}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
