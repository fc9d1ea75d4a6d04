#!/usr/bin/env python3
"""Convert a FIMI transaction file to Matrix Market coordinate pattern.

Each input line is one transaction: whitespace-separated integer item ids.
Transactions become rows (in file order); items become columns after a
dense reindex of the sorted distinct ids. Prints the resulting shape so it
can be checked against manifest.txt.

Usage: python3 fimi_to_mtx.py INPUT.dat OUTPUT.mtx
"""
import sys


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    src, dst = sys.argv[1], sys.argv[2]
    rows = []
    items = set()
    with open(src) as f:
        for line in f:
            ids = [int(tok) for tok in line.split()]
            if ids:
                rows.append(ids)
                items.update(ids)
    col_of = {item: i for i, item in enumerate(sorted(items))}
    entries = sorted(
        {(r, col_of[item]) for r, ids in enumerate(rows) for item in ids}
    )
    with open(dst, "w") as f:
        f.write("%%MatrixMarket matrix coordinate pattern general\n")
        f.write(f"{len(rows)} {len(col_of)} {len(entries)}\n")
        for r, c in entries:
            f.write(f"{r + 1} {c + 1}\n")
    print(f"{dst}: {len(rows)} x {len(col_of)}, {len(entries)} ones")
    return 0


if __name__ == "__main__":
    sys.exit(main())
