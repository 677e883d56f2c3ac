#!/usr/bin/env python3
"""Generate IWLS-2020-style single-output PLA cases (train/valid/test, 6400 rows each).

Rows are drawn without overlap from the full input space using a fixed seed.

usage: gen_pla_cases.py <out_dir>
"""
import os
import random
import sys

ROWS = 6400


def adder_msb(k):
    def f(bits):
        a = sum(bits[i] << i for i in range(k))
        b = sum(bits[k + i] << i for i in range(k))
        return ((a + b) >> (k - 1)) & 1
    return 2 * k, f


def comparator(k):
    def f(bits):
        a = sum(bits[i] << i for i in range(k))
        b = sum(bits[k + i] << i for i in range(k))
        return int(a > b)
    return 2 * k, f


CASES = {
    "add16_msb": adder_msb(16),
    "cmp10": comparator(10),
}


def write(path, width, rows):
    with open(path, "w") as out:
        out.write(".i %d\n.o 1\n.p %d\n.type fr\n" % (width, len(rows)))
        for bits, label in rows:
            out.write("".join(map(str, bits)) + " %d\n" % label)
        out.write(".e\n")


def main(out_dir):
    rng = random.Random(2020)
    for name, (width, fn) in CASES.items():
        seen = set()
        sets = []
        for _ in range(3):
            rows = []
            while len(rows) < ROWS:
                v = rng.getrandbits(width)
                if v in seen:
                    continue
                seen.add(v)
                bits = [(v >> i) & 1 for i in range(width)]
                rows.append((bits, fn(bits)))
            sets.append(rows)
        for tag, rows in zip(("train", "valid", "test"), sets):
            write(os.path.join(out_dir, "%s.%s.pla" % (name, tag)), width, rows)


if __name__ == "__main__":
    main(sys.argv[1])
