#!/usr/bin/env python3
"""Convert a flat gate-level Verilog netlist (ISCAS85 style primitives) to BLIF.

Only the primitive gates and/nand/or/nor/xor/xnor/not/buf are understood.

usage: gates_to_blif.py c432.v > c432.blif
"""
import re
import sys


def cover(gate, n):
    if gate == "and":
        return ["1" * n + " 1"]
    if gate == "nand":
        return ["1" * n + " 0"]
    if gate == "or":
        return ["0" * n + " 0"]
    if gate == "nor":
        return ["0" * n + " 1"]
    if gate == "not":
        return ["0 1"]
    if gate == "buf":
        return ["1 1"]
    if gate in ("xor", "xnor"):
        want = 1 if gate == "xor" else 0
        rows = []
        for v in range(1 << n):
            bits = [(v >> i) & 1 for i in range(n)]
            if sum(bits) % 2 == want:
                rows.append("".join(map(str, bits)) + " 1")
        return rows
    raise ValueError("unsupported gate " + gate)


def main(path):
    text = open(path).read()
    text = re.sub(r"//.*", "", text)
    stmts = [s.strip() for s in text.split(";")]
    model, inputs, outputs, gates = None, [], [], []
    for s in stmts:
        s = " ".join(s.split())
        if not s:
            continue
        m = re.match(r"module (\w+)", s)
        if m:
            model = m.group(1)
            continue
        m = re.match(r"(input|output|wire) (.*)", s)
        if m:
            names = [x.strip() for x in m.group(2).split(",")]
            if m.group(1) == "input":
                inputs += names
            elif m.group(1) == "output":
                outputs += names
            continue
        m = re.match(r"(\w+) \w+ \((.*)\)", s)
        if m:
            pins = [x.strip() for x in m.group(2).split(",")]
            gates.append((m.group(1), pins[0], pins[1:]))
    out = [".model " + model, ".inputs " + " ".join(inputs), ".outputs " + " ".join(outputs)]
    for gate, y, xs in gates:
        out.append(".names " + " ".join(xs + [y]))
        out += cover(gate, len(xs))
    out.append(".end")
    print("\n".join(out))


if __name__ == "__main__":
    main(sys.argv[1])
