#!/usr/bin/env python3
"""Emit exact unsigned ripple-carry adder / array multiplier netlists as BLIF.

usage: gen_arith.py add <bits> > add8u.blif
       gen_arith.py mul <bits> > mul7u.blif
Operand a occupies the first <bits> inputs (LSB first), b the next <bits>.
"""
import sys


class Netlist:
    def __init__(self, name):
        self.name = name
        self.lines = []
        self.count = 0

    def fresh(self):
        self.count += 1
        return "n%d" % self.count

    def gate(self, ins, rows, out=None):
        out = out or self.fresh()
        self.lines.append(".names " + " ".join(ins + [out]))
        self.lines += rows
        return out

    def and2(self, a, b, out=None):
        return self.gate([a, b], ["11 1"], out)

    def xor2(self, a, b, out=None):
        return self.gate([a, b], ["01 1", "10 1"], out)

    def maj(self, a, b, c, out=None):
        return self.gate([a, b, c], ["11- 1", "1-1 1", "-11 1"], out)

    def buf(self, a, out):
        return self.gate([a], ["1 1"], out)

    def const0(self, out):
        return self.gate([], [], out)

    def full_add(self, a, b, c):
        return self.xor2(self.xor2(a, b), c), self.maj(a, b, c)

    def half_add(self, a, b):
        return self.xor2(a, b), self.and2(a, b)


def adder(bits):
    n = Netlist("add%du" % bits)
    a = ["a%d" % i for i in range(bits)]
    b = ["b%d" % i for i in range(bits)]
    s = ["s%d" % i for i in range(bits + 1)]
    carry = None
    for i in range(bits):
        if carry is None:
            sm, carry = n.half_add(a[i], b[i])
        else:
            sm, carry = n.full_add(a[i], b[i], carry)
        n.buf(sm, s[i])
    n.buf(carry, s[bits])
    return n, a + b, s


def multiplier(bits):
    n = Netlist("mul%du" % bits)
    a = ["a%d" % i for i in range(bits)]
    b = ["b%d" % i for i in range(bits)]
    p = ["p%d" % i for i in range(2 * bits)]
    # columns of partial products, reduced row by row (array multiplier)
    acc = [n.and2(a[i], b[0]) for i in range(bits)] + [None] * bits
    for j in range(1, bits):
        carry = None
        for i in range(bits):
            pp = n.and2(a[i], b[j])
            col = i + j
            cur = acc[col]
            if cur is None and carry is None:
                acc[col] = pp
            elif cur is None or carry is None:
                acc[col], carry = n.half_add(pp, cur if cur is not None else carry)
            else:
                acc[col], carry = n.full_add(pp, cur, carry)
        acc[bits + j] = carry
    for k in range(2 * bits):
        if acc[k] is None:
            n.const0(p[k])
        else:
            n.buf(acc[k], p[k])
    return n, a + b, p


def main():
    kind, bits = sys.argv[1], int(sys.argv[2])
    n, ins, outs = adder(bits) if kind == "add" else multiplier(bits)
    print(".model " + n.name)
    print(".inputs " + " ".join(ins))
    print(".outputs " + " ".join(outs))
    print("\n".join(n.lines))
    print(".end")


if __name__ == "__main__":
    main()
