#!/usr/bin/env python3
"""Independent hand-count of (system, stable ideal sequence) pairs.

Finite systems are permutations up to conjugacy (one per cycle type, cycles
laid out on consecutive labels). A stable sequence X_0..X_{l-1} is counted when
  * X_{n+1} | phi(X_{n+1}) <= X_n for n < l-1, and phi(X_{l-1}) <= X_{l-1},
  * l == 1 or X_{l-2} != X_{l-1} (shortest representation),
  * it is not the zero ideal (constant sequence equal to the carrier).
Writes "<size> <cycle type> <count>" lines and a total.
"""
import itertools
import sys


def partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield []
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in partitions(n - p, p):
            yield [p] + rest


def perm_from_type(parts):
    phi = {}
    start = 0
    for p in parts:
        for i in range(p):
            phi[start + i] = start + (i + 1) % p
        start += p
    return phi


def count(size, parts, max_len):
    phi = perm_from_type(parts)
    carrier = frozenset(range(size))
    subsets = [frozenset(c) for r in range(size + 1)
               for c in itertools.combinations(range(size), r)]
    img = lambda s: frozenset(phi[x] for x in s)
    total = 0
    for length in range(1, max_len + 1):
        for seq in itertools.product(subsets, repeat=length):
            if not img(seq[-1]) <= seq[-1]:
                continue
            if any(not (seq[i + 1] | img(seq[i + 1])) <= seq[i] for i in range(length - 1)):
                continue
            if length >= 2 and seq[-2] == seq[-1]:
                continue
            if length == 1 and seq[0] == carrier:
                continue
            total += 1
    return total


def main():
    max_carrier = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    max_len = int(sys.argv[2]) if len(sys.argv) > 2 else 3
    grand = 0
    for size in range(1, max_carrier + 1):
        for parts in sorted(partitions(size), key=lambda p: (max(p), sorted(p))):
            c = count(size, sorted(parts, reverse=True), max_len)
            grand += c
            print(size, ",".join(map(str, sorted(parts, reverse=True))), c)
    print("total", grand)


if __name__ == "__main__":
    main()
