"""Vertex, edge and polygon counts of Davis-complex balls from the closure oracle."""
import itertools
import sys

from word_ball import closure_nf


def counts(m, M, radius):
    lab = {(i, j): M for i in range(1, m + 1) for j in range(1, m + 1) if i != j}
    elems = set()
    for L in range(radius + 1):
        for w in itertools.product(range(1, m + 1), repeat=L):
            elems.add(closure_nf(w, lab))
    edges = set()
    for g in elems:
        for s in range(1, m + 1):
            h = closure_nf(g + (s,), lab)
            if h in elems:
                edges.add(frozenset((g, h)))
    polys = set()
    for g in elems:
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                coset = set()
                for L in range(2 * M):
                    for start in (i, j):
                        w = tuple(start if k % 2 == 0 else (j if start == i else i) for k in range(L))
                        coset.add(closure_nf(g + w, lab))
                if coset <= elems:
                    polys.add(frozenset(coset))
    return len(elems), len(edges), len(polys)


if __name__ == "__main__":
    print(counts(*map(int, sys.argv[1:4])))
