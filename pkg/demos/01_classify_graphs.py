#!/usr/bin/env python3
"""Classify the adjacency structures that drive every bound in the library.

Walks the standard families, printing for each: size, regularity, diameter,
the per-vertex distance profile, the distance-regularity certificate and
the sharply-transitive-family certificate.  The interesting rows:

* product domains (hamming:U,V) carry both symmetries, so every result in
  the library applies to them;
* the path on three vertices carries neither: its middle vertex is pinned
  by every automorphism;
* the Petersen graph is famously not a Cayley graph, yet the cover search
  finds a sharply transitive *set* of automorphisms, so it still enjoys
  the vertex-transitivity route.
"""

from dpchannel import (
    build_family,
    common_profile,
    distances,
    is_distance_regular,
    vt_plus_certificate,
)

FAMILIES = [
    "clique:6",
    "cycle:6",
    "path:3",
    "petersen",
    "hamming:2,2",
    "hamming:3,2",
    "hamming:2,3",
    "hamming:3,3",
]


def describe(spec):
    g = build_family(spec)
    dm = distances(g)
    degrees = sorted(set(g.degrees))
    regular = f"{degrees[0]}-regular" if len(degrees) == 1 else f"degrees {degrees}"
    print(f"{spec:12s}  n={g.n:<3d} {regular}, diameter {dm.diameter}")

    shared = common_profile(g)
    if shared is None:
        print(f"{'':14s}profile varies with the base vertex -> bounds not applicable")
    else:
        print(f"{'':14s}profile {tuple(shared.counts)} from every base vertex")

    array = is_distance_regular(g)
    if array is None:
        print(f"{'':14s}distance-regular: no")
    else:
        print(f"{'':14s}distance-regular: yes, b={tuple(array.b)} c={tuple(array.c)}")

    cert = vt_plus_certificate(g)
    print(f"{'':14s}sharply transitive family: {cert.status} ({cert.method})")
    print()


def main():
    for spec in FAMILIES:
        describe(spec)


if __name__ == "__main__":
    main()
