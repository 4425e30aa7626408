#!/usr/bin/env python3
"""Regenerates the small networks under tests/data.

Karate and Les Miserables come from networkx's bundled copies; both are written
unweighted. Football needs a local copy of football.gml (pass --football).
The LFR-style instance is written in the layout of the reference LFR tool:
1-based ids, every edge listed in both directions.
"""
import argparse
import pathlib

import networkx as nx
import numpy as np


def write_edges(path, g, label):
    with open(path, "w") as f:
        for u, v in g.edges():
            f.write(f"{label(u)} {label(v)}\n")


def write_membership(path, pairs):
    with open(path, "w") as f:
        for node, c in pairs:
            f.write(f"{node} {c}\n")


def power_law(rng, exponent, lo, hi, size):
    """Continuous power law on [lo, hi] by inverse transform."""
    u = rng.random(size)
    if abs(exponent - 1.0) < 1e-12:
        return lo * (hi / lo) ** u
    a = 1.0 - exponent
    return (lo ** a + u * (hi ** a - lo ** a)) ** (1.0 / a)


def lfr_like(n, k, max_k, mu, min_c, max_c, tau1, tau2, seed):
    """Planted partition with power-law degrees and community sizes.

    Each node keeps round((1 - mu) * d) stubs inside its community and the
    rest outside; stubs are paired at random; pairs that would form a self-loop or a
    repeated edge are re-paired a bounded number of times, then dropped.
    """
    rng = np.random.default_rng(seed)
    lo, hi = 1.0, float(max_k)
    for _ in range(60):  # bisect the lower cutoff to hit the mean degree
        mid = (lo + hi) / 2
        mean = power_law(np.random.default_rng(seed), tau1, mid, max_k, 200000).mean()
        lo, hi = (mid, hi) if mean < k else (lo, mid)
    deg = np.rint(power_law(rng, tau1, lo, max_k, n)).astype(int)
    while abs(deg.mean() - k) > 0.2:  # heavy tail: redraw until the sample mean is close to k
        deg = np.rint(power_law(rng, tau1, lo, max_k, n)).astype(int)
    if deg.sum() % 2:
        deg[0] += 1
    internal = np.rint((1.0 - mu) * deg).astype(int)

    sizes = []
    while sum(sizes) < n:
        sizes.append(int(round(power_law(rng, tau2, min_c, max_c, 1)[0])))
    sizes[-1] -= sum(sizes) - n
    if sizes[-1] < min_c:
        short = sizes.pop()
        for i in range(short):
            sizes[i % len(sizes)] += 1
    room = list(sizes)
    comm = np.empty(n, dtype=int)
    for v in sorted(range(n), key=lambda v: -internal[v]):
        ok = [c for c in range(len(sizes)) if room[c] > 0 and sizes[c] > internal[v]]
        c = ok[rng.integers(len(ok))]
        comm[v] = c
        room[c] -= 1

    edges = set()

    def valid(u, v, same_ok):
        e = (min(u, v), max(u, v))
        return u != v and e not in edges and (same_ok or comm[u] != comm[v])

    def pair(stubs, same_ok):
        placed = []
        for _ in range(100):  # re-pair rejected stubs a bounded number of times
            stubs = list(stubs)
            rng.shuffle(stubs)
            left = []
            for i in range(0, len(stubs) - 1, 2):
                u, v = stubs[i], stubs[i + 1]
                if valid(u, v, same_ok):
                    edges.add((min(u, v), max(u, v)))
                    placed.append((min(u, v), max(u, v)))
                else:
                    left += [u, v]
            if len(left) < 2:
                return
            stubs = left
        # Swap out: replace a placed edge (a, b) with (u, a) and (v, b).
        for i in range(0, len(stubs) - 1, 2):
            u, v = stubs[i], stubs[i + 1]
            for _ in range(200):
                a, b = placed[rng.integers(len(placed))]
                if (a, b) not in edges:
                    continue
                if rng.random() < 0.5:
                    a, b = b, a
                edges.discard((min(a, b), max(a, b)))
                if valid(u, a, same_ok) and valid(v, b, same_ok) and (min(u, a), max(u, a)) != (min(v, b), max(v, b)):
                    for x, y in ((u, a), (v, b)):
                        edges.add((min(x, y), max(x, y)))
                        placed.append((min(x, y), max(x, y)))
                    break
                edges.add((min(a, b), max(a, b)))

    for c in range(len(sizes)):
        members = np.flatnonzero(comm == c)
        pair([v for v in members for _ in range(internal[v])], True)
    pair([v for v in range(n) for _ in range(deg[v] - internal[v])], False)
    return sorted(edges), comm


def lfr(out, n, mu, seed):
    edges, comm = lfr_like(n, 15, 100, mu, 20, 100, 2.0, 1.0, seed)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    with open(out / f"lfr_n{n}_mu{mu}.network.dat", "w") as f:
        for u in range(n):
            for v in sorted(adj[u]):
                f.write(f"{u + 1}\t{v + 1}\n")
    with open(out / f"lfr_n{n}_mu{mu}.community.dat", "w") as f:
        for v in range(n):
            f.write(f"{v + 1}\t{comm[v] + 1}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "tests" / "data",
                    type=pathlib.Path)
    ap.add_argument("--football", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    write_edges(args.out / "karate.txt", nx.karate_club_graph(), str)
    lm = nx.les_miserables_graph()
    write_edges(args.out / "lesmis.txt", lm, lambda s: s.replace(" ", "_"))

    if args.football:
        fb = nx.read_gml(args.football, label="id")
        write_edges(args.out / "football.txt", fb, str)
        write_membership(args.out / "football.truth.txt", [(v, fb.nodes[v]["value"]) for v in sorted(fb.nodes())])

    lfr(args.out, 1000, 0.2, args.seed)


if __name__ == "__main__":
    main()
