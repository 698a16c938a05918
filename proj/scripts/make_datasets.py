#!/usr/bin/env python3
"""Builds the graph files bundled under data/.

karate is the genuine Zachary karate club network (via networkx) with the
standard two-faction split. The other four files are deterministic synthetic
stand-ins sized to match the well-known benchmark networks of the same name
(polbooks, football, adjnoun, polblogs): same vertex count, edge count, class
count and largest-class fraction, with community structure of a similar
flavour. They exist so the test suite runs offline; drop the original GML
files over them to run the real benchmarks -- the loaders accept either.

Usage: python3 scripts/make_datasets.py [outdir]
"""

import random
import sys
from pathlib import Path

import networkx as nx


def gml_escape(s):
    return str(s).replace('"', "'")


def write_gml(path, names, values, edges, quote_values):
    with open(path, "w") as f:
        f.write("graph [\n")
        for i, name in enumerate(names):
            f.write("  node [\n")
            f.write(f"    id {i}\n")
            if name is not None:
                f.write(f'    label "{gml_escape(name)}"\n')
            if values is not None:
                v = values[i]
                if quote_values:
                    f.write(f'    value "{gml_escape(v)}"\n')
                else:
                    f.write(f"    value {v}\n")
            f.write("  ]\n")
        for u, v in edges:
            f.write("  edge [\n")
            f.write(f"    source {u}\n")
            f.write(f"    target {v}\n")
            f.write("  ]\n")
        f.write("]\n")


def synth_community_graph(rng, class_sizes, n_edges, intra_frac, skew=0.0):
    """Connected undirected graph with exact edge count and planted classes.

    Starts from a random spanning tree that prefers same-class parents, then
    fills the remaining edges with class-biased endpoint sampling. `skew`
    adds power-law-ish degree heterogeneity.
    """
    n = sum(class_sizes)
    cls = []
    for c, size in enumerate(class_sizes):
        cls.extend([c] * size)
    rng.shuffle(cls)
    members = {}
    for v, c in enumerate(cls):
        members.setdefault(c, []).append(v)

    weight = [1.0] * n
    if skew > 0:
        for c, verts in members.items():
            order = verts[:]
            rng.shuffle(order)
            for rank, v in enumerate(order):
                weight[v] = (rank + 1) ** (-skew)

    def pick(verts, exclude=None):
        ws = [weight[v] for v in verts]
        total = sum(ws)
        while True:
            x = rng.random() * total
            acc = 0.0
            chosen = verts[-1]
            for v, w in zip(verts, ws):
                acc += w
                if x <= acc:
                    chosen = v
                    break
            if chosen != exclude:
                return chosen

    edges = set()

    def add(u, v):
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in edges:
            return False
        edges.add(key)
        return True

    # Spanning tree: attach each vertex to a placed vertex, same class if any.
    order = list(range(n))
    rng.shuffle(order)
    placed = [order[0]]
    placed_by_class = {cls[order[0]]: [order[0]]}
    for v in order[1:]:
        same = placed_by_class.get(cls[v], [])
        if same and rng.random() < intra_frac:
            parent = pick(same, exclude=v)
        else:
            parent = pick(placed, exclude=v)
        add(v, parent)
        placed.append(v)
        placed_by_class.setdefault(cls[v], []).append(v)

    classes = sorted(members)
    while len(edges) < n_edges:
        if rng.random() < intra_frac:
            c = rng.choice(classes)
            if len(members[c]) < 2:
                continue
            u = pick(members[c])
            v = pick(members[c], exclude=u)
        else:
            ca, cb = rng.sample(classes, 2)
            u = pick(members[ca])
            v = pick(members[cb])
        add(u, v)

    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    assert nx.is_connected(g)
    assert g.number_of_edges() == n_edges
    return cls, sorted(edges)


def make_karate(outdir):
    g = nx.karate_club_graph()
    # networkx records post-split club membership, which puts actor 9 with
    # Mr. Hi; the standard faction table has him on the officers' side,
    # giving the 16/18 split.
    faction = {v: (0 if g.nodes[v]["club"] == "Mr. Hi" else 1) for v in g}
    faction[8] = 1
    names = [str(v + 1) for v in g]
    values = [faction[v] for v in g]
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    write_gml(outdir / "karate.gml", names, values, edges, quote_values=False)
    with open(outdir / "karate.edges", "w") as f:
        f.write("# Zachary karate club, one edge per line\n")
        for u, v in edges:
            f.write(f"{names[u]} {names[v]}\n")
    with open(outdir / "karate_labels.tsv", "w") as f:
        for v in g:
            f.write(f"{names[v]}\t{'Mr. Hi' if faction[v] == 0 else 'Officer'}\n")
    counts = [values.count(0), values.count(1)]
    print(f"karate: V={g.number_of_nodes()} E={g.number_of_edges()} "
          f"factions={counts} largest={max(counts)/34:.4f}")


def make_standin(outdir, name, seed, class_sizes, n_edges, intra_frac,
                 skew, class_names=None, quote_values=False):
    rng = random.Random(seed)
    cls, edges = synth_community_graph(rng, class_sizes, n_edges, intra_frac, skew)
    n = len(cls)
    names = [f"{name[0]}{v}" for v in range(n)]
    if class_names is not None:
        values = [class_names[c] for c in cls]
    else:
        values = cls
    write_gml(outdir / f"{name}.gml", names, values, edges, quote_values)
    largest = max(class_sizes) / n
    print(f"{name}: V={n} E={len(edges)} classes={len(class_sizes)} "
          f"largest={largest:.4f}")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    outdir.mkdir(parents=True, exist_ok=True)
    make_karate(outdir)
    make_standin(outdir, "polbooks", seed=20240901,
                 class_sizes=[43, 48, 14], n_edges=441, intra_frac=0.85,
                 skew=0.5, class_names=["l", "c", "n"], quote_values=True)
    make_standin(outdir, "football", seed=20240902,
                 class_sizes=[13, 12, 11, 10, 10, 10, 9, 9, 9, 8, 7, 7],
                 n_edges=613, intra_frac=0.62, skew=0.0)
    make_standin(outdir, "adjnoun", seed=20240903,
                 class_sizes=[58, 54], n_edges=425, intra_frac=0.25, skew=0.6)
    make_standin(outdir, "polblogs", seed=20240904,
                 class_sizes=[636, 588], n_edges=16781, intra_frac=0.91,
                 skew=0.8)


if __name__ == "__main__":
    main()
