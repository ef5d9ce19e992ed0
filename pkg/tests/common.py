"""Shared fixture graphs for the test suite."""

from graphchase import build_graph


def unit_path():
    return build_graph(["a", "b"], [("a", "b", 1.0)])


def path_graph(n, length=1.0):
    verts = [f"v{i}" for i in range(n + 1)]
    return build_graph(verts, [(f"v{i}", f"v{i+1}", length) for i in range(n)])


def unit_cycle():
    # single loop edge; normalization splits it into three arcs
    return build_graph(["a"], [("a", "a", 1.0)])


def triangle(l0=1.0, l1=1.0, l2=1.0):
    return build_graph(["a", "b", "c"],
                       [("a", "b", l0), ("b", "c", l1), ("c", "a", l2)])


def star(k, arm=1.0):
    verts = ["O"] + [f"u{i}" for i in range(1, k + 1)]
    return build_graph(verts, [("O", f"u{i}", arm) for i in range(1, k + 1)])


def comb(k, length=1.0):
    verts = [f"v{i}" for i in range(1, k + 1)] + \
            [f"u{i}" for i in range(1, k + 1)]
    edges = [(f"v{i}", f"v{i+1}", length) for i in range(1, k)]
    edges += [(f"v{i}", f"u{i}", length) for i in range(1, k + 1)]
    return build_graph(verts, edges)
