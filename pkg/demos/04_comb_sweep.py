"""
Combs: a bounded threshold on an unbounded family
=================================================

A comb B_k is a backbone path of k vertices, each carrying one pendant
tooth.  Although its stars would individually demand ever higher speeds,
the whole comb (with equal edge lengths) falls to any s > 3: at each
backbone vertex only two directions are unknown at a time, so a 2-arm
cascade with capped probe durations clears the tooth before moving on.
"""

from graphchase import build_graph, comb_strategy, sweep_strategy, verify

k = 3
verts = [f"v{i}" for i in range(1, k + 1)] + [f"u{i}" for i in range(1, k + 1)]
edges = [(f"v{i}", f"v{i+1}", 1.0) for i in range(1, k)]
edges += [(f"v{i}", f"u{i}", 1.0) for i in range(1, k + 1)]
comb = build_graph(verts, edges)

cop = comb_strategy(comb, 3.5, truncation=1e-3)
print(f"comb B_{k} at s=3.5: planned duration {cop.duration:.3f}")
res = verify(cop, h=1e-3, eps=4e-3, want_witness=False)
print("verification:", res.verdict, "by t =", round(res.time_bound, 3))

# the same speed with a naive end-to-end sweep fails: the evader doubles
# back through a backbone vertex behind the pursuer
naive = sweep_strategy(comb, 3.5)
res = verify(naive, h=5e-3)
print("naive sweep at s=3.5:", res.verdict,
      "(witness clearance", round(res.min_clearance, 4), ")")

# below the threshold the construction refuses outright
try:
    comb_strategy(comb, 3.0)
except ValueError as exc:
    print("at s=3.0 ->", exc)
