import json
import math
import random

import pytest

from graphchase import (GraphPoint, PathBuilder, PathValidationError,
                        TimedPath, check_lipschitz, load_path, min_clearance,
                        path_from_dict, path_pieces, path_to_dict,
                        reparameterize_max_speed, save_path, total_variation,
                        transfer_scale, transfer_shorten, truncate_path,
                        variation_profile)
from graphchase.randgen import random_cop_path, random_graph

from common import path_graph, star, triangle, unit_path


def test_builder_basics():
    g = path_graph(2)
    pb = PathBuilder(g, "v0", 1.0)
    pb.move_to("v2", speed=1.0)
    p = pb.build({"kind": "demo"})
    assert p.duration == pytest.approx(2.0)
    assert p.metadata["kind"] == "demo"
    assert g.points_equal(p.evaluate(0.0), g.vertex_point("v0"))
    assert g.points_equal(p.evaluate(2.0), g.vertex_point("v2"))
    mid = p.evaluate(0.5)
    assert mid.edge == "e0" and abs(mid.offset - 0.5) < 1e-12
    mid = p.evaluate(1.5)
    assert mid.edge == "e1" and abs(mid.offset - 0.5) < 1e-12


def test_builder_wait_and_wait_until():
    g = unit_path()
    pb = PathBuilder(g, "a", 2.0)
    pb.wait(0.5)
    pb.move_to("b", speed=2.0)
    pb.wait_until(1.25)
    assert pb.now == pytest.approx(1.25)
    pb.wait_until(1.25)              # no-op
    with pytest.raises(PathValidationError):
        pb.wait_until(0.5)
    with pytest.raises(PathValidationError):
        pb.wait(0.0)
    p = pb.build()
    assert p.evaluate(0.25).offset == 0.0
    assert g.points_equal(p.evaluate(1.2), g.vertex_point("b"))


def test_speed_validation():
    g = unit_path()
    with pytest.raises(PathValidationError):
        TimedPath(g, (0.0, 0.1), (g.vertex_point("a"), g.vertex_point("b")),
                  ((("e0", 0.0, 1.0),),), 1.0, {})
    # exactly at the bound passes
    TimedPath(g, (0.0, 1.0), (g.vertex_point("a"), g.vertex_point("b")),
              ((("e0", 0.0, 1.0),),), 1.0, {})


def test_time_and_continuity_validation():
    g = unit_path()
    pa, pb_ = g.vertex_point("a"), g.vertex_point("b")
    with pytest.raises(PathValidationError):
        TimedPath(g, (0.0, 0.0), (pa, pb_), ((("e0", 0.0, 1.0),),), 5.0, {})
    with pytest.raises(PathValidationError):
        TimedPath(g, (0.5, 1.0), (pa, pa), ((),), 1.0, {})
    with pytest.raises(PathValidationError):
        # route does not end at the declared breakpoint
        TimedPath(g, (0.0, 1.0), (pa, pa), ((("e0", 0.0, 1.0),),), 5.0, {})


def test_evaluate_range_and_single_point():
    g = unit_path()
    p = PathBuilder(g, "a", 1.0).wait(1.0).build()
    with pytest.raises(ValueError):
        p.evaluate(2.0)
    with pytest.raises(ValueError):
        p.evaluate(-0.5)
    single = TimedPath(g, (0.0,), (g.vertex_point("a"),), (), 1.0, {})
    assert single.duration == 0.0
    assert g.points_equal(single.evaluate(0.0), g.vertex_point("a"))


def test_move_runs_splits_segments():
    g = triangle()
    pb = PathBuilder(g, "a", 5.0)
    pb.move_runs([("e0", 0.0, 1.0), ("e1", 0.0, 1.0)], 1.0)
    p = pb.build()
    assert len(p.times) == 3
    assert all(len(r) == 1 for r in p.routes)
    assert p.times[1] == pytest.approx(0.5)


def test_lipschitz_and_variation():
    g = path_graph(2)
    pb = PathBuilder(g, "v0", 2.0)
    pb.move_to("v2", speed=2.0)
    pb.wait(1.0)
    pb.move_to("v0", speed=1.0)
    p = pb.build()
    assert check_lipschitz(p, 2.0)
    assert not check_lipschitz(p, 1.0)
    assert total_variation(p) == pytest.approx(4.0)
    prof = variation_profile(p)
    assert prof.total == pytest.approx(4.0)
    assert prof.value(0.0) == 0.0
    assert prof.value(1.0) == pytest.approx(2.0)
    assert prof.value(1.5) == pytest.approx(2.0)   # flat during the wait
    assert prof.value(p.duration) == pytest.approx(4.0)


def test_reparameterize_full_speed():
    g = path_graph(2)
    pb = PathBuilder(g, "v0", 1.0)
    pb.wait(0.7)
    pb.move_to("v2", speed=0.8)
    pb.wait(0.3)
    pb.move_to("v0", speed=1.0)
    lazy = pb.build()
    for s in (0.5, 1.0, 2.0):
        fast = reparameterize_max_speed(lazy, s)
        assert abs(total_variation(fast) - s * fast.duration) < 1e-9
        assert check_lipschitz(fast, s)
        assert fast.graph.points_equal(fast.evaluate(0.0), lazy.evaluate(0.0))
        assert fast.graph.points_equal(fast.evaluate(fast.duration),
                                       lazy.evaluate(lazy.duration))


def test_reparameterize_stationary():
    g = unit_path()
    p = PathBuilder(g, "a", 1.0).wait(2.0).build()
    fast = reparameterize_max_speed(p, 1.0)
    assert fast.duration == 0.0


def test_truncate():
    g = path_graph(2)
    p = PathBuilder(g, "v0", 1.0).move_to("v2", speed=1.0).build()
    t = truncate_path(p, 1.3)
    assert t.duration == pytest.approx(1.3)
    assert g.points_equal(t.evaluate(1.3), p.evaluate(1.3))
    assert g.points_equal(t.evaluate(0.6), p.evaluate(0.6))
    assert truncate_path(p, 5.0) is p
    z = truncate_path(p, 0.0)
    assert z.duration == 0.0


def test_transfer_scale_geometry():
    g = path_graph(2)
    p = PathBuilder(g, "v0", 1.0).move_to("v2", speed=1.0).build()
    q = transfer_scale(p, 2.0)
    assert q.duration == pytest.approx(4.0)
    assert q.graph.total_length == pytest.approx(4.0)
    at = q.evaluate(1.0)
    assert at.edge == "e0" and at.offset == pytest.approx(1.0)
    assert q.speed_bound == p.speed_bound


def test_transfer_shorten_projection():
    g = path_graph(2)
    p = PathBuilder(g, "v0", 1.0).move_to("v2", speed=1.0).build()
    q = transfer_shorten(p, "e1", 0.5)
    assert q.graph.edge("e1").length == 0.5
    assert q.duration == p.duration
    # positions on the kept part are unchanged, beyond the cut they clamp
    assert q.evaluate(0.5).offset == pytest.approx(0.5)
    end = q.evaluate(2.0)
    assert end.edge == "e1" and end.offset == pytest.approx(0.5)
    assert check_lipschitz(q, 1.0)


def test_transfer_shorten_u_side_leaf():
    g = path_graph(2)
    p = PathBuilder(g, "v2", 1.0).move_to("v0", speed=1.0).build()
    q = transfer_shorten(p, "e0", 0.25)
    assert q.graph.edge("e0").length == 0.25
    end = q.evaluate(q.duration)
    assert q.graph.points_equal(end, q.graph.vertex_point("v0"))


def test_min_clearance_stationary():
    g = path_graph(2)
    cop = PathBuilder(g, "v0", 1.0).wait(1.0).build()
    rob = PathBuilder(g, "v2", 1.0).wait(1.0).build()
    assert min_clearance(cop, rob, 0.0, 1.0) == pytest.approx(2.0)


def test_min_clearance_crossing():
    g = unit_path()
    cop = PathBuilder(g, "a", 1.0).move_to("b", speed=1.0).build()
    rob = PathBuilder(g, "b", 1.0).move_to("a", speed=1.0).build()
    assert min_clearance(cop, rob, 0.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_min_clearance_parallel():
    g = path_graph(2)
    cop = PathBuilder(g, "v0", 1.0).move_to("v1", speed=1.0).build()
    rob = PathBuilder(g, "v1", 1.0).move_to("v2", speed=1.0).build()
    assert min_clearance(cop, rob, 0.0, 1.0) == pytest.approx(1.0)


def test_min_clearance_vs_sampling():
    rng = random.Random(11)
    for _ in range(15):
        g = random_graph(rng, max_vertices=5)
        a = random_cop_path(g, rng, moves=3)
        b = random_cop_path(g, rng, moves=3)
        t1 = min(a.duration, b.duration)
        if t1 <= 0:
            continue
        exact = min_clearance(a, b, 0.0, t1)
        sampled = min(g.distance(a.evaluate(min(t, a.duration)),
                                 b.evaluate(min(t, b.duration)))
                      for i in range(401)
                      for t in [t1 * i / 400])
        assert exact <= sampled + 1e-9
        # positions drift at most the combined speed between samples
        slack = (a.speed_bound + b.speed_bound) * (t1 / 400) / 2 + 1e-9
        assert exact >= sampled - slack


def test_path_pieces_cover():
    g = path_graph(2)
    p = PathBuilder(g, "v0", 1.0).move_to("v2", speed=1.0).wait(0.5).build()
    pieces = path_pieces(p, 0.0, p.duration)
    assert pieces[0][0] == 0.0
    assert pieces[-1][1] == pytest.approx(p.duration)
    for (_, tb, _, _, xb), (ta2, _, _, xa2, _) in zip(pieces, pieces[1:]):
        assert tb == pytest.approx(ta2)


def test_serialization_roundtrip(tmp_path):
    g = star(3)
    pb = PathBuilder(g, "O", 2.0)
    pb.move_to("u1", speed=2.0)
    pb.wait(0.25)
    pb.move_to("u3", speed=1.5)
    p = pb.build({"kind": "zigzag"})
    doc = path_to_dict(p)
    q = path_from_dict(g, doc)
    assert q.times == p.times
    assert q.points == p.points
    assert q.routes == p.routes
    assert q.metadata == p.metadata
    f = tmp_path / "p.json"
    save_path(p, f)
    r = load_path(g, f)
    assert r.times == p.times


def test_serialization_geodesic_routes():
    g = star(3)
    p = PathBuilder(g, "u1", 1.0).move_to("u2", speed=1.0).build()
    doc = path_to_dict(p)
    for seg in doc["routes"]:
        assert all(isinstance(eid, str) for eid in seg)
    # dropping the routes field still reconstructs via geodesics
    doc2 = dict(doc)
    doc2["routes"] = None
    q = path_from_dict(g, doc2)
    assert min_clearance(p, q, 0.0, p.duration) == pytest.approx(0.0,
                                                                 abs=1e-9)


def test_serialization_malformed(tmp_path):
    g = unit_path()
    with pytest.raises(PathValidationError):
        path_from_dict(g, {"speed": 1.0})
    with pytest.raises(PathValidationError):
        path_from_dict(g, {"speed": 1.0, "breakpoints": []})
    with pytest.raises(PathValidationError):
        path_from_dict(g, {"speed": 1.0,
                           "breakpoints": [{"t": 0.0, "edge": "nope",
                                            "offset": 0.0}]})
    f = tmp_path / "bad.json"
    f.write_text("{", encoding="utf-8")
    with pytest.raises(PathValidationError):
        load_path(g, f)
