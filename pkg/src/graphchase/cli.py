"""Command-line front door.

Subcommands: generate, verify, frontier, export-svg, selftest.  Exit codes:
0 success (verify: capture), 2 usage or input errors, 3 verified survival,
4 capture radius below the soundness floor.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .critical import FAMILIES, build_family, frontier_table, frontier_to_csv, \
    frontier_to_json
from .graph import GraphValidationError, load_graph
from .strategies import StrategyError, lambda_root
from .svg import export_svg
from .trajectory import PathValidationError, load_path, path_to_dict, save_path
from .verifier import ParameterError, brute_force_oracle, result_to_dict, \
    save_report, verify

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SURVIVAL = 3
EXIT_PARAMETER_FLOOR = 4


@dataclass
class CommandConfig:
    """Parsed invocation: one subcommand plus its files and numeric flags."""

    command: str
    graph: str | None = None
    strategy: str | None = None
    witness: str | None = None
    report: str | None = None
    out: str | None = None
    kind: str | None = None
    family: str | None = None
    speeds: tuple[float, ...] = ()
    speed: float | None = None
    resolution: float | None = None
    dt: float | None = None
    eps: float | None = None
    delta: float | None = None
    tol: float | None = None
    as_json: bool = False
    seed: int = 0
    cases: int = 40

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CommandConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        return cls(**fields)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="graphchase",
        description="Pursuit on metric graphs: construct pursuer strategies, "
                    "verify them against every unit-speed evader, and "
                    "estimate capture-speed frontiers.",
        epilog="exit codes: 0 ok/capture, 2 usage or input error, "
               "3 verified survival, 4 capture radius below floor")
    sub = p.add_subparsers(dest="command", required=True)

    def add_resolution(q):
        q.add_argument("--resolution", type=float, default=None, metavar="H",
                       help="target sample spacing (default: min edge / 50)")
        q.add_argument("--dt", type=float, default=None,
                       help="time step (default: the grid spacing)")
        q.add_argument("--eps", type=float, default=None,
                       help="capture radius (default: spacing + dt; must "
                            "exceed max(spacing, dt))")

    q = sub.add_parser("generate", help="construct a strategy trajectory")
    q.add_argument("--graph", required=True, help="graph JSON file")
    q.add_argument("--kind", required=True, choices=list(FAMILIES))
    q.add_argument("--speed", type=float, required=True)
    q.add_argument("--delta", type=float, default=None,
                   help="truncation scale for cascade openings "
                        "(default: min edge / 100)")
    q.add_argument("--out", default=None,
                   help="trajectory JSON output (default: stdout)")

    q = sub.add_parser("verify", help="decide capture vs survival")
    q.add_argument("--graph", required=True)
    q.add_argument("--strategy", required=True, help="trajectory JSON file")
    add_resolution(q)
    q.add_argument("--report", default=None, help="write JSON report here")
    q.add_argument("--witness", default=None,
                   help="write the survival witness trajectory here")

    q = sub.add_parser("frontier", help="verdict table over a speed list")
    q.add_argument("--graph", required=True)
    q.add_argument("--family", required=True, choices=list(FAMILIES))
    q.add_argument("--speeds", required=True,
                   help="comma-separated speed list, e.g. 0.5,1,1.5,2")
    q.add_argument("--delta", type=float, default=None)
    add_resolution(q)
    q.add_argument("--out", default=None, help="CSV output (default: stdout)")
    q.add_argument("--json", dest="as_json", action="store_true",
                   help="emit JSON instead of CSV")

    q = sub.add_parser("export-svg", help="time-space diagram of a strategy")
    q.add_argument("--graph", required=True)
    q.add_argument("--strategy", required=True)
    q.add_argument("--witness", default=None,
                   help="overlay this evader trajectory")
    q.add_argument("--eps", type=float, default=None,
                   help="shade a capture-radius tube of this width")
    q.add_argument("--out", required=True)

    q = sub.add_parser("selftest",
                       help="randomized agreement suite against the "
                            "brute-force oracle")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--cases", type=int, default=40)
    return p


def cmd_generate(cfg: CommandConfig) -> int:
    g = load_graph(cfg.graph)
    path = build_family(g, cfg.kind, cfg.speed, cfg.delta)
    doc = path_to_dict(path)
    if cfg.out:
        save_path(path, cfg.out)
        print(f"wrote {cfg.out}")
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        print()
    print(f"kind {path.metadata.get('kind', cfg.kind)}  "
          f"duration {path.duration:.6g}  breakpoints {len(path.times)}")
    return EXIT_OK


def cmd_verify(cfg: CommandConfig) -> int:
    g = load_graph(cfg.graph)
    cop = load_path(g, cfg.strategy)
    res = verify(cop, h=cfg.resolution, dt=cfg.dt, eps=cfg.eps)
    if cfg.report:
        save_report(res, cfg.report)
    if res.captured:
        print(f"capture: every unit-speed evader within eps={res.eps:.6g} "
              f"by t={res.time_bound:.6g} "
              f"(h={res.h:.6g} dt={res.dt:.6g} steps={res.n_steps})")
        return EXIT_OK
    print(f"survival: witness evader keeps clearance "
          f"{res.min_clearance:.6g} over the whole horizon "
          f"(eps={res.eps:.6g} h={res.h:.6g} dt={res.dt:.6g})")
    if cfg.witness and res.witness is not None:
        save_path(res.witness, cfg.witness)
        print(f"witness written to {cfg.witness}")
    return EXIT_SURVIVAL


def cmd_frontier(cfg: CommandConfig) -> int:
    g = load_graph(cfg.graph)
    rows = frontier_table(g, cfg.family, cfg.speeds, truncation=cfg.delta,
                          h=cfg.resolution, dt=cfg.dt, eps=cfg.eps)
    text = frontier_to_json(rows) if cfg.as_json else frontier_to_csv(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {cfg.out} ({len(rows)} rows)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export_svg(cfg: CommandConfig) -> int:
    g = load_graph(cfg.graph)
    cop = load_path(g, cfg.strategy)
    witness = load_path(g, cfg.witness) if cfg.witness else None
    text = export_svg(cop, witness=witness, eps=cfg.eps)
    with open(cfg.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {cfg.out}")
    return EXIT_OK


def cmd_selftest(cfg: CommandConfig) -> int:
    from .graph import build_graph
    from .randgen import oracle_instance
    from .strategies import cycle_loop, sweep_strategy

    failures = 0
    rng = random.Random(cfg.seed)
    for i in range(cfg.cases):
        cop, h, dt, eps = oracle_instance(rng)
        fast = verify(cop, h=h, dt=dt, eps=eps, want_witness=False)
        slow = brute_force_oracle(cop, h=h, dt=dt, eps=eps)
        same = (fast.verdict == slow.verdict
                and (fast.time_bound is None) == (slow.time_bound is None)
                and (fast.time_bound is None
                     or abs(fast.time_bound - slow.time_bound) < 1e-9))
        if not same:
            failures += 1
            print(f"case {i}: DISAGREE fast={fast.verdict}/{fast.time_bound} "
                  f"oracle={slow.verdict}/{slow.time_bound}")
    print(f"randomized: {cfg.cases} cases, {failures} disagreements")

    canned = 0
    path = build_graph(["a", "b"], [("a", "b", 1.0)])
    res = verify(sweep_strategy(path, 0.5), h=0.02)
    if not res.captured:
        canned += 1
        print("canned: path sweep should capture")
    cyc = build_graph(["a", "b", "c"],
                      [("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)])
    res = verify(cycle_loop(cyc, 1.0, 6.0), h=0.05)
    if res.captured or res.min_clearance <= 0:
        canned += 1
        print("canned: unit-speed cycle loop should admit a surviving evader")
    lam = lambda_root(3, 3.5)
    if abs(lam - 1.25) > 1e-12:
        canned += 1
        print("canned: growth factor closed form mismatch")
    print(f"canned: 3 checks, {canned} failures")
    if failures or canned:
        print("selftest FAILED")
        return 1
    print("selftest ok")
    return EXIT_OK


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    if getattr(ns, "speeds", None) is not None and isinstance(ns.speeds, str):
        try:
            ns.speeds = tuple(float(x) for x in ns.speeds.split(",") if x.strip())
        except ValueError:
            parser.error(f"bad --speeds list {ns.speeds!r}")
        if not ns.speeds:
            parser.error("--speeds list is empty")
    cfg = CommandConfig.from_args(ns)
    handlers = {
        "generate": cmd_generate,
        "verify": cmd_verify,
        "frontier": cmd_frontier,
        "export-svg": cmd_export_svg,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[cfg.command](cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER_FLOOR
    except (StrategyError, GraphValidationError, PathValidationError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
