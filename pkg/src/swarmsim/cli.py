"""Command-line front door: bench, run, serve, list-scenarios."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .batching import set_default_dtype


def _parse_env_counts(text: str) -> list[int]:
    try:
        counts = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad env count list {text!r}") from None
    if not counts or any(n < 1 for n in counts):
        raise argparse.ArgumentTypeError("env counts must be positive integers")
    return counts


def _parse_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise argparse.ArgumentTypeError(f"override {pair!r} is not key=value")
        key, value = pair.split("=", 1)
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmsim",
        description="Vectorized 2D multi-robot simulator",
    )
    parser.add_argument(
        "--float64", action="store_true", help="run physics in double precision"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="time vectorized vs sequential stepping")
    bench.add_argument("--scenario", default="simple_spread")
    bench.add_argument("--envs", type=_parse_env_counts, default=[1, 1000], metavar="N[,N...]")
    bench.add_argument("--steps", type=int, default=100)
    bench.add_argument("--mode", choices=["both", "vectorized", "sequential"], default="both")
    bench.add_argument("--out", default="bench.csv")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="scenario config override (repeatable)")

    run = sub.add_parser("run", help="roll out episodes with a built-in policy")
    run.add_argument("--scenario", default="simple_spread")
    run.add_argument("--envs", type=int, default=1)
    run.add_argument("--steps", type=int, default=None, help="horizon override")
    run.add_argument("--policy", choices=["heuristic", "random"], default="heuristic")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--dump-frames", default=None, metavar="DIR",
                     help="write one frame JSON per step for env 0")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    serve = sub.add_parser("serve", help="stream frames to viewers over a websocket")
    serve.add_argument("--scenario", default="simple_spread")
    serve.add_argument("--envs", type=int, default=1)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--tick-rate", type=float, default=20.0)
    serve.add_argument("--policy", choices=["heuristic", "random"], default="heuristic")
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    sub.add_parser("list-scenarios", help="print the available scenario names")
    return parser


def _make_policy(name: str, seed: int):
    from .rollout import HeuristicPolicy, RandomPolicy

    return RandomPolicy(seed) if name == "random" else HeuristicPolicy()


def _cmd_bench(args) -> int:
    from .bench import bench_throughput, steps_per_second, write_csv

    rows = bench_throughput(
        scenario_name=args.scenario,
        env_counts=args.envs,
        n_steps=args.steps,
        mode=args.mode,
        seed=args.seed,
        overrides=_parse_overrides(args.set),
        threads=args.threads,
    )
    write_csv(rows, args.out)
    for row in rows:
        rate = steps_per_second(row)
        print(
            f"{row.mode:>10}  n_envs={row.n_envs:<7d} steps={row.steps:<5d} "
            f"{row.seconds:8.3f}s  ({rate:,.0f} env-steps/s)"
        )
    print(f"wrote {args.out}")
    return 0


def _cmd_run(args) -> int:
    from .env import Env
    from .rollout import run_episode
    from .scenarios import create_scenario
    from .viewer import encode_frame, snapshot_from_env

    scenario = create_scenario(args.scenario, **_parse_overrides(args.set))
    env = Env(scenario, batch_size=args.envs, seed=args.seed, max_steps=args.steps)
    policy = _make_policy(args.policy, args.seed)

    if args.dump_frames is None:
        returns = run_episode(env, policy)
        mean = float(returns.mean())
        print(f"{args.scenario}: {env.batch_size} envs, policy={args.policy}, "
              f"mean return {mean:.4f}")
        return 0

    os.makedirs(args.dump_frames, exist_ok=True)
    obs = env.reset()
    for t in range(env.max_steps):
        result = env.step(policy(env, obs))
        obs = result.obs
        snap = snapshot_from_env(env, 0)
        path = os.path.join(args.dump_frames, f"frame_{t:06d}.json")
        with open(path, "w") as fh:
            fh.write(encode_frame(snap))
        if bool(result.dones[0]):
            break
    print(f"wrote frames to {args.dump_frames}")
    return 0


def _cmd_serve(args) -> int:
    import asyncio

    from .env import Env
    from .scenarios import create_scenario
    from .viewer import serve_viewer

    scenario = create_scenario(args.scenario, **_parse_overrides(args.set))
    env = Env(scenario, batch_size=args.envs, seed=args.seed)
    policy = _make_policy(args.policy, args.seed)
    print(f"serving {args.scenario} on ws://{args.host}:{args.port} "
          f"(tick rate {args.tick_rate:g}/s)")
    try:
        asyncio.run(
            serve_viewer(env, host=args.host, port=args.port,
                         tick_rate=args.tick_rate, policy=policy)
        )
    except KeyboardInterrupt:
        print("stopped")
    return 0


def _cmd_list(_args) -> int:
    from .scenarios import scenario_names

    for name in scenario_names():
        print(name)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.float64:
        set_default_dtype("float64")
    handlers = {
        "bench": _cmd_bench,
        "run": _cmd_run,
        "serve": _cmd_serve,
        "list-scenarios": _cmd_list,
    }
    try:
        return handlers[args.command](args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # surface runtime failures as exit 1, not tracebacks
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
