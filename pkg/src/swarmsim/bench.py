"""Throughput measurement: one batched run versus many single-env runs.

The vectorized mode steps one Env of batch size n; the sequential mode
steps n independent batch-size-1 Envs in a Python loop, which is the
honest baseline a batched simulator should beat. Actions are drawn up
front so the timings measure simulation, not action sampling.
"""
from __future__ import annotations

import csv
import sys
import time
from dataclasses import dataclass

import numpy as np

from .batching import SeededRng
from .env import Env
from .scenarios import create_scenario


@dataclass
class BenchRow:
    n_envs: int
    mode: str  # "vectorized" | "sequential"
    steps: int
    seconds: float


def _make_env(scenario_name: str, batch_size: int, seed: int, overrides: dict | None) -> Env:
    scenario = create_scenario(scenario_name, **(overrides or {}))
    return Env(scenario, batch_size=batch_size, seed=seed)


def _pregen_actions(env: Env, n_steps: int, seed: int) -> list[list]:
    rng = SeededRng(seed)
    per_step = []
    for _ in range(n_steps):
        step_actions = []
        for agent in env.agents:
            if agent.action_script is not None:
                step_actions.append(None)
            else:
                u = agent.u_range
                step_actions.append(rng.uniform(-u, u, (env.batch_size, 2)))
        per_step.append(step_actions)
    return per_step


def _time_vectorized(
    scenario_name: str, n_envs: int, n_steps: int, seed: int, warmup: int, overrides: dict | None
) -> float:
    env = _make_env(scenario_name, n_envs, seed, overrides)
    actions = _pregen_actions(env, warmup + n_steps, seed + 1)
    for t in range(warmup):
        env.step(actions[t])
    t0 = time.perf_counter()
    for t in range(warmup, warmup + n_steps):
        env.step(actions[t])
    return time.perf_counter() - t0


def _time_sequential(
    scenario_name: str, n_envs: int, n_steps: int, seed: int, warmup: int, overrides: dict | None
) -> float:
    envs = [_make_env(scenario_name, 1, seed + k, overrides) for k in range(n_envs)]
    action_sets = [_pregen_actions(envs[k], warmup + n_steps, seed + 1 + k) for k in range(n_envs)]
    for env, acts in zip(envs, action_sets):
        for t in range(warmup):
            env.step(acts[t])
    t0 = time.perf_counter()
    for env, acts in zip(envs, action_sets):
        for t in range(warmup, warmup + n_steps):
            env.step(acts[t])
    return time.perf_counter() - t0


def bench_throughput(
    scenario_name: str = "simple_spread",
    env_counts: list[int] | None = None,
    n_steps: int = 100,
    mode: str = "both",
    seed: int = 0,
    warmup: int = 5,
    overrides: dict | None = None,
    threads: int = 1,
) -> list[BenchRow]:
    """Time the requested sizes and modes; returns one row per (mode, size).

    threads is accepted for CLI symmetry but only 1 (a serial baseline) is
    implemented; other values are reported and ignored rather than faked.
    """
    if env_counts is None:
        env_counts = [1, 1000]
    if mode not in ("both", "vectorized", "sequential"):
        raise ValueError(f"unknown bench mode {mode!r}")
    if threads != 1:
        print(
            f"note: threads={threads} requested; running single-threaded "
            "(no worker pool is implemented)",
            file=sys.stderr,
        )
    rows = []
    modes = ["vectorized", "sequential"] if mode == "both" else [mode]
    for m in modes:
        timer = _time_vectorized if m == "vectorized" else _time_sequential
        for n in sorted(env_counts):
            try:
                seconds = timer(scenario_name, n, n_steps, seed, warmup, overrides)
            except MemoryError:
                print(f"warning: {m} n_envs={n} exhausted memory; skipping", file=sys.stderr)
                seconds = float("nan")
            rows.append(BenchRow(n_envs=n, mode=m, steps=n_steps, seconds=seconds))
    rows.sort(key=lambda r: (r.mode, r.n_envs))
    return rows


def write_csv(rows: list[BenchRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_envs", "mode", "steps", "seconds"])
        for r in sorted(rows, key=lambda r: (r.mode, r.n_envs)):
            writer.writerow([r.n_envs, r.mode, r.steps, f"{r.seconds:.6f}"])


def steps_per_second(row: BenchRow) -> float:
    """Env-steps per wall second (batch counts as n_envs steps per tick)."""
    if not row.seconds or row.seconds != row.seconds:
        return float("nan")
    return row.n_envs * row.steps / row.seconds
