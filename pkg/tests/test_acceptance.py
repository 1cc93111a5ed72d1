"""End-to-end acceptance gate.

Each test here checks one shipping criterion at its stated tolerance and
records a PASS/FAIL line through conftest.record_criterion; the summary
block at the end of the pytest run is the release checklist. Measured
baselines (episode returns, timings) are recorded as indented notes.
"""
import time

import numpy as np
import pytest

from swarmsim import (
    Box,
    Entity,
    Env,
    HeuristicPolicy,
    Line,
    PhysParams,
    RandomPolicy,
    Sphere,
    Vec2,
    World,
    cast_ray,
    create_scenario,
    precision,
    run_episode,
    scenario_names,
)
from swarmsim.batching import SeededRng
from swarmsim.bench import bench_throughput
from swarmsim.dynamics import collision_force, integrate, world_step

from conftest import record_criterion, record_note
from helpers import oracle_ray_circle, oracle_ray_rect, oracle_ray_segment

EQUIV_TASKS = ["simple_spread", "transport", "flocking"]


def test_batched_run_equals_independent_singles():
    """B=64 batch vs 64 isolated B=1 runs, 100 steps, same actions."""
    tol = 1e-6
    t0 = time.perf_counter()
    worst = 0.0
    for name in EQUIV_TASKS:
        master = Env(create_scenario(name), batch_size=64, seed=31)
        singles = []
        for i in range(64):
            s = Env(create_scenario(name), batch_size=1, seed=500 + i)
            s.world.set_env_state(0, master.world.get_env_state(i))
            s.step_count[0] = 0
            singles.append(s)
        rng = SeededRng(77)
        plans = [
            [rng.uniform(-a.u_range, a.u_range, (64, 2)) for a in master.agents]
            for _ in range(100)
        ]
        for plan in plans:
            res_m = master.step(plan)
            for i, s in enumerate(singles):
                res_s = s.step([col[i : i + 1] for col in plan])
                for e_m, e_s in zip(master.world.entities, s.world.entities):
                    for get in (
                        lambda st: st.pos.x,
                        lambda st: st.pos.y,
                        lambda st: st.vel.x,
                        lambda st: st.vel.y,
                        lambda st: st.rot,
                        lambda st: st.ang_vel,
                    ):
                        d = abs(float(get(e_m.state)[i]) - float(get(e_s.state)[0]))
                        worst = max(worst, d)
                for r_m, r_s in zip(res_m.rewards, res_s.rewards):
                    worst = max(worst, abs(float(r_m[i]) - float(r_s[0])))
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and elapsed < 60.0
    record_criterion(
        "batched run matches independent singles",
        ok,
        f"3 tasks x 64 envs x 100 steps, max |diff| {worst:.2e} <= {tol:g}, {elapsed:.1f}s",
    )
    assert worst <= tol
    assert elapsed < 60.0


def test_integrator_hand_values():
    with precision("float64"):
        w = World(1)
        e = Entity("glider", Sphere(0.05), movable=True, mass=1.0)
        w.add(e)
        e.state.set_vel(Vec2.from_array([[1.0, 0.0]]))
        integrate(e, Vec2.zeros(1), np.zeros(1), w.params)
        vx, px = float(e.state.vel.x[0]), float(e.state.pos.x[0])

        wg = World(1, params=PhysParams(gravity=(0.0, -1.0)))
        ball = Entity("ball", Sphere(0.05), movable=True, mass=2.0)
        wg.add(ball)
        world_step(wg, [])
        gy = float(ball.state.vel.y[0])
    ok = (
        abs(vx - 0.75) <= 1e-9 * 0.75
        and abs(px - 0.075) <= 1e-9 * 0.075
        and abs(gy - (-0.1)) <= 1e-9 * 0.1
    )
    record_criterion(
        "integrator hand-checked values",
        ok,
        f"coast v'={vx}, x'={px}; gravity v'={gy}",
    )
    assert ok


def test_contact_force_hand_value():
    res = collision_force(
        Vec2.from_array([[0.0, 0.0]]),
        Vec2.from_array([[0.09, 0.0]]),
        d_min=0.1,
        params=PhysParams(),
    )
    mag = float(res.force_i.norm()[0])
    far = collision_force(
        Vec2.from_array([[0.0, 0.0]]),
        Vec2.from_array([[0.2, 0.0]]),
        d_min=0.1,
        params=PhysParams(),
    )
    exact_zero = (
        far.force_i.x[0] == 0.0 and far.force_i.y[0] == 0.0 and not far.active[0]
    )
    ok = abs(mag - 1.00000454) <= 1e-4 * 1.00000454 and exact_zero
    record_criterion(
        "contact force hand-checked value",
        ok,
        f"overlap 0.01 -> {mag:.8f} N; separation 0.1 -> exactly 0",
    )
    assert ok


def test_velocity_decay_curve():
    w = World(1)
    e = Entity("glider", Sphere(0.05), movable=True, mass=1.0)
    w.add(e)
    e.state.set_vel(Vec2.from_array([[3.0, 4.0]]))
    worst = 0.0
    for t in range(1, 51):
        world_step(w, [])
        want = 5.0 * 0.75**t
        got = float(e.state.vel.norm()[0])
        worst = max(worst, abs(got - want) / want)
    ok = worst <= 1e-5
    record_criterion(
        "zero-force velocity decay", ok, f"50 steps, max rel err {worst:.2e} <= 1e-5"
    )
    assert ok


NEWTON_PAIRS = [
    (Sphere(0.25), Sphere(0.2)),
    (Sphere(0.2), Box(0.4, 0.25)),
    (Sphere(0.2), Line(0.5)),
    (Line(0.5), Line(0.6)),
    (Line(0.5), Box(0.4, 0.25)),
    (Box(0.35, 0.3), Box(0.4, 0.25)),
]


def test_pushes_cancel_exactly():
    """Both bodies unit mass, one step from rest: velocities must be exact
    negations, which holds iff the applied forces cancel bitwise."""
    B = 170  # 6 pairs x 170 = 1020 random configurations
    total_active = 0
    all_exact = True
    rng = np.random.default_rng(42)
    for shape_a, shape_b in NEWTON_PAIRS:
        w = World(B)
        a = Entity("a", shape_a, movable=True, mass=1.0, rotatable=True)
        b = Entity("b", shape_b, movable=True, mass=1.0, rotatable=True)
        w.add(a)
        w.add(b)
        for e in (a, b):
            e.state.set_pos(
                Vec2(
                    rng.uniform(-0.3, 0.3, B).astype(np.float32),
                    rng.uniform(-0.3, 0.3, B).astype(np.float32),
                )
            )
            e.state.set_rot(rng.uniform(-np.pi, np.pi, B).astype(np.float32))
        world_step(w, [])
        all_exact &= np.array_equal(a.state.vel.x, -b.state.vel.x)
        all_exact &= np.array_equal(a.state.vel.y, -b.state.vel.y)
        total_active += int(((a.state.vel.x != 0) | (a.state.vel.y != 0)).sum())
    ok = bool(all_exact) and total_active > 150
    record_criterion(
        "paired pushes cancel exactly",
        ok,
        f"1020 random poses over 6 shape pairs, {total_active} in contact, sum always (0,0)",
    )
    assert ok


def _conditioned_ray_cases(kind, n, seed):
    """Random ray queries whose closed-form answer is stable to 1e-9 angle
    jitter; grazing-incidence draws are rejected and redrawn."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        origin = rng.uniform(-1.0, 1.0, 2)
        theta = rng.uniform(-np.pi, np.pi)
        if kind == "sphere":
            center = rng.uniform(-1.5, 1.5, 2)
            r = float(rng.uniform(0.05, 0.5))
            oracle = lambda th: oracle_ray_circle(origin, th, center, r)
            entity = Entity("obj", Sphere(r))
            pose = (center, 0.0)
        elif kind == "line":
            center = rng.uniform(-1.5, 1.5, 2)
            rot = float(rng.uniform(-np.pi, np.pi))
            length = float(rng.uniform(0.2, 1.5))
            half = np.array([np.cos(rot), np.sin(rot)]) * length / 2
            oracle = lambda th: oracle_ray_segment(origin, th, center - half, center + half)
            entity = Entity("obj", Line(length))
            pose = (center, rot)
        else:
            center = rng.uniform(-1.5, 1.5, 2)
            rot = float(rng.uniform(-np.pi, np.pi))
            length, width = (float(v) for v in rng.uniform(0.2, 1.2, 2))
            oracle = lambda th: oracle_ray_rect(origin, th, center, rot, length, width)
            entity = Entity("obj", Box(length, width))
            pose = (center, rot)
        want = oracle(theta)
        lo, hi = oracle(theta - 1e-9), oracle(theta + 1e-9)
        vals = [min(v, 6.0) for v in (want, lo, hi)]
        if max(vals) - min(vals) > 1e-4:
            continue
        out.append((origin, theta, entity, pose, min(want, 6.0)))
    return out


def test_ray_ranges_match_closed_form():
    counts = {"sphere": (334, 11), "line": (333, 22), "box": (333, 33)}
    worst = 0.0
    with precision("float64"):
        for kind, (n, seed) in counts.items():
            for origin, theta, entity, (center, rot), want in _conditioned_ray_cases(
                kind, n, seed=seed
            ):
                w = World(1)
                w.add(entity)
                entity.state.set_pos(Vec2.from_array([[center[0], center[1]]]))
                entity.state.set_rot(np.array([rot], dtype=np.float64))
                got = float(
                    cast_ray(
                        Vec2.from_array([[origin[0], origin[1]]]),
                        np.array([theta], dtype=np.float64),
                        w,
                        max_range=6.0,
                    )[0]
                )
                worst = max(worst, abs(got - want))
    ok = worst <= 1e-6
    record_criterion(
        "ray ranges match closed form",
        ok,
        f"1000 conditioned configurations, max |diff| {worst:.2e} <= 1e-6",
    )
    assert ok


def test_every_task_runs_clean_at_width_32():
    names = sorted(scenario_names())
    ok = len(names) == 13
    details = []
    for name in names:
        env = Env(create_scenario(name), batch_size=32, seed=13)
        env.reset()
        env.reset(env_index=5)
        gen = np.random.default_rng(13)
        finite = True
        for _ in range(100):
            acts = [
                gen.uniform(-1, 1, (32, 2)).astype(np.float32) for _ in env.agents
            ]
            res = env.step(acts)
            finite &= all(np.isfinite(o).all() for o in res.obs)
            finite &= all(np.isfinite(r).all() for r in res.rewards)
        for e in env.world.entities:
            finite &= bool(np.isfinite(e.state.pos.to_array()).all())
            finite &= bool(np.isfinite(e.state.vel.to_array()).all())

        keep = [i for i in range(32) if i != 11]
        before = {
            e.name: (
                e.state.pos.to_array().copy(),
                e.state.vel.to_array().copy(),
                e.state.rot.copy(),
                e.state.ang_vel.copy(),
            )
            for e in env.world.entities
        }
        env.reset(env_index=11)
        isolated = True
        for e in env.world.entities:
            pos, vel, rot, ang = before[e.name]
            isolated &= np.array_equal(e.state.pos.to_array()[keep], pos[keep])
            isolated &= np.array_equal(e.state.vel.to_array()[keep], vel[keep])
            isolated &= np.array_equal(e.state.rot[keep], rot[keep])
            isolated &= np.array_equal(e.state.ang_vel[keep], ang[keep])
        if not (finite and isolated):
            details.append(f"{name}: finite={finite} isolated={isolated}")
        ok &= finite and isolated
    record_criterion(
        "13 tasks stable at width 32",
        ok,
        "; ".join(details) if details else "100 random steps each, all finite, per-index reset bitwise isolated",
    )
    assert ok


def test_scripted_controller_beats_random_over_10_seeds():
    all_better = True
    lines = []
    for name in sorted(scenario_names()):
        heur = np.mean(
            [
                run_episode(Env(create_scenario(name), 1, seed=s), HeuristicPolicy())[0]
                for s in range(10)
            ]
        )
        rand = np.mean(
            [
                run_episode(
                    Env(create_scenario(name), 1, seed=s), RandomPolicy(seed=1000 + s)
                )[0]
                for s in range(10)
            ]
        )
        lines.append(f"{name}: scripted {heur:.3f} vs random {rand:.3f}")
        all_better &= bool(heur > rand)
    record_criterion(
        "scripted controller beats random on every task",
        all_better,
        "10-seed mean returns below",
    )
    for line in lines:
        record_note(line)
    assert all_better


def test_throughput_scales():
    rows = bench_throughput(
        scenario_name="simple_spread",
        env_counts=[3000],
        n_steps=100,
        mode="both",
        seed=0,
        warmup=5,
    )
    by_mode = {r.mode: r for r in rows}
    vec, seq = by_mode["vectorized"], by_mode["sequential"]
    speedup = seq.seconds / vec.seconds

    big = bench_throughput(
        scenario_name="simple_spread",
        env_counts=[30000],
        n_steps=100,
        mode="vectorized",
        seed=0,
        warmup=2,
    )[0]
    growth = big.seconds / vec.seconds

    ok = (
        np.isfinite(vec.seconds)
        and np.isfinite(seq.seconds)
        and np.isfinite(big.seconds)
        and speedup >= 5.0
        and growth <= 12.0
    )
    record_criterion(
        "vectorized stepping scales",
        ok,
        f"3000 envs x 100 steps: batched {vec.seconds:.2f}s vs loop {seq.seconds:.1f}s "
        f"({speedup:.0f}x >= 5x); 30000 envs: {big.seconds:.2f}s, "
        f"growth {growth:.2f} <= 12",
    )
    assert ok


def test_device_scale_figure_is_out_of_scope():
    # the headline massive-batch-on-accelerator timing needs device-resident
    # arrays; this package is CPU-only and substitutes the relative-speedup
    # criterion above, so nothing here should pretend to reproduce it
    record_criterion(
        "accelerator-scale timing not reproduced (by design)",
        True,
        "CPU-only package; relative speedup criterion stands in",
    )


def test_learning_curves_are_out_of_scope():
    record_criterion(
        "policy training curves not reproduced (by design)",
        True,
        "no training stack ships with the simulator; no test depends on one",
    )
