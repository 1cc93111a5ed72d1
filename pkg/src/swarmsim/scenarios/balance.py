"""Tray lift: under gravity, agents carry a ball on a free rod to a goal.

The rod is a rigid tray that both translates and rotates; the ball rests on
top of it. Agents push the tray from below, keeping it level enough that
the ball does not roll off, and steer the ball to an overhead goal. Letting
the ball hit the floor fails the episode.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, PhysParams, World
from ..env import Scenario
from ..shapes import Line, Sphere
from . import register
from .common import clip_unit, columns, marker, place, pos_vel, rel_pos, scatter


@register("balance")
class Balance(Scenario):
    max_steps = 250

    def __init__(
        self,
        n_agents: int = 3,
        gravity: float = -0.3,
        tray_length: float = 0.8,
        tray_mass: float = 2.0,
        ball_mass: float = 0.3,
    ):
        self.n_agents = n_agents
        self.gravity = gravity
        self.tray_length = tray_length
        self.tray_mass = tray_mass
        self.ball_mass = ball_mass
        self.floor_y = -1.0
        self.ball_radius = 0.06

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, params=PhysParams(gravity=(0.0, self.gravity)), rng=rng)
        for i in range(self.n_agents):
            # unit mass: light bodies on this contact stiffness are unstable
            # at dt=0.1, and the speed cap keeps presses from skipping contact
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.4))
        world.add(
            Entity(
                "tray",
                shape=Line(length=self.tray_length),
                mass=self.tray_mass,
                movable=True,
                rotatable=True,
                color=(0.8, 0.3, 0.3),
            )
        )
        world.add(
            Entity(
                "ball",
                shape=Sphere(radius=self.ball_radius),
                mass=self.ball_mass,
                movable=True,
                color=(0.9, 0.7, 0.2),
            )
        )
        world.add(marker("goal", radius=0.08))
        world.add(Entity("floor", shape=Line(length=4.0), movable=False, rotatable=False))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        tray_y = -0.62
        # the team starts in carrying pose: one agent per station, pressing
        # distance below the tray, since a free-falling tray cannot be caught
        for k, agent in enumerate(world.agents):
            o = (k - (self.n_agents - 1) / 2) * 0.22
            x = o + rng.uniform(-0.03, 0.03, (n,))
            y = np.full(n, tray_y - 0.052)
            agent.state.set_pos_xy(x, y, env_index)
            agent.state.zero_motion(env_index)
        tray = world.entity("tray")
        place(tray, 0.0, tray_y, world, env_index)
        tray.state.set_rot(0.0, env_index)
        ball = world.entity("ball")
        bx = rng.uniform(-0.2, 0.2, (n,))
        by = np.full(n, tray_y + self.ball_radius + 2e-3)
        ball.state.set_pos_xy(bx, by, env_index)
        ball.state.zero_motion(env_index)
        goal = world.entity("goal")
        gx = rng.uniform(-0.5, 0.5, (n,))
        gy = rng.uniform(0.2, 0.6, (n,))
        goal.state.set_pos_xy(gx, gy, env_index)
        goal.state.zero_motion(env_index)
        place(world.entity("floor"), 0.0, self.floor_y, world, env_index)

    def _dropped(self, world: World) -> np.ndarray:
        ball = world.entity("ball")
        return ball.state.pos.y < self.floor_y + self.ball_radius + 0.02

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        ball = world.entity("ball")
        goal = world.entity("goal")
        gap = (ball.state.pos - goal.state.pos).norm()
        return -gap - 5.0 * self._dropped(world)

    def done(self, world: World) -> np.ndarray:
        # a dropped ball is NOT terminal: the per-step penalty keeps charging,
        # so failing fast never beats carrying the ball
        ball = world.entity("ball")
        goal = world.entity("goal")
        return (ball.state.pos - goal.state.pos).norm() < 0.08

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        tray = world.entity("tray")
        ball = world.entity("ball")
        goal = world.entity("goal")
        return columns(
            *pos_vel(agent),
            rel_pos(agent, tray),
            np.cos(tray.state.rot),
            np.sin(tray.state.rot),
            tray.state.ang_vel,
            tray.state.vel.x,
            tray.state.vel.y,
            rel_pos(agent, ball),
            ball.state.vel.x,
            ball.state.vel.y,
            rel_pos(ball, goal),
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_tray = obs[:, 4:6]
        c, s, spin = obs[:, 6], obs[:, 7], obs[:, 8]
        tray_vy = obs[:, 10]
        to_ball = obs[:, 11:13]
        goal_dx, goal_dy = obs[:, 15], obs[:, 16]
        # each agent holds a fixed station spaced along the underside
        o = (agent_index - (self.n_agents - 1) / 2) * 0.22
        station_x = to_tray[:, 0] + o * c
        station_y = to_tray[:, 1] + o * s - 0.05
        # where the ball sits along the tray, to keep it from rolling off
        ball_off = (to_ball[:, 0] - to_tray[:, 0]) * c + (to_ball[:, 1] - to_tray[:, 1]) * s
        centering = 0.8 * ball_off
        steering = -0.2 * np.clip(goal_dx, -1.0, 1.0)
        want_tilt = np.clip(
            np.where(np.abs(ball_off) > 0.22, centering, centering * 0.5 + steering),
            -0.12,
            0.12,
        )
        # lift: own weight plus an equal share of tray and ball
        hold = -self.gravity * (1.0 + (self.tray_mass + self.ball_mass) / self.n_agents)
        climb = np.clip(0.5 * goal_dy, -0.1, 0.2)
        side = float(np.sign(o))
        fy = (
            hold
            + climb
            - 1.0 * tray_vy
            + 3.0 * station_y
            + side * (3.5 * (want_tilt - s) - 0.8 * spin)
        )
        fx = 3.5 * station_x + 0.25 * np.clip(goal_dx, -1.0, 1.0)
        return clip_unit(np.stack([fx, fy], axis=1))
