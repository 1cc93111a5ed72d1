"""Crate escape: agents trapped inside a hollow crate drive it to a goal.

The crate is an open rectangle (walls only); agents press against its
inner wall on the goal side so the reaction pushes the crate along.
Reward is shared: negative distance from crate to goal.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Box, Sphere
from . import register
from .common import clip_unit, columns, marker, pos_vel, rel_pos, scatter, unit


@register("reverse_transport")
class ReverseTransport(Scenario):
    max_steps = 250

    def __init__(
        self,
        n_agents: int = 4,
        crate_size: float = 0.6,
        crate_mass: float = 3.0,
        success_dist: float = 0.1,
    ):
        self.n_agents = n_agents
        self.crate_size = crate_size
        self.crate_mass = crate_mass
        self.success_dist = success_dist

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            # speed cap keeps agents from skipping the crate wall's contact zone
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.4))
        world.add(
            Entity(
                "crate",
                shape=Box(length=self.crate_size, width=self.crate_size),
                mass=self.crate_mass,
                movable=True,
                rotatable=False,
                color=(0.8, 0.5, 0.2),
            )
        )
        world.add(marker("goal", radius=0.12))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        crate = world.entity("crate")
        scatter(rng, crate, (-0.5, -0.5), (0.5, 0.5), world, env_index)
        crate.state.set_rot(0.0, env_index)
        cx = crate.state.pos.x if env_index is None else crate.state.pos.x[env_index]
        cy = crate.state.pos.y if env_index is None else crate.state.pos.y[env_index]
        inner = self.crate_size / 2 - 0.05 - 0.07  # keep clear of the walls
        for agent in world.agents:
            ax = rng.uniform(-inner, inner, (n,))
            ay = rng.uniform(-inner, inner, (n,))
            agent.state.set_pos_xy(cx + ax, cy + ay, env_index)
            agent.state.zero_motion(env_index)
        scatter(rng, world.entity("goal"), (-0.9, -0.9), (0.9, 0.9), world, env_index)

    def _gap(self, world: World) -> np.ndarray:
        return (world.entity("crate").state.pos - world.entity("goal").state.pos).norm()

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        return -self._gap(world)

    def done(self, world: World) -> np.ndarray:
        return self._gap(world) < self.success_dist

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        crate = world.entity("crate")
        goal = world.entity("goal")
        return columns(
            *pos_vel(agent),
            rel_pos(agent, crate),
            crate.state.vel.x,
            crate.state.vel.y,
            rel_pos(crate, goal),
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_crate = obs[:, 4:6]
        crate_to_goal = obs[:, 8:10]
        lead = unit(crate_to_goal)
        # press into the inner wall facing the goal
        press_point = to_crate + lead * (self.crate_size / 2 - 0.04)
        return clip_unit(3.0 * press_point + lead)
