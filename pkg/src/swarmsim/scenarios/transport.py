"""Team haulage: several small agents push one heavy package onto a goal.

The package outweighs any single agent's push, so progress requires the
team to gang up behind it. Reward is shared: negative distance from the
package to the goal, with success ending the episode.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Box, Sphere
from . import register
from .common import clip_unit, columns, marker, pos_vel, rel_pos, scatter, unit


@register("transport")
class Transport(Scenario):
    max_steps = 250

    def __init__(
        self,
        n_agents: int = 4,
        package_mass: float = 15.0,
        package_size: float = 0.3,
        success_dist: float = 0.1,
    ):
        self.n_agents = n_agents
        self.package_mass = package_mass
        self.package_size = package_size
        self.success_dist = success_dist

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            # radius and speed cap sized so a pushing agent can neither
            # tunnel through the package wall nor skip its contact zone
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.4))
        world.add(
            Entity(
                "package",
                shape=Box(length=self.package_size, width=self.package_size),
                mass=self.package_mass,
                movable=True,
                color=(0.8, 0.5, 0.2),
            )
        )
        world.add(marker("goal", radius=0.12))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for agent in world.agents:
            scatter(world.rng, agent, (-1.0, -1.0), (1.0, 1.0), world, env_index)
        scatter(world.rng, world.entity("package"), (-0.8, -0.8), (0.8, 0.8), world, env_index)
        scatter(world.rng, world.entity("goal"), (-0.9, -0.9), (0.9, 0.9), world, env_index)

    def _gap(self, world: World) -> np.ndarray:
        return (world.entity("package").state.pos - world.entity("goal").state.pos).norm()

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        return -self._gap(world)

    def done(self, world: World) -> np.ndarray:
        return self._gap(world) < self.success_dist

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        package = world.entity("package")
        goal = world.entity("goal")
        return columns(
            *pos_vel(agent),
            rel_pos(agent, package),
            rel_pos(agent, goal),
            rel_pos(goal, package),
            package.state.vel.x,
            package.state.vel.y,
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_package = obs[:, 4:6]
        package_from_goal = obs[:, 8:10]  # package minus goal
        push_dir = unit(-package_from_goal)  # direction the package should travel
        lateral = np.stack([-push_dir[:, 1], push_dir[:, 0]], axis=1)
        # fan the team across the trailing face so they don't fight for one spot
        spread = (agent_index - (self.n_agents - 1) / 2) * 0.11
        r0 = self.package_size / 2 + 0.07
        stand_off = to_package - push_dir * r0 + lateral * spread
        d = np.linalg.norm(to_package, axis=1, keepdims=True)
        facing = -(to_package / np.maximum(d, 1e-8))  # package -> agent direction
        # walk around the package toward its trailing side instead of cutting
        # across the front face; the angular step keeps the target continuous
        theta_a = np.arctan2(facing[:, 1], facing[:, 0])
        theta_b = np.arctan2(-push_dir[:, 1], -push_dir[:, 0])
        diff = (theta_b - theta_a + np.pi) % (2.0 * np.pi) - np.pi
        behind = np.abs(diff) < 0.5
        theta_t = theta_a + np.clip(diff, -0.6, 0.6)
        ring = np.stack([np.cos(theta_t), np.sin(theta_t)], axis=1) * (r0 + 0.08)
        near = d[:, 0] < 0.6
        target = np.where((near & ~behind)[:, None], to_package + ring, stand_off)
        lean = np.where((near & behind)[:, None], 1.0, 0.0)
        return clip_unit(3.0 * target + push_dir * lean)
