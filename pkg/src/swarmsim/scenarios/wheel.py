"""Spin regulation: agents push the tips of an anchored rod to hold a
target angular velocity.

The rod's center is pinned (it cannot translate) but contacts torque it
freely. Reward is shared: negative error between the rod's angular velocity
and the commanded one.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Line, Sphere
from . import register
from .common import clip_unit, columns, pos_vel, rel_pos, scatter


@register("wheel")
class Wheel(Scenario):
    max_steps = 200

    def __init__(
        self,
        n_agents: int = 3,
        line_length: float = 1.0,
        line_mass: float = 2.0,
        target_spin: float = 0.3,
    ):
        self.n_agents = n_agents
        self.line_length = line_length
        self.line_mass = line_mass
        self.target_spin = target_spin

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            # sized so a full-speed step cannot jump across the rod's contact zone
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.4))
        world.add(
            Entity(
                "rod",
                shape=Line(length=self.line_length),
                mass=self.line_mass,
                movable=False,
                rotatable=True,
                color=(0.8, 0.3, 0.3),
            )
        )
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for agent in world.agents:
            scatter(world.rng, agent, (-1.0, -1.0), (1.0, 1.0), world, env_index)
        rod = world.entity("rod")
        n = 1 if env_index is not None else world.batch_size
        rod.state.set_rot(world.rng.uniform(0.0, 2 * np.pi, (n,)), env_index)
        rod.state.zero_motion(env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        rod = world.entity("rod")
        return -np.abs(rod.state.ang_vel - self.target_spin)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        rod = world.entity("rod")
        return columns(
            *pos_vel(agent),
            rel_pos(agent, rod),
            np.cos(rod.state.rot),
            np.sin(rod.state.rot),
            rod.state.ang_vel,
            np.full(agent.state.batch_size, self.target_spin),
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_center = obs[:, 4:6]
        ca, sa = obs[:, 6], obs[:, 7]
        spin_err = obs[:, 9] - obs[:, 8]  # target minus current
        half = self.line_length / 2
        # aim for one rod tip and shove it along the spin direction
        tip = to_center + np.stack([ca, sa], axis=1) * half
        push = np.stack([-sa, ca], axis=1) * np.sign(spin_err)[:, None]
        approach = tip - push * 0.05
        lean = np.minimum(1.0, 4.0 * np.abs(spin_err))[:, None]
        return clip_unit(4.0 * approach + push * lean)
