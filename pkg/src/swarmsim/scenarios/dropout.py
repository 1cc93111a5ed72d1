"""Energy-frugal reach: the team scores when any one agent touches the
goal, but every agent pays for the force it spends.

The optimum is for exactly one well-placed agent to go while the rest idle.
Reward is shared: an arrival bonus minus the team's summed squared effort.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, World
from ..env import Scenario
from ..shapes import Sphere
from . import register
from .common import clip_unit, columns, marker, pos_vel, rel_pos, scatter


@register("dropout")
class Dropout(Scenario):
    max_steps = 200

    def __init__(self, n_agents: int = 4, energy_coeff: float = 0.02, reach: float = 0.1):
        self.n_agents = n_agents
        self.energy_coeff = energy_coeff
        self.reach = reach

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), collidable=False))
        world.add(marker("goal", radius=0.08))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for e in world.entities:
            scatter(world.rng, e, (-1.0, -1.0), (1.0, 1.0), world, env_index)

    def _reached(self, world: World) -> np.ndarray:
        goal = world.entity("goal")
        dists = np.stack([(a.state.pos - goal.state.pos).norm() for a in world.agents])
        return (dists <= self.reach).any(axis=0)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        spent = np.zeros(world.batch_size)
        for a in world.agents:
            if a.action is not None:
                f = a.action.force
                spent = spent + f.x * f.x + f.y * f.y
        return self._reached(world).astype(float) - self.energy_coeff * spent

    def done(self, world: World) -> np.ndarray:
        return self._reached(world)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        goal = world.entity("goal")
        others = [a for a in world.agents if a is not agent]
        return columns(
            *pos_vel(agent),
            rel_pos(agent, goal),
            *[rel_pos(agent, o) for o in others],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_goal = obs[:, 4:6]
        my_dist = np.linalg.norm(to_goal, axis=1)
        elected = np.ones(obs.shape[0], dtype=bool)
        for k in range(self.n_agents - 1):
            other = obs[:, 6 + 2 * k : 8 + 2 * k]
            their_dist = np.linalg.norm(to_goal - other, axis=1)
            if k < agent_index:  # the k-th listed peer has a lower index: ties go to them
                elected &= my_dist < their_dist
            else:
                elected &= my_dist <= their_dist
        return clip_unit(3.0 * to_goal * elected[:, None])
