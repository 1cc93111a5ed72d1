"""Foraging split: agents all start at the origin and must fan out to
collect scattered food items.

Food is consumed the first time any agent comes within reach; the team is
rewarded per item collected plus a small shaping term pulling someone
toward each remaining item. Agents do not collide with each other, so the
only way to do well is to cover different items.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, World
from ..env import Scenario
from ..shapes import Sphere
from . import register
from .common import clip_unit, columns, marker, place, pos_vel, rel_pos, scatter


@register("dispersion")
class Dispersion(Scenario):
    max_steps = 200

    def __init__(self, n_agents: int = 4, n_food: int = 4, eat_dist: float = 0.15):
        self.n_agents = n_agents
        self.n_food = n_food
        self.eat_dist = eat_dist
        self.eaten: np.ndarray | None = None  # (B, n_food) bool
        self.fresh_bites: np.ndarray | None = None  # (B,) count eaten this step

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_agents):
            world.add(
                Agent(f"agent_{i}", shape=Sphere(radius=0.05), collidable=False)
            )
        for i in range(self.n_food):
            world.add(marker(f"food_{i}", radius=0.08, color=(0.9, 0.6, 0.15)))
        self.eaten = np.zeros((batch_size, self.n_food), dtype=bool)
        self.fresh_bites = np.zeros(batch_size)
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        for agent in world.agents:
            place(agent, 0.0, 0.0, world, env_index)
        for i in range(self.n_food):
            scatter(world.rng, world.entity(f"food_{i}"), (-1.0, -1.0), (1.0, 1.0), world, env_index)
        if env_index is None:
            self.eaten[:] = False
            self.fresh_bites[:] = 0.0
        else:
            self.eaten[env_index] = False
            self.fresh_bites[env_index] = 0.0

    def post_step(self, world: World) -> None:
        agents = world.agents
        newly = np.zeros(world.batch_size)
        for i in range(self.n_food):
            food = world.entity(f"food_{i}")
            dists = np.stack([(a.state.pos - food.state.pos).norm() for a in agents])
            reached = (dists <= self.eat_dist).any(axis=0)
            bite = reached & ~self.eaten[:, i]
            newly = newly + bite
            self.eaten[:, i] |= reached
        self.fresh_bites = newly

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        # shaping: nearest-agent distance to each remaining item
        agents = world.agents
        hunger = np.zeros(world.batch_size)
        for i in range(self.n_food):
            food = world.entity(f"food_{i}")
            dists = np.stack([(a.state.pos - food.state.pos).norm() for a in agents])
            hunger = hunger + np.where(self.eaten[:, i], 0.0, dists.min(axis=0))
        return self.fresh_bites - 0.05 * hunger

    def done(self, world: World) -> np.ndarray:
        return self.eaten.all(axis=1)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        parts = list(pos_vel(agent))
        for i in range(self.n_food):
            food = world.entity(f"food_{i}")
            parts.append(rel_pos(agent, food))
            parts.append(self.eaten[:, i].astype(float))
        return columns(*parts)

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        B = obs.shape[0]
        rels = np.stack(
            [obs[:, 4 + 3 * i : 6 + 3 * i] for i in range(self.n_food)], axis=1
        )  # (B, n_food, 2)
        eaten = np.stack([obs[:, 6 + 3 * i] for i in range(self.n_food)], axis=1) > 0.5
        dist = np.linalg.norm(rels, axis=2)
        dist = np.where(eaten, np.inf, dist)
        # each agent claims its rank-th nearest remaining item
        order = np.argsort(dist, axis=1, kind="stable")
        remaining = np.maximum((~eaten).sum(axis=1), 1)
        pick = order[np.arange(B), np.minimum(agent_index, remaining - 1)]
        target = rels[np.arange(B), pick]
        return clip_unit(5.0 * target)
