"""Formation crossing: a team in cross formation must reform on the far
side of a wall, squeezing through two narrow gaps.

The wall spans the arena with two fixed openings; the formation center is
randomized below the wall and the target formation mirrors it above.
Rewards are individual: progress toward each agent's own slot minus a
penalty for bumping teammates or the wall.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Line, Sphere
from . import register
from .common import clip_unit, columns, contact_count, marker, place, pos_vel, rel_pos

# cross formation offsets relative to the formation center
OFFSETS = [(0.0, 0.0), (0.2, 0.0), (-0.2, 0.0), (0.0, 0.2), (0.0, -0.2)]
GAPS = (-0.6, 0.6)  # x positions of the wall openings
GAP_WIDTH = 0.25


@register("passage")
class Passage(Scenario):
    max_steps = 250

    def __init__(self, collision_penalty: float = 0.5):
        self.collision_penalty = collision_penalty

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(len(OFFSETS)):
            # sized so a full-speed step cannot jump across the wall's contact zone
            world.add(Agent(f"agent_{i}", shape=Sphere(radius=0.05), max_speed=0.4))
        for i in range(len(OFFSETS)):
            world.add(marker(f"slot_{i}", radius=0.03))
        half = GAP_WIDTH / 2
        spans = [
            (-2.0, GAPS[0] - half),
            (GAPS[0] + half, GAPS[1] - half),
            (GAPS[1] + half, 2.0),
        ]
        for k, (x0, x1) in enumerate(spans):
            world.add(
                Entity(f"wall_{k}", shape=Line(length=x1 - x0), movable=False, rotatable=False)
            )
        self._wall_centers = [((x0 + x1) / 2) for x0, x1 in spans]
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        cx = rng.uniform(-1.0, 1.0, (n,))
        cy = rng.uniform(-0.9, -0.45, (n,))
        for i, (ox, oy) in enumerate(OFFSETS):
            agent = world.entity(f"agent_{i}")
            agent.state.set_pos_xy(cx + ox, cy + oy, env_index)
            agent.state.zero_motion(env_index)
            slot = world.entity(f"slot_{i}")
            slot.state.set_pos_xy(cx + ox, -cy + oy, env_index)
            slot.state.zero_motion(env_index)
        for k, wx in enumerate(self._wall_centers):
            place(world.entity(f"wall_{k}"), wx, 0.0, world, env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        k = world.agents.index(agent)
        slot = world.entity(f"slot_{k}")
        gap = (agent.state.pos - slot.state.pos).norm()
        bumps = contact_count(agent, world.agents)
        return -gap - self.collision_penalty * bumps

    def done(self, world: World) -> np.ndarray:
        settled = [
            ((a.state.pos - world.entity(f"slot_{k}").state.pos).norm() < 0.05)
            for k, a in enumerate(world.agents)
        ]
        return np.logical_and.reduce(settled)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        k = world.agents.index(agent)
        slot = world.entity(f"slot_{k}")
        others = [a for a in world.agents if a is not agent]
        B = agent.state.batch_size
        gap_rel = []
        for gx in GAPS:
            gap_rel.append(np.full(B, gx) - agent.state.pos.x)
            gap_rel.append(0.0 - agent.state.pos.y)
        return columns(
            *pos_vel(agent),
            rel_pos(agent, slot),
            *gap_rel,
            *[rel_pos(agent, o) for o in others],
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        own_y = obs[:, 1]
        to_slot = obs[:, 4:6]
        gap_a = obs[:, 6:8]
        gap_b = obs[:, 8:10]
        # go through the nearer gap until across, then claim the slot
        nearer = np.where(
            (np.abs(gap_a[:, 0]) <= np.abs(gap_b[:, 0]))[:, None], gap_a, gap_b
        )
        crossing = np.stack([nearer[:, 0] * 2.0, np.ones_like(own_y)], axis=1)
        across = (own_y > 0.06) & (to_slot[:, 1] > -0.5)
        # stagger wall approach a touch per agent to ease congestion
        crossing[:, 0] = crossing[:, 0] + 0.04 * agent_index
        return clip_unit(np.where(across[:, None], 4.0 * to_slot, 1.2 * crossing))
