"""Corridor negotiation: two agents too wide to pass must swap ends.

The corridor has a single recess in its upper wall; one agent has to duck
into it and wait while the other passes. Rewards are individual (progress
toward each agent's own goal), so the yielding agent pays a price for
cooperating and earns it back once the corridor clears.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng
from ..core import Agent, Entity, World
from ..env import Scenario
from ..shapes import Line, Sphere
from . import register
from .common import clip_unit, columns, marker, place, pos_vel, rel_pos


def _wall(name: str, length: float) -> Entity:
    return Entity(name, shape=Line(length=length), movable=False, rotatable=False)


@register("give_way")
class GiveWay(Scenario):
    max_steps = 300

    def __init__(self, agent_radius: float = 0.12, corridor_half_width: float = 0.2):
        self.agent_radius = agent_radius
        self.half_width = corridor_half_width
        self.alcove = (0.0, 0.35)  # center of the recess above the corridor

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        world.add(Agent("agent_0", shape=Sphere(radius=self.agent_radius), color=(0.25, 0.45, 0.85)))
        world.add(Agent("agent_1", shape=Sphere(radius=self.agent_radius), color=(0.85, 0.35, 0.25)))
        world.add(marker("goal_0", radius=0.05, color=(0.25, 0.45, 0.85)))
        world.add(marker("goal_1", radius=0.05, color=(0.85, 0.35, 0.25)))
        # corridor: solid floor, split ceiling, recess walls and recess ceiling
        world.add(_wall("wall_bottom", 4.0))
        world.add(_wall("wall_top_left", 1.7))
        world.add(_wall("wall_top_right", 1.7))
        world.add(_wall("alcove_left", 0.3))
        world.add(_wall("alcove_right", 0.3))
        world.add(_wall("alcove_top", 0.6))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        hw = self.half_width
        a0, a1 = world.agents
        x0 = rng.uniform(-1.6, -1.4, (n,))
        y0 = rng.uniform(-0.04, 0.04, (n,))
        a0.state.set_pos_xy(x0, y0, env_index)
        a0.state.zero_motion(env_index)
        x1 = rng.uniform(1.4, 1.6, (n,))
        y1 = rng.uniform(-0.04, 0.04, (n,))
        a1.state.set_pos_xy(x1, y1, env_index)
        a1.state.zero_motion(env_index)
        place(world.entity("goal_0"), 1.5, 0.0, world, env_index)
        place(world.entity("goal_1"), -1.5, 0.0, world, env_index)
        place(world.entity("wall_bottom"), 0.0, -hw, world, env_index)
        place(world.entity("wall_top_left"), -1.15, hw, world, env_index)
        place(world.entity("wall_top_right"), 1.15, hw, world, env_index)
        av_l = world.entity("alcove_left")
        place(av_l, -0.3, hw + 0.15, world, env_index)
        av_l.state.set_rot(np.pi / 2, env_index)
        av_r = world.entity("alcove_right")
        place(av_r, 0.3, hw + 0.15, world, env_index)
        av_r.state.set_rot(np.pi / 2, env_index)
        place(world.entity("alcove_top"), 0.0, hw + 0.3, world, env_index)

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        k = world.agents.index(agent)
        goal = world.entity(f"goal_{k}")
        gap = (agent.state.pos - goal.state.pos).norm()
        return -gap + 5.0 * (gap < 0.15)

    def done(self, world: World) -> np.ndarray:
        reached = [
            ((a.state.pos - world.entity(f"goal_{k}").state.pos).norm() < 0.15)
            for k, a in enumerate(world.agents)
        ]
        return np.logical_and(*reached)

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        k = world.agents.index(agent)
        other = world.agents[1 - k]
        goal = world.entity(f"goal_{k}")
        B = agent.state.batch_size
        return columns(
            *pos_vel(agent),
            rel_pos(agent, goal),
            rel_pos(agent, other),
            other.state.vel.x,
            other.state.vel.y,
            np.full(B, self.alcove[0]) - agent.state.pos.x,
            np.full(B, self.alcove[1]) - agent.state.pos.y,
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_goal = obs[:, 4:6]
        to_other = obs[:, 6:8]
        to_alcove = obs[:, 10:12]
        # yield while the oncoming agent is ahead of us and close
        ahead = np.sign(to_goal[:, 0]) == np.sign(to_other[:, 0])
        near = np.abs(to_other[:, 0]) < 0.9
        must_yield = (agent_index == 0) & ahead & near
        target = np.where(must_yield[:, None], to_alcove, to_goal)
        force = 3.0 * target
        # hug the corridor midline when traveling
        force[:, 1] = np.where(must_yield, force[:, 1], force[:, 1] * 0.5)
        return clip_unit(force)
