"""Two-a-side ball game: a controlled team attacks the right goal against
a scripted defending team.

The pitch is fenced with wall segments except for two goal mouths, each
backed by a net enclosure. The controlled (blue) team is rewarded for
moving the ball toward and into the right net; the scripted (red) team
chases and clears the ball but earns no reward, so episode return reflects
the controlled team alone.
"""
from __future__ import annotations

import numpy as np

from ..batching import SeededRng, Vec2
from ..core import Agent, AgentAction, Entity, World
from ..env import Scenario
from ..shapes import Line, Sphere
from . import register
from .common import clip_unit, columns, pos_vel, rel_pos, unit

FIELD_HX = 1.5  # half length
FIELD_HY = 1.0  # half width
MOUTH_HY = 0.35  # goal mouth half height
NET_DEPTH = 0.25


def _wall(name: str, length: float) -> Entity:
    return Entity(name, shape=Line(length=length), movable=False, rotatable=False)


def _chase_script(agent: Agent, world: World) -> AgentAction:
    """Red policy: nearer defender attacks the ball, the other holds post."""
    ball = world.entity("ball")
    reds = [a for a in world.agents if a.name.startswith("red")]
    me = world.agents.index(agent)
    dists = np.stack([(r.state.pos - ball.state.pos).norm() for r in reds])
    my_red_index = [world.agents.index(r) for r in reds].index(me)
    i_am_closer = dists.argmin(axis=0) == my_red_index
    # aim slightly behind the ball so the push clears toward the left goal
    behind = ball.state.pos + Vec2.full(world.batch_size, 0.08, 0.0) - agent.state.pos
    post = Vec2.full(world.batch_size, -0.75, 0.0)
    to_post = post - agent.state.pos
    tx = np.where(i_am_closer, behind.x, to_post.x)
    ty = np.where(i_am_closer, behind.y, to_post.y)
    fx = np.clip(3.0 * tx, -agent.u_range, agent.u_range)
    fy = np.clip(3.0 * ty, -agent.u_range, agent.u_range)
    return AgentAction(force=Vec2(fx * agent.u_multiplier, fy * agent.u_multiplier))


@register("football")
class Football(Scenario):
    max_steps = 400

    def __init__(self, n_per_team: int = 2, ball_mass: float = 0.25):
        self.n_per_team = n_per_team
        self.ball_mass = ball_mass

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        world = World(batch_size, rng=rng)
        for i in range(self.n_per_team):
            world.add(Agent(f"blue_{i}", shape=Sphere(radius=0.05), color=(0.25, 0.45, 0.85)))
        for i in range(self.n_per_team):
            world.add(
                Agent(
                    f"red_{i}",
                    shape=Sphere(radius=0.05),
                    color=(0.85, 0.3, 0.25),
                    action_script=_chase_script,
                )
            )
        world.add(
            Entity(
                "ball",
                # radius above the per-step travel cap so fences can't be skipped
                shape=Sphere(radius=0.06),
                mass=self.ball_mass,
                movable=True,
                max_speed=0.5,
                color=(0.95, 0.95, 0.95),
            )
        )
        side_len = FIELD_HY - MOUTH_HY
        for nm, ln in (
            ("fence_top", 2 * FIELD_HX),
            ("fence_bottom", 2 * FIELD_HX),
            ("fence_left_up", side_len),
            ("fence_left_down", side_len),
            ("fence_right_up", side_len),
            ("fence_right_down", side_len),
            ("net_left_back", 2 * MOUTH_HY),
            ("net_left_up", NET_DEPTH),
            ("net_left_down", NET_DEPTH),
            ("net_right_back", 2 * MOUTH_HY),
            ("net_right_up", NET_DEPTH),
            ("net_right_down", NET_DEPTH),
        ):
            world.add(_wall(nm, ln))
        return world

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        from .common import place

        n = 1 if env_index is not None else world.batch_size
        rng = world.rng
        for i in range(self.n_per_team):
            blue = world.entity(f"blue_{i}")
            bx = rng.uniform(-1.2, -0.3, (n,))
            by = rng.uniform(-0.7, 0.7, (n,))
            blue.state.set_pos_xy(bx, by, env_index)
            blue.state.zero_motion(env_index)
            red = world.entity(f"red_{i}")
            rx = rng.uniform(0.3, 1.2, (n,))
            ry = rng.uniform(-0.7, 0.7, (n,))
            red.state.set_pos_xy(rx, ry, env_index)
            red.state.zero_motion(env_index)
        ball = world.entity("ball")
        jx = rng.uniform(-0.1, 0.1, (n,))
        jy = rng.uniform(-0.1, 0.1, (n,))
        ball.state.set_pos_xy(jx, jy, env_index)
        ball.state.zero_motion(env_index)

        mid = (MOUTH_HY + FIELD_HY) / 2
        place(world.entity("fence_top"), 0.0, FIELD_HY, world, env_index)
        place(world.entity("fence_bottom"), 0.0, -FIELD_HY, world, env_index)
        for side, sx in (("left", -FIELD_HX), ("right", FIELD_HX)):
            up = world.entity(f"fence_{side}_up")
            place(up, sx, mid, world, env_index)
            up.state.set_rot(np.pi / 2, env_index)
            down = world.entity(f"fence_{side}_down")
            place(down, sx, -mid, world, env_index)
            down.state.set_rot(np.pi / 2, env_index)
            back = world.entity(f"net_{side}_back")
            bx = sx - NET_DEPTH if side == "left" else sx + NET_DEPTH
            place(back, bx, 0.0, world, env_index)
            back.state.set_rot(np.pi / 2, env_index)
            for edge, ey in (("up", MOUTH_HY), ("down", -MOUTH_HY)):
                net = world.entity(f"net_{side}_{edge}")
                place(net, (sx + bx) / 2, ey, world, env_index)

    def _scored(self, world: World) -> tuple[np.ndarray, np.ndarray]:
        ball = world.entity("ball")
        right = ball.state.pos.x > FIELD_HX + 0.04
        left = ball.state.pos.x < -FIELD_HX - 0.04
        return right, left

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        B = world.batch_size
        if agent.action_script is not None:
            return np.zeros(B)
        right, left = self._scored(world)
        ball = world.entity("ball")
        mouth = Vec2.full(B, FIELD_HX, 0.0)
        gap = (ball.state.pos - mouth).norm()
        return 10.0 * right - 10.0 * left - 0.1 * gap

    def done(self, world: World) -> np.ndarray:
        right, left = self._scored(world)
        return right | left

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        ball = world.entity("ball")
        mates = [
            a for a in world.agents if a is not agent and (a.name[0] == agent.name[0])
        ]
        foes = [a for a in world.agents if a.name[0] != agent.name[0]]
        attack_x = FIELD_HX if agent.name.startswith("blue") else -FIELD_HX
        B = agent.state.batch_size
        return columns(
            *pos_vel(agent),
            rel_pos(agent, ball),
            ball.state.vel.x,
            ball.state.vel.y,
            *[rel_pos(agent, m) for m in mates],
            *[rel_pos(agent, f) for f in foes],
            np.full(B, attack_x) - agent.state.pos.x,
            0.0 - agent.state.pos.y,
        )

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        to_ball = obs[:, 4:6]
        n_rel = 2 * (2 * self.n_per_team - 1)
        to_mouth = obs[:, 8 + n_rel : 10 + n_rel]
        # line up behind the ball on the side away from the goal mouth
        through = unit(to_mouth - to_ball)
        stand_off = to_ball - through * 0.09
        lean = np.where(np.linalg.norm(stand_off, axis=1, keepdims=True) < 0.12, 1.0, 0.2)
        force = 5.0 * stand_off + through * lean
        if agent_index % 2 == 1:
            # second attacker shadows from a flank instead of stacking
            force = 5.0 * (stand_off + np.array([0.0, 0.3])) + through * 0.3
        return clip_unit(force)
