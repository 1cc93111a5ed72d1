"""Episode rollouts and the two built-in policies.

Returns are computed per environment as the sum over steps of the mean
per-agent reward, counting only steps up to and including each env's first
done. Envs that finish early keep stepping (the batch stays in lockstep)
but their later rewards are ignored.
"""
from __future__ import annotations

import numpy as np

from .batching import SeededRng
from .env import Env


class RandomPolicy:
    """Uniform forces in each agent's action box."""

    def __init__(self, seed: int = 0):
        self.rng = SeededRng(seed)

    def __call__(self, env: Env, observations: list[np.ndarray]) -> list:
        out = []
        for agent in env.agents:
            if agent.action_script is not None:
                out.append(None)
                continue
            u = agent.u_range
            out.append(self.rng.uniform(-u, u, (env.batch_size, 2)))
        return out


class HeuristicPolicy:
    """Runs each agent through the scenario's scripted controller."""

    def __call__(self, env: Env, observations: list[np.ndarray]) -> list:
        out = []
        for i, agent in enumerate(env.agents):
            if agent.action_script is not None:
                out.append(None)
                continue
            out.append(env.scenario.heuristic_action(i, observations[i]))
        return out


def run_episode(
    env: Env,
    policy,
    max_steps: int | None = None,
    reset: bool = True,
) -> np.ndarray:
    """Play one episode and return the (B,) per-env return."""
    obs = env.reset() if reset else env.observations()
    horizon = max_steps if max_steps is not None else env.max_steps
    returns = np.zeros(env.batch_size, dtype=np.float64)
    alive = np.ones(env.batch_size, dtype=bool)
    for _ in range(horizon):
        actions = policy(env, obs)
        result = env.step(actions)
        scored = [
            r for r, a in zip(result.rewards, env.agents) if a.action_script is None
        ]
        mean_reward = np.stack(scored if scored else result.rewards).mean(axis=0)
        returns += np.where(alive, mean_reward.astype(np.float64), 0.0)
        alive &= ~result.dones
        obs = result.obs
        if not alive.any():
            break
    return returns
