"""Episode layer: scenarios define tasks, Env drives the batched loop.

A scenario owns world construction, per-env resets, rewards, observations,
and termination. Env owns action decoding, physics stepping, horizon
bookkeeping, and observation noise. Episodes never auto-reset: indices keep
stepping after done and callers decide when to reset them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .batching import SeededRng, Vec2, default_dtype
from .core import Agent, AgentAction, World
from .dynamics import world_step
from .errors import ContractViolation


class Scenario:
    """Task definition. Subclasses override the hooks below.

    Construction happens once; make_world is called once per Env; resets and
    the per-step queries are called throughout. Aux task state (counters,
    flags) lives on the scenario instance and must be reset per env index in
    reset_world_at.
    """

    max_steps: int = 200

    def make_world(self, batch_size: int, rng: SeededRng) -> World:
        raise NotImplementedError

    def reset_world_at(self, world: World, env_index: int | None = None) -> None:
        raise NotImplementedError

    def reward(self, agent: Agent, world: World) -> np.ndarray:
        raise NotImplementedError

    def observation(self, agent: Agent, world: World) -> np.ndarray:
        raise NotImplementedError

    def done(self, world: World) -> np.ndarray:
        return np.zeros(world.batch_size, dtype=bool)

    def info(self, agent: Agent, world: World) -> dict:
        return {}

    def post_step(self, world: World) -> None:
        pass

    def heuristic_action(self, agent_index: int, obs: np.ndarray) -> np.ndarray:
        """Scripted baseline controller, fed only this agent's observation."""
        raise NotImplementedError


@dataclass(frozen=True)
class ActionSpec:
    """What one agent's raw action must look like."""

    mode: str  # "continuous" | "discrete"
    move_dim: int = 2
    comm_dim: int = 0
    n_move_choices: int = 5  # stay, +x, -x, +y, -y

    @property
    def flat_dim(self) -> int:
        return self.move_dim + self.comm_dim


def decode_action(
    raw, spec: ActionSpec, agent: Agent, rng: SeededRng
) -> AgentAction:
    """Turn a raw policy output into a physical AgentAction.

    Continuous: (B, 2 + comm_dim); movement is clamped to +-u_range then
    scaled by u_multiplier, and Gaussian noise (if configured) is added to
    the final force. Discrete: (B,) move index, or (B, 2) of move and comm
    indices; moves map to the axis-aligned unit forces times
    u_range * u_multiplier. Malformed input raises ContractViolation.
    """
    dtype = default_dtype()
    B = agent.state.batch_size
    arr = np.asarray(raw)
    if np.issubdtype(arr.dtype, np.floating) and np.isnan(arr).any():
        raise ContractViolation(f"action for '{agent.name}' contains NaN")

    if spec.mode == "continuous":
        if arr.ndim == 1 and spec.comm_dim == 0 and arr.shape == (2,) and B == 1:
            arr = arr.reshape(1, 2)
        if arr.shape != (B, spec.flat_dim):
            raise ContractViolation(
                f"continuous action for '{agent.name}' has shape {arr.shape}, "
                f"expected {(B, spec.flat_dim)}"
            )
        arr = arr.astype(dtype)
        move = np.clip(arr[:, :2], -agent.u_range, agent.u_range) * dtype(agent.u_multiplier)
        fx, fy = move[:, 0].copy(), move[:, 1].copy()
        comm = arr[:, 2:].copy() if spec.comm_dim else None
    elif spec.mode == "discrete":
        if not np.issubdtype(arr.dtype, np.integer):
            raise ContractViolation(f"discrete action for '{agent.name}' must be integer")
        if spec.comm_dim:
            if arr.shape != (B, 2):
                raise ContractViolation(
                    f"discrete action for '{agent.name}' has shape {arr.shape}, expected {(B, 2)}"
                )
            move_idx, comm_idx = arr[:, 0], arr[:, 1]
        else:
            if arr.shape == (B, 1):
                arr = arr[:, 0]
            if arr.shape != (B,):
                raise ContractViolation(
                    f"discrete action for '{agent.name}' has shape {arr.shape}, expected {(B,)}"
                )
            move_idx, comm_idx = arr, None
        if (move_idx < 0).any() or (move_idx >= spec.n_move_choices).any():
            raise ContractViolation(
                f"discrete move index for '{agent.name}' out of range [0, {spec.n_move_choices})"
            )
        u = dtype(agent.u_range * agent.u_multiplier)
        # 0: stay, 1: +x, 2: -x, 3: +y, 4: -y
        fx = np.where(move_idx == 1, u, np.where(move_idx == 2, -u, dtype(0.0)))
        fy = np.where(move_idx == 3, u, np.where(move_idx == 4, -u, dtype(0.0)))
        fx = fx.astype(dtype)
        fy = fy.astype(dtype)
        if comm_idx is not None:
            if (comm_idx < 0).any() or (comm_idx >= spec.comm_dim).any():
                raise ContractViolation(
                    f"comm index for '{agent.name}' out of range [0, {spec.comm_dim})"
                )
            comm = np.zeros((B, spec.comm_dim), dtype=dtype)
            comm[np.arange(B), comm_idx] = 1.0
        else:
            comm = None
    else:
        raise ContractViolation(f"unknown action mode {spec.mode!r}")

    if agent.action_noise_std > 0.0:
        noise = rng.normal(0.0, agent.action_noise_std, (B, 2))
        fx = fx + noise[:, 0]
        fy = fy + noise[:, 1]
    if agent.silent:
        comm = None
    return AgentAction(force=Vec2(fx, fy), comm=comm)


@dataclass
class StepResult:
    obs: list[np.ndarray]
    rewards: list[np.ndarray]
    dones: np.ndarray
    infos: list[dict] = field(default_factory=list)


class Env:
    """Batched episode driver around one scenario instance."""

    def __init__(
        self,
        scenario: Scenario,
        batch_size: int,
        seed: int = 0,
        max_steps: int | None = None,
        action_mode: str = "continuous",
    ):
        if batch_size < 1:
            raise ContractViolation(f"batch_size must be >= 1, got {batch_size}")
        if action_mode not in ("continuous", "discrete"):
            raise ContractViolation(f"unknown action mode {action_mode!r}")
        self.scenario = scenario
        self.batch_size = batch_size
        self.rng = SeededRng(seed)
        self.world = scenario.make_world(batch_size, self.rng)
        self.world.rng = self.rng
        self.max_steps = max_steps if max_steps is not None else scenario.max_steps
        self.action_mode = action_mode
        self.step_count = np.zeros(batch_size, dtype=np.int64)
        self.action_specs = [
            ActionSpec(mode=action_mode, comm_dim=0 if a.silent else a.comm_dim)
            for a in self.world.agents
        ]
        self.reset()

    @property
    def agents(self) -> list[Agent]:
        return self.world.agents

    def reset(self, env_index: int | None = None) -> list[np.ndarray]:
        """Reset every env, or just one index, and return fresh observations."""
        if env_index is not None and not (0 <= env_index < self.batch_size):
            raise ContractViolation(f"env_index {env_index} out of range [0, {self.batch_size})")
        self.scenario.reset_world_at(self.world, env_index)
        if env_index is None:
            self.step_count[:] = 0
        else:
            self.step_count[env_index] = 0
        return self.observations()

    def observations(self) -> list[np.ndarray]:
        out = []
        for agent in self.agents:
            obs = self.scenario.observation(agent, self.world).astype(default_dtype())
            if agent.obs_noise_std > 0.0:
                obs = obs + self.rng.normal(0.0, agent.obs_noise_std, obs.shape)
            out.append(obs)
        return out

    def step(self, raw_actions: list) -> StepResult:
        """Advance the whole batch one step and return the usual tuple.

        raw_actions align with self.agents; entries for scripted agents may
        be None (their script runs inside the physics step).
        """
        agents = self.agents
        if len(raw_actions) != len(agents):
            raise ContractViolation(f"got {len(raw_actions)} actions for {len(agents)} agents")
        actions = []
        for raw, agent, spec in zip(raw_actions, agents, self.action_specs):
            if raw is None:
                if agent.action_script is None:
                    raise ContractViolation(f"agent '{agent.name}' needs an action, got None")
                actions.append(None)
            else:
                actions.append(decode_action(raw, spec, agent, self.rng))
        world_step(self.world, actions)
        self.scenario.post_step(self.world)
        self.step_count += 1
        rewards = [
            self.scenario.reward(a, self.world).astype(default_dtype()) for a in agents
        ]
        dones = self.scenario.done(self.world) | (self.step_count >= self.max_steps)
        obs = self.observations()
        infos = [self.scenario.info(a, self.world) for a in agents]
        return StepResult(obs=obs, rewards=rewards, dones=dones, infos=infos)


class SingleEnv:
    """Unbatched facade over a batch_size=1 Env: scalars in, scalars out."""

    def __init__(self, env: Env):
        if env.batch_size != 1:
            raise ContractViolation("SingleEnv requires a batch_size=1 Env")
        self.env = env

    @property
    def agents(self) -> list[Agent]:
        return self.env.agents

    def reset(self, **kwargs) -> list[np.ndarray]:
        return [o[0] for o in self.env.reset(**kwargs)]

    def step(self, raw_actions: list):
        batched = []
        for raw, spec in zip(raw_actions, self.env.action_specs):
            if raw is None:
                batched.append(None)
            elif spec.mode == "discrete":
                batched.append(np.asarray(raw).reshape(1, -1) if np.ndim(raw) else np.asarray([raw]))
            else:
                batched.append(np.asarray(raw).reshape(1, -1))
        res = self.env.step(batched)
        obs = [o[0] for o in res.obs]
        rewards = [float(r[0]) for r in res.rewards]
        done = bool(res.dones[0])
        return obs, rewards, done, res.infos
