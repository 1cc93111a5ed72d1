"""Entities, agents, physics parameters, and the batched world container.

A World owns B parallel copies of the same scene: every entity carries one
batched state (positions, velocities, rotations, angular velocities) with one
slot per environment. Entity lists, shapes and masses are shared across the
batch; only states differ per environment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .batching import SeededRng, Vec2, default_dtype, scalars
from .errors import ContractViolation
from .shapes import Shape, Sphere


@dataclass
class PhysParams:
    """World-level physics constants.

    dt: simulation step in seconds. damping: per-step multiplicative velocity
    decay in [0, 1). gravity: acceleration applied to every movable entity.
    contact_force / contact_margin: intensity and softness of the penetration
    penalty force.
    """

    dt: float = 0.1
    damping: float = 0.25
    gravity: tuple[float, float] = (0.0, 0.0)
    contact_force: float = 100.0
    contact_margin: float = 1e-3

    def __post_init__(self):
        if not self.dt > 0:
            raise ContractViolation(f"dt must be positive, got {self.dt}")
        if not 0 <= self.damping < 1:
            raise ContractViolation(f"damping must be in [0, 1), got {self.damping}")
        if self.contact_force < 0:
            raise ContractViolation("contact_force must be non-negative")
        if not self.contact_margin > 0:
            raise ContractViolation("contact_margin must be positive")


class EntityState:
    """Batched pose and velocity of one entity: pos, vel, rot, ang_vel."""

    __slots__ = ("pos", "vel", "rot", "ang_vel")

    def __init__(self, batch_size: int):
        dt = default_dtype()
        self.pos = Vec2.zeros(batch_size)
        self.vel = Vec2.zeros(batch_size)
        self.rot = np.zeros(batch_size, dtype=dt)
        self.ang_vel = np.zeros(batch_size, dtype=dt)

    @property
    def batch_size(self) -> int:
        return self.pos.batch_size

    def set_pos(self, pos: Vec2, env_index: int | None = None) -> None:
        if env_index is None:
            self.pos = pos.copy()
        else:
            self.pos.x[env_index] = pos.x[0]
            self.pos.y[env_index] = pos.y[0]

    def set_pos_xy(self, x, y, env_index: int | None = None) -> None:
        dt = default_dtype()
        vec = Vec2(np.asarray(x, dtype=dt).reshape(-1), np.asarray(y, dtype=dt).reshape(-1))
        self.set_pos(vec, env_index)

    def set_vel(self, vel: Vec2, env_index: int | None = None) -> None:
        if env_index is None:
            self.vel = vel.copy()
        else:
            self.vel.x[env_index] = vel.x[0]
            self.vel.y[env_index] = vel.y[0]

    def set_rot(self, rot, env_index: int | None = None) -> None:
        if env_index is None:
            self.rot = scalars(rot, self.batch_size).copy()
        else:
            self.rot[env_index] = np.asarray(rot).reshape(-1)[0]

    def set_ang_vel(self, ang_vel, env_index: int | None = None) -> None:
        if env_index is None:
            self.ang_vel = scalars(ang_vel, self.batch_size).copy()
        else:
            self.ang_vel[env_index] = np.asarray(ang_vel).reshape(-1)[0]

    def zero_motion(self, env_index: int | None = None) -> None:
        """Reset velocities (linear and angular) at one env or everywhere."""
        if env_index is None:
            b = self.batch_size
            self.vel = Vec2.zeros(b)
            self.ang_vel = np.zeros(b, dtype=default_dtype())
        else:
            self.vel.x[env_index] = 0
            self.vel.y[env_index] = 0
            self.ang_vel[env_index] = 0

    def snapshot(self, env_index: int) -> dict:
        return {
            "pos": (float(self.pos.x[env_index]), float(self.pos.y[env_index])),
            "vel": (float(self.vel.x[env_index]), float(self.vel.y[env_index])),
            "rot": float(self.rot[env_index]),
            "ang_vel": float(self.ang_vel[env_index]),
        }

    def restore(self, env_index: int, snap: dict) -> None:
        self.pos.x[env_index], self.pos.y[env_index] = snap["pos"]
        self.vel.x[env_index], self.vel.y[env_index] = snap["vel"]
        self.rot[env_index] = snap["rot"]
        self.ang_vel[env_index] = snap["ang_vel"]


class Entity:
    """A simulated body: shape, mass, mobility flags, and batched state."""

    def __init__(
        self,
        name: str,
        shape: Shape | None = None,
        mass: float = 1.0,
        moment_of_inertia: float | None = None,
        movable: bool = False,
        rotatable: bool = False,
        collidable: bool = True,
        max_speed: float | None = None,
        color: tuple[float, float, float] = (0.35, 0.35, 0.35),
    ):
        if not mass > 0:
            raise ContractViolation(f"mass must be positive, got {mass}")
        self.name = name
        self.shape = shape if shape is not None else Sphere()
        self.mass = float(mass)
        moi = moment_of_inertia if moment_of_inertia is not None else self.shape.moment_of_inertia(mass)
        if not moi > 0:
            raise ContractViolation(f"moment of inertia must be positive, got {moi}")
        self.moment_of_inertia = float(moi)
        self.movable = movable
        self.rotatable = rotatable
        self.collidable = collidable
        self.max_speed = max_speed
        self.color = color
        self.state: EntityState | None = None  # allocated when added to a world

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


@dataclass
class AgentAction:
    """Decoded per-step command: a batched force and optional communication."""

    force: Vec2
    comm: Optional[np.ndarray] = None  # (B, comm_dim)


class Agent(Entity):
    """A controllable entity driven by force actions, or by a scenario script."""

    def __init__(
        self,
        name: str,
        shape: Shape | None = None,
        mass: float = 1.0,
        u_range: float = 1.0,
        u_multiplier: float = 1.0,
        silent: bool = True,
        comm_dim: int = 0,
        action_noise_std: float = 0.0,
        obs_noise_std: float = 0.0,
        max_speed: float | None = None,
        sensors: list | None = None,
        action_script: Callable[["Agent", "World"], AgentAction] | None = None,
        color: tuple[float, float, float] = (0.25, 0.45, 0.85),
        **kwargs,
    ):
        kwargs.setdefault("movable", True)
        kwargs.setdefault("rotatable", False)
        super().__init__(name, shape=shape, mass=mass, max_speed=max_speed, color=color, **kwargs)
        if not u_range > 0:
            raise ContractViolation(f"u_range must be positive, got {u_range}")
        if comm_dim < 0:
            raise ContractViolation(f"comm_dim must be non-negative, got {comm_dim}")
        self.u_range = float(u_range)
        self.u_multiplier = float(u_multiplier)
        self.silent = silent
        self.comm_dim = 0 if silent else int(comm_dim)
        self.action_noise_std = float(action_noise_std)
        self.obs_noise_std = float(obs_noise_std)
        self.sensors = sensors or []
        self.action_script = action_script
        self.action: AgentAction | None = None  # last decoded action, set each step


class World:
    """The batched scene: physics parameters plus an ordered entity list.

    Agents always precede landmarks in the entity order. All entity states
    share the world's batch size.
    """

    def __init__(
        self,
        batch_size: int,
        params: PhysParams | None = None,
        seed: int = 0,
        rng: SeededRng | None = None,
    ):
        if batch_size < 1:
            raise ContractViolation(f"batch_size must be >= 1, got {batch_size}")
        self.batch_size = batch_size
        self.params = params if params is not None else PhysParams()
        self.rng = rng if rng is not None else SeededRng(seed)
        self.entities: list[Entity] = []
        self._names: set[str] = set()
        self._pairs: list[tuple[int, int]] | None = None
        self.comm: dict[str, np.ndarray] = {}  # latest communication vectors by agent name

    @property
    def agents(self) -> list[Agent]:
        return [e for e in self.entities if isinstance(e, Agent)]

    @property
    def landmarks(self) -> list[Entity]:
        return [e for e in self.entities if not isinstance(e, Agent)]

    def add(self, entity: Entity) -> Entity:
        if entity.name in self._names:
            raise ContractViolation(f"duplicate entity name {entity.name!r}")
        entity.state = EntityState(self.batch_size)
        if isinstance(entity, Agent):
            # keep agents grouped before landmarks
            insert_at = len(self.agents)
            self.entities.insert(insert_at, entity)
        else:
            self.entities.append(entity)
        self._names.add(entity.name)
        self._pairs = None
        return entity

    def collidable_pairs(self, builder) -> list[tuple[int, int]]:
        """Entity-index pairs worth checking for contact, built once per scene."""
        if self._pairs is None:
            self._pairs = builder(self)
        return self._pairs

    def entity(self, name: str) -> Entity:
        for e in self.entities:
            if e.name == name:
                return e
        raise KeyError(name)

    def get_env_state(self, env_index: int) -> dict:
        """Copy out one environment's full entity state (for tests and tools)."""
        return {e.name: e.state.snapshot(env_index) for e in self.entities}

    def set_env_state(self, env_index: int, state: dict) -> None:
        for name, snap in state.items():
            self.entity(name).state.restore(env_index, snap)
