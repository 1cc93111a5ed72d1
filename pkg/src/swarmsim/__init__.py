"""Vectorized 2D multi-robot simulator.

Batched rigid-body physics (spheres, boxes, line segments), a catalog of
cooperative multi-robot tasks, scripted baseline policies, a throughput
benchmark, and a websocket bridge for live viewing.
"""
from .batching import SeededRng, Vec2, default_dtype, precision, set_default_dtype
from .core import Agent, AgentAction, Entity, PhysParams, World
from .env import ActionSpec, Env, Scenario, SingleEnv, StepResult, decode_action
from .errors import ContractViolation, SimError, UnknownScenario, UnsupportedShapePair
from .rollout import HeuristicPolicy, RandomPolicy, run_episode
from .scenarios import create_scenario, scenario_names
from .sensors import Lidar, cast_ray, lidar_scan
from .shapes import Box, Line, Sphere

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "AgentAction",
    "ActionSpec",
    "Box",
    "ContractViolation",
    "Entity",
    "Env",
    "HeuristicPolicy",
    "Lidar",
    "Line",
    "PhysParams",
    "RandomPolicy",
    "Scenario",
    "SeededRng",
    "SimError",
    "SingleEnv",
    "Sphere",
    "StepResult",
    "UnknownScenario",
    "UnsupportedShapePair",
    "Vec2",
    "World",
    "cast_ray",
    "create_scenario",
    "decode_action",
    "default_dtype",
    "lidar_scan",
    "precision",
    "run_episode",
    "scenario_names",
    "set_default_dtype",
    "__version__",
]
