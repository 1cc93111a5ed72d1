"""Task catalog: every scenario registers itself here by name."""
from __future__ import annotations

from ..env import Scenario
from ..errors import UnknownScenario

_REGISTRY: dict[str, type[Scenario]] = {}


def register(name: str):
    def deco(cls: type[Scenario]) -> type[Scenario]:
        cls.scenario_name = name
        _REGISTRY[name] = cls
        return cls

    return deco


def scenario_names() -> list[str]:
    return list(_REGISTRY)


def create_scenario(name: str, **overrides) -> Scenario:
    try:
        cls = _REGISTRY[name]
    except KeyError:
        raise UnknownScenario(
            f"unknown scenario {name!r}; available: {', '.join(scenario_names())}"
        ) from None
    return cls(**overrides)


from . import (  # noqa: E402  (import for registration side effects)
    transport,
    wheel,
    balance,
    give_way,
    football,
    passage,
    reverse_transport,
    dispersion,
    dropout,
    flocking,
    discovery,
    waterfall,
    simple_spread,
)

__all__ = ["register", "scenario_names", "create_scenario"]
