"""Collision shapes and their default rigid-body moments of inertia."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation


@dataclass(frozen=True)
class Shape:
    def moment_of_inertia(self, mass: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Sphere(Shape):
    radius: float = 0.05

    def __post_init__(self):
        if not self.radius > 0:
            raise ContractViolation(f"sphere radius must be positive, got {self.radius}")

    def moment_of_inertia(self, mass: float) -> float:
        return mass * self.radius**2 / 2

    def descriptor(self) -> dict:
        return {"kind": "sphere", "radius": self.radius}


@dataclass(frozen=True)
class Box(Shape):
    length: float = 0.3
    width: float = 0.1

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise ContractViolation(f"box dimensions must be positive, got {self.length}x{self.width}")

    def moment_of_inertia(self, mass: float) -> float:
        return mass * (self.length**2 + self.width**2) / 12

    def descriptor(self) -> dict:
        return {"kind": "box", "length": self.length, "width": self.width}


@dataclass(frozen=True)
class Line(Shape):
    length: float = 0.5

    def __post_init__(self):
        if not self.length > 0:
            raise ContractViolation(f"line length must be positive, got {self.length}")

    def moment_of_inertia(self, mass: float) -> float:
        return mass * self.length**2 / 12

    def descriptor(self) -> dict:
        return {"kind": "line", "length": self.length}


# skin distance used as the contact threshold for pairs with no sphere involved
SKIN = 1e-4


def min_contact_distance(a: Shape, b: Shape) -> float:
    """Minimum allowable distance between the closest points of two shapes."""
    if isinstance(a, Sphere) and isinstance(b, Sphere):
        return a.radius + b.radius
    if isinstance(a, Sphere):
        return a.radius
    if isinstance(b, Sphere):
        return b.radius
    return SKIN
