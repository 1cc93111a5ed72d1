"""Batched numeric primitives: one value per parallel environment.

Values are stored structure-of-arrays with the environment index as the
contiguous axis: a batched scalar is a float array of shape (B,), a batched
2D vector is a pair of such arrays. All arithmetic is elementwise along the
batch axis, so the result at environment e depends only on inputs at e.

The working precision is float32 by default; `set_default_dtype` /
`precision` switch the whole simulator to float64.
"""
from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .errors import ContractViolation

_DTYPE = np.float32


def default_dtype():
    """Working floating-point dtype for all batched state."""
    return _DTYPE


def set_default_dtype(dtype) -> None:
    """Switch working precision; accepts float32 or float64."""
    global _DTYPE
    dt = np.dtype(dtype)
    if dt not in (np.dtype(np.float32), np.dtype(np.float64)):
        raise ContractViolation(f"unsupported dtype {dtype!r}; use float32 or float64")
    _DTYPE = dt.type


@contextmanager
def precision(dtype):
    """Temporarily run the simulator at the given precision."""
    prev = _DTYPE
    set_default_dtype(dtype)
    try:
        yield
    finally:
        set_default_dtype(prev)


def scalars(values, batch_size: int | None = None) -> np.ndarray:
    """Coerce to a (B,) batch of scalars in the working dtype.

    A python scalar broadcasts to `batch_size` copies.
    """
    arr = np.asarray(values, dtype=_DTYPE)
    if arr.ndim == 0:
        if batch_size is None:
            raise ContractViolation("batch_size required to broadcast a scalar")
        arr = np.full(batch_size, arr, dtype=_DTYPE)
    if arr.ndim != 1:
        raise ContractViolation(f"batch scalars must be 1-D, got shape {arr.shape}")
    if batch_size is not None and arr.shape[0] != batch_size:
        raise ContractViolation(f"expected batch size {batch_size}, got {arr.shape[0]}")
    return arr


class Vec2:
    """A batch of 2D vectors stored as two (B,) component arrays."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = np.asarray(x, dtype=_DTYPE)
        self.y = np.asarray(y, dtype=_DTYPE)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ContractViolation(
                f"vector components must be equal-length 1-D arrays, got {self.x.shape} and {self.y.shape}"
            )

    @classmethod
    def zeros(cls, batch_size: int) -> "Vec2":
        return cls(np.zeros(batch_size, dtype=_DTYPE), np.zeros(batch_size, dtype=_DTYPE))

    @classmethod
    def full(cls, batch_size: int, x: float, y: float) -> "Vec2":
        return cls(np.full(batch_size, x, dtype=_DTYPE), np.full(batch_size, y, dtype=_DTYPE))

    @classmethod
    def from_array(cls, arr) -> "Vec2":
        """Build from an (B, 2) array, or a length-2 sequence broadcast to B=1."""
        a = np.asarray(arr, dtype=_DTYPE)
        if a.ndim == 1 and a.shape[0] == 2:
            a = a[None, :]
        if a.ndim != 2 or a.shape[1] != 2:
            raise ContractViolation(f"expected (B, 2) array, got shape {a.shape}")
        return cls(a[:, 0].copy(), a[:, 1].copy())

    @property
    def batch_size(self) -> int:
        return self.x.shape[0]

    def copy(self) -> "Vec2":
        return Vec2(self.x.copy(), self.y.copy())

    def to_array(self) -> np.ndarray:
        return np.stack([self.x, self.y], axis=1)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __mul__(self, s) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "Vec2":
        return Vec2(self.x / s, self.y / s)

    def dot(self, other: "Vec2") -> np.ndarray:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> np.ndarray:
        """Signed 2D scalar cross product x1*y2 - y1*x2."""
        return self.x * other.y - self.y * other.x

    def norm(self) -> np.ndarray:
        return np.sqrt(self.x * self.x + self.y * self.y)

    def rotated(self, angle) -> "Vec2":
        ca, sa = np.cos(angle), np.sin(angle)
        return Vec2(self.x * ca - self.y * sa, self.x * sa + self.y * ca)

    def perp(self) -> "Vec2":
        """Rotate by +90 degrees."""
        return Vec2(-self.y, self.x)

    def where(self, mask: np.ndarray, other: "Vec2") -> "Vec2":
        """Per-env select: self where mask, else other."""
        return Vec2(np.where(mask, self.x, other.x), np.where(mask, self.y, other.y))

    def __repr__(self) -> str:
        return f"Vec2(x={self.x!r}, y={self.y!r})"


def masked_select(mask: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-env select: a[e] where mask[e], else b[e]. All inputs length B."""
    mask = np.asarray(mask)
    a = np.asarray(a)
    b = np.asarray(b)
    if not (mask.shape == a.shape == b.shape) or mask.ndim != 1:
        raise ContractViolation(
            f"masked_select length mismatch: {mask.shape}, {a.shape}, {b.shape}"
        )
    return np.where(mask, a, b)


def clamp_norm(v: Vec2, max_norm: float) -> Vec2:
    """Scale vectors whose norm exceeds max_norm down to exactly max_norm.

    Vectors already within the bound pass through unchanged (bitwise).
    """
    if not max_norm > 0:
        raise ContractViolation(f"max_norm must be positive, got {max_norm}")
    n = v.norm()
    over = n > max_norm
    # safe denominator: only read where over is true, and there n > max_norm > 0
    scale = np.where(over, np.asarray(max_norm, dtype=_DTYPE) / np.where(over, n, 1), _DTYPE(1.0))
    return Vec2(v.x * scale, v.y * scale)


class SeededRng:
    """Deterministic random stream backed by the Philox counter-based generator.

    The Philox output sequence is platform-stable: the same seed and the same
    call sequence produce identical values everywhere.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.Philox(self.seed))

    def uniform(self, lo: float, hi: float, size) -> np.ndarray:
        return self._gen.uniform(lo, hi, size).astype(_DTYPE)

    def normal(self, mean: float, std: float, size) -> np.ndarray:
        return (mean + self._gen.standard_normal(size) * std).astype(_DTYPE)

    def integers(self, lo: int, hi: int, size) -> np.ndarray:
        return self._gen.integers(lo, hi, size)

    def state(self):
        return self._gen.bit_generator.state

    def set_state(self, state) -> None:
        self._gen.bit_generator.state = state


def uniform_in_box(rng: SeededRng, lo, hi, batch_size: int) -> Vec2:
    """B independent positions with each component uniform in [lo, hi].

    Draws x for the whole batch, then y, advancing the stream.
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if lo.shape != (2,) or hi.shape != (2,):
        raise ContractViolation("lo and hi must be 2-vectors")
    if np.any(lo > hi):
        raise ContractViolation(f"lo {lo} exceeds hi {hi}")
    x = rng.uniform(lo[0], hi[0], batch_size)
    y = rng.uniform(lo[1], hi[1], batch_size)
    return Vec2(x, y)
