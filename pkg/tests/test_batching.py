"""Batched primitive behavior: dtype control, Vec2 algebra, rng streams."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsim import ContractViolation, SeededRng, Vec2, precision
from swarmsim.batching import (
    clamp_norm,
    default_dtype,
    masked_select,
    scalars,
    set_default_dtype,
    uniform_in_box,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, width=32)


def test_default_dtype_is_float32():
    assert default_dtype() == np.float32


def test_precision_switch_and_restore():
    with precision("float64"):
        assert default_dtype() == np.float64
        assert Vec2.zeros(3).x.dtype == np.float64
    assert default_dtype() == np.float32


def test_set_default_dtype_rejects_others():
    with pytest.raises(ContractViolation):
        set_default_dtype(np.int32)


def test_vec2_shape_validation():
    with pytest.raises(ContractViolation):
        Vec2(np.zeros(3), np.zeros(4))
    with pytest.raises(ContractViolation):
        Vec2(np.zeros((2, 2)), np.zeros((2, 2)))


def test_vec2_algebra():
    a = Vec2.from_array([[1.0, 2.0], [3.0, 4.0]])
    b = Vec2.full(2, 1.0, -1.0)
    s = a + b
    assert np.allclose(s.to_array(), [[2.0, 1.0], [4.0, 3.0]])
    assert np.allclose((a - b).to_array(), [[0.0, 3.0], [2.0, 5.0]])
    assert np.allclose((a * 2.0).to_array(), [[2.0, 4.0], [6.0, 8.0]])
    assert np.allclose(a.dot(b), [1.0 - 2.0, 3.0 - 4.0])
    assert np.allclose(a.cross(b), [1.0 * -1 - 2.0 * 1, 3.0 * -1 - 4.0 * 1])
    assert np.allclose(a.norm(), [np.sqrt(5.0), 5.0])


def test_vec2_rotation_quarter_turn():
    v = Vec2.from_array([[1.0, 0.0]])
    r = v.rotated(np.pi / 2)
    assert np.allclose(r.to_array(), [[0.0, 1.0]], atol=1e-6)
    assert np.allclose(v.perp().to_array(), [[0.0, 1.0]])


def test_scalars_broadcast_and_checks():
    assert scalars(1.5, 4).shape == (4,)
    assert scalars([1.0, 2.0]).shape == (2,)
    with pytest.raises(ContractViolation):
        scalars(1.0)  # scalar without batch size
    with pytest.raises(ContractViolation):
        scalars([1.0, 2.0], 3)


def test_masked_select_per_env():
    m = np.array([True, False, True])
    out = masked_select(m, np.array([1.0, 2.0, 3.0]), np.array([9.0, 9.0, 9.0]))
    assert np.array_equal(out, [1.0, 9.0, 3.0])
    with pytest.raises(ContractViolation):
        masked_select(m, np.zeros(2), np.zeros(3))


@given(
    st.lists(st.tuples(finite, finite), min_size=1, max_size=20),
    st.floats(0.1, 10.0),
)
@settings(max_examples=60, deadline=None)
def test_clamp_norm_properties(rows, max_norm):
    arr = np.array(rows, dtype=np.float32)
    v = Vec2(arr[:, 0].copy(), arr[:, 1].copy())
    out = clamp_norm(v, max_norm)
    n_in = v.norm()
    n_out = out.norm()
    # never above the cap (float32 rescaling rounding allowed)
    assert (n_out <= max_norm * (1 + 1e-5) + 1e-6).all()
    # vectors already inside pass through bitwise
    inside = n_in <= max_norm
    assert np.array_equal(out.x[inside], v.x[inside])
    assert np.array_equal(out.y[inside], v.y[inside])


def test_clamp_norm_rejects_bad_bound():
    with pytest.raises(ContractViolation):
        clamp_norm(Vec2.zeros(1), 0.0)


def test_rng_determinism_same_seed():
    a = SeededRng(123).uniform(-1.0, 1.0, (5, 2))
    b = SeededRng(123).uniform(-1.0, 1.0, (5, 2))
    assert np.array_equal(a, b)


def test_rng_distinct_seeds_differ():
    a = SeededRng(1).uniform(0.0, 1.0, 16)
    b = SeededRng(2).uniform(0.0, 1.0, 16)
    assert not np.array_equal(a, b)


def test_rng_state_roundtrip():
    rng = SeededRng(7)
    rng.uniform(0.0, 1.0, 3)
    saved = rng.state()
    first = rng.uniform(0.0, 1.0, 4)
    rng.set_state(saved)
    again = rng.uniform(0.0, 1.0, 4)
    assert np.array_equal(first, again)


def test_rng_normal_mean_and_scale():
    rng = SeededRng(0)
    z = rng.normal(2.0, 0.5, 20000)
    assert abs(float(z.mean()) - 2.0) < 0.02
    assert abs(float(z.std()) - 0.5) < 0.02


@given(st.integers(0, 2**31), st.integers(1, 50))
@settings(max_examples=40, deadline=None)
def test_uniform_in_box_bounds(seed, batch):
    v = uniform_in_box(SeededRng(seed), (-2.0, 0.5), (-1.0, 0.75), batch)
    assert v.batch_size == batch
    assert (v.x >= -2.0).all() and (v.x <= -1.0).all()
    assert (v.y >= 0.5).all() and (v.y <= 0.75).all()


def test_uniform_in_box_validates():
    with pytest.raises(ContractViolation):
        uniform_in_box(SeededRng(0), (1.0, 0.0), (0.0, 1.0), 2)
    with pytest.raises(ContractViolation):
        uniform_in_box(SeededRng(0), (0.0,), (1.0, 1.0), 2)
