import numpy as np
import pytest

from vsumrl import numerics
from vsumrl.numerics import Adam, NumericsError, ParamTensor, grad_check, init_params


def make_scalar_param(value):
    return {"theta": ParamTensor("theta", np.array([value]))}


def test_adam_first_step_closed_form():
    # with g=1 at t=1, bias correction makes the step -lr up to eps
    params = make_scalar_param(0.0)
    opt = Adam(params, lr=1e-3)
    params["theta"].grad[:] = 1.0
    opt.step()
    assert params["theta"].values[0] == pytest.approx(-1e-3, rel=1e-6)
    assert params["theta"].grad[0] == 0.0  # consumed


def test_adam_zero_grad_no_move():
    params = make_scalar_param(1.5)
    opt = Adam(params, lr=0.1)
    params["theta"].grad[:] = 0.0
    opt.step()
    assert params["theta"].values[0] == 1.5


def test_adam_descends_quadratic():
    params = make_scalar_param(1.0)
    opt = Adam(params, lr=1e-2)
    traj = [1.0]
    for _ in range(100):
        params["theta"].grad[:] = 2.0 * params["theta"].values
        opt.step()
        traj.append(abs(params["theta"].values[0]))
    assert traj[-1] < traj[0]
    assert all(b <= a + 1e-12 for a, b in zip(traj, traj[1:]))


def test_adam_scale_aware_first_step():
    # f = c * theta^2: the first-step displacement must not depend on c
    steps = []
    for c in (1.0, 100.0):
        params = make_scalar_param(1.0)
        opt = Adam(params, lr=1e-3)
        params["theta"].grad[:] = 2.0 * c * params["theta"].values
        opt.step()
        steps.append(1.0 - params["theta"].values[0])
    assert steps[0] == pytest.approx(steps[1], rel=1e-6)


def test_adam_rejects_nonfinite_gradient():
    params = make_scalar_param(1.0)
    opt = Adam(params, lr=1e-3)
    params["theta"].grad[:] = np.nan
    with pytest.raises(NumericsError, match="theta"):
        opt.step()
    assert params["theta"].values[0] == 1.0  # untouched


def test_adam_step_module_function():
    params = make_scalar_param(0.0)
    state = Adam(params, lr=1e-3)
    params["theta"].grad[:] = -1.0
    numerics.adam_step(params, state)
    assert params["theta"].values[0] == pytest.approx(1e-3, rel=1e-6)


def test_grad_check_exact_quadratic():
    rng = np.random.default_rng(0)
    params = {"w": ParamTensor("w", rng.normal(size=(3, 2)))}

    def f():
        return float(np.sum(params["w"].values ** 2))

    params["w"].grad[:] = 2.0 * params["w"].values
    assert grad_check(f, params, h=1e-5) < 1e-8


def test_grad_check_flags_corrupted_gradient():
    rng = np.random.default_rng(1)
    params = {"w": ParamTensor("w", rng.normal(size=(4,)))}

    def f():
        return float(np.sum(params["w"].values ** 2))

    params["w"].grad[:] = 2.0 * params["w"].values
    params["w"].grad[2] *= 2.0  # deliberate corruption
    assert grad_check(f, params, h=1e-5) > 1e-2


def test_init_params_deterministic_and_bounded():
    shapes = {"Wx": (8, 3), "Wh": (8, 2), "b": (8,)}
    a = init_params(shapes, seed=42)
    b = init_params(shapes, seed=42)
    for name in shapes:
        assert np.array_equal(a[name].values, b[name].values)
    assert np.all(np.abs(a["Wx"].values) <= 0.05)
    assert np.all(a["b"].values == 0.0)


def test_init_params_forget_gate_slice():
    h = 4
    params = init_params({"b": (4 * h,)}, seed=0, ones_slices={"b": slice(h, 2 * h)})
    bias = params["b"].values
    assert np.all(bias[h:2 * h] == 1.0)
    assert np.all(bias[:h] == 0.0)
    assert np.all(bias[2 * h:] == 0.0)


def test_checkpoint_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    params = {
        "fwd.Wx": ParamTensor("fwd.Wx", rng.normal(size=(8, 3))),
        "out.b": ParamTensor("out.b", rng.normal(size=(1,))),
    }
    path = tmp_path / "model.fvsp"
    numerics.save_checkpoint(params, path)
    loaded = numerics.load_checkpoint(path)
    assert list(loaded) == list(params)
    for name in params:
        assert np.array_equal(loaded[name].values, params[name].values)
    # and the bytes are reproducible
    path2 = tmp_path / "model2.fvsp"
    numerics.save_checkpoint(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_checkpoint_bad_magic(tmp_path):
    path = tmp_path / "junk.fvsp"
    path.write_bytes(b"NOPE" + b"\x00" * 16)
    with pytest.raises(NumericsError, match="magic"):
        numerics.load_checkpoint(path)
