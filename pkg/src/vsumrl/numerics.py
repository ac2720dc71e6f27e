"""Dense parameter tensors, Adam, finite-difference gradient checking, checkpoints.

All learning modules share these primitives. Values are kept in float64
internally regardless of what the on-disk feature format stores.
"""

from __future__ import annotations

import struct

import numpy as np

CHECKPOINT_MAGIC = b"FVSP"


class NumericsError(Exception):
    """Non-finite value or malformed checkpoint."""


class ParamTensor:
    """A named dense array with a same-shape gradient accumulator."""

    __slots__ = ("name", "values", "grad")

    def __init__(self, name, values):
        self.name = name
        self.values = np.array(values, dtype=np.float64)
        self.grad = np.zeros_like(self.values)

    @property
    def shape(self):
        return self.values.shape

    def zero_grad(self):
        self.grad[...] = 0.0

    def __repr__(self):
        return f"ParamTensor({self.name!r}, shape={self.values.shape})"


def init_params(shapes, seed, bound=0.05, ones_slices=None):
    """Build a fresh parameter set from ``{name: shape}``.

    Matrices (ndim >= 2) get uniform(-bound, bound) entries; vectors are
    treated as biases and start at zero. ``ones_slices`` maps a tensor name
    to a slice set to 1.0 after init, which is how the LSTM forget-gate bias
    gets its positive start.
    """
    rng = np.random.default_rng(seed)
    params = {}
    for name, shape in shapes.items():
        if len(shape) >= 2:
            values = rng.uniform(-bound, bound, size=shape)
        else:
            values = np.zeros(shape)
        params[name] = ParamTensor(name, values)
    if ones_slices:
        for name, sl in ones_slices.items():
            params[name].values[sl] = 1.0
    return params


class Adam:
    """Bias-corrected Adam over a ``{name: ParamTensor}`` set.

    ``step()`` consumes the accumulated gradients and zeroes them. A
    non-finite gradient aborts the whole update before any tensor moves.
    """

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p.values) for name, p in params.items()}
        self.v = {name: np.zeros_like(p.values) for name, p in params.items()}

    def step(self):
        for name, p in self.params.items():
            if not np.all(np.isfinite(p.grad)):
                raise NumericsError(f"non-finite gradient in parameter {name!r}")
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for name, p in self.params.items():
            g = p.grad
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p.values -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
            if not np.all(np.isfinite(p.values)):
                raise NumericsError(f"non-finite values in parameter {name!r} after update")
            p.zero_grad()


def adam_step(params, state):
    """Apply one update from ``state`` (an :class:`Adam`) to ``params``."""
    assert state.params is params
    state.step()


def grad_check(f, params, h=1e-5):
    """Compare analytic gradients against central finite differences.

    ``f`` is a deterministic scalar function evaluated at the current
    parameter values; the analytic gradient must already sit in each
    tensor's ``grad``. Returns the max over all coordinates of
    ``|analytic - numeric| / max(1, |analytic|)``.
    """
    worst = 0.0
    for p in params.values():
        flat = p.values.reshape(-1)
        gflat = p.grad.reshape(-1)
        for idx in range(flat.size):
            orig = flat[idx]
            flat[idx] = orig + h
            f_plus = f()
            flat[idx] = orig - h
            f_minus = f()
            flat[idx] = orig
            if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
                raise NumericsError(f"non-finite objective while perturbing {p.name!r}")
            numeric = (f_plus - f_minus) / (2.0 * h)
            analytic = gflat[idx]
            err = abs(analytic - numeric) / max(1.0, abs(analytic))
            if err > worst:
                worst = err
    return worst


def save_checkpoint(params, path):
    """Write the parameter set as a flat binary checkpoint.

    Layout: magic ``FVSP`` then, per tensor in iteration order, a u32
    name length, the utf-8 name, u32 rank, u32 dims, and the float64
    little-endian values in row-major order.
    """
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        for name, p in params.items():
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<I", p.values.ndim))
            fh.write(struct.pack(f"<{p.values.ndim}I", *p.values.shape))
            fh.write(p.values.astype("<f8").tobytes(order="C"))


def load_checkpoint(path):
    """Read a checkpoint back into a fresh ``{name: ParamTensor}`` set."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != CHECKPOINT_MAGIC:
        raise NumericsError(f"bad checkpoint magic in {path}")
    params = {}
    offset = 4
    while offset < len(blob):
        (name_len,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        name = blob[offset:offset + name_len].decode("utf-8")
        offset += name_len
        (rank,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        shape = struct.unpack_from(f"<{rank}I", blob, offset)
        offset += 4 * rank
        count = int(np.prod(shape)) if rank else 1
        values = np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
        offset += 8 * count
        params[name] = ParamTensor(name, values.reshape(shape))
    return params
