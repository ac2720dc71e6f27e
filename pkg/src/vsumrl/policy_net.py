"""Bidirectional LSTM frame-selection policy with hand-derived BPTT.

The policy reads a T x D feature sequence with a forward and a backward
LSTM, concatenates the two hidden states per step, and maps each through a
fully connected sigmoid unit to a selection probability p_t. Actions are
independent Bernoulli draws from those probabilities. Gradients for
episode-weighted log-likelihoods flow back through the sigmoid head and
both recurrent directions; no autodiff framework is involved.

Gate layout inside each LSTM is (input, forget, candidate, output), stacked
along the first axis of the 4H x D input weights, the 4H x H recurrent
weights, and the 4H bias.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import NumericsError, ParamTensor, init_params

PROB_CLAMP = 1e-7  # keeps Bernoulli log-mass finite


def _sigmoid(z):
    # numerically stable piecewise form
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class PolicyParams:
    """All trainable weights of the recurrent policy head.

    Tensors, in checkpoint order: fwd.Wx, fwd.Wh, fwd.b, bwd.Wx, bwd.Wh,
    bwd.b, out.W (2H), out.b (1). The sigmoid head keeps its bias. The
    forget-gate bias slice starts at 1.0; all other biases start at zero
    and matrices draw from uniform(-init_bound, init_bound).
    """

    def __init__(self, input_dim, hidden_size, seed=0, init_bound=0.05, tensors=None,
                 initial_rate=None):
        self.input_dim = input_dim
        self.hidden_size = hidden_size
        if tensors is not None:
            self.tensors = tensors
            return
        h = hidden_size
        shapes = {}
        forget = slice(h, 2 * h)
        ones = {}
        for side in ("fwd", "bwd"):
            shapes[f"{side}.Wx"] = (4 * h, input_dim)
            shapes[f"{side}.Wh"] = (4 * h, h)
            shapes[f"{side}.b"] = (4 * h,)
            ones[f"{side}.b"] = forget
        shapes["out.W"] = (1, 2 * h)
        shapes["out.b"] = (1,)
        self.tensors = init_params(shapes, seed=seed, bound=init_bound, ones_slices=ones)
        if initial_rate is not None:
            # start the policy at a chosen selection rate (prior-matched bias)
            if not 0.0 < initial_rate < 1.0:
                raise ValueError("initial_rate must be in (0, 1)")
            self.tensors["out.b"].values[0] = np.log(initial_rate / (1.0 - initial_rate))

    @classmethod
    def from_tensors(cls, tensors):
        """Rebuild from a checkpoint's tensor set; dims come from shapes."""
        required = {"fwd.Wx", "fwd.Wh", "fwd.b", "bwd.Wx", "bwd.Wh", "bwd.b", "out.W", "out.b"}
        missing = required - set(tensors)
        if missing:
            raise NumericsError(f"checkpoint is missing tensors: {sorted(missing)}")
        four_h, input_dim = tensors["fwd.Wx"].shape
        return cls(input_dim, four_h // 4, tensors=dict(tensors))

    def zero_grads(self):
        for p in self.tensors.values():
            p.zero_grad()

    def clone(self):
        copies = {name: ParamTensor(name, p.values.copy()) for name, p in self.tensors.items()}
        return PolicyParams(self.input_dim, self.hidden_size, tensors=copies)


@dataclass
class _DirectionCache:
    """Per-step activations of one LSTM direction in processing order."""

    xs: np.ndarray      # (T, D) inputs as the direction saw them
    gi: np.ndarray      # (T, H) input gate, post-sigmoid
    gf: np.ndarray      # forget gate
    gg: np.ndarray      # candidate, post-tanh
    go: np.ndarray      # output gate
    c: np.ndarray       # cell states
    h: np.ndarray       # hidden states


@dataclass
class ForwardTrace:
    """Everything one forward pass caches for sampling and BPTT."""

    features: np.ndarray          # (T, D)
    fwd: _DirectionCache
    bwd: _DirectionCache          # processing order = reversed time
    h_cat: np.ndarray             # (T, 2H) [h_fwd ; h_bwd] in time order
    logits: np.ndarray            # (T,) pre-sigmoid outputs
    probs: np.ndarray             # (T,) selection probabilities
    hidden_fwd: np.ndarray = field(init=False)  # (T, H) time order
    hidden_bwd: np.ndarray = field(init=False)

    def __post_init__(self):
        self.hidden_fwd = self.fwd.h
        self.hidden_bwd = self.bwd.h[::-1]


def _lstm_run(Wx, Wh, b, xs):
    T = xs.shape[0]
    H = Wh.shape[1]
    gi = np.empty((T, H))
    gf = np.empty((T, H))
    gg = np.empty((T, H))
    go = np.empty((T, H))
    cs = np.empty((T, H))
    hs = np.empty((T, H))
    pre = xs @ Wx.T + b  # (T, 4H); recurrent part added per step
    h = np.zeros(H)
    c = np.zeros(H)
    for t in range(T):
        z = pre[t] + Wh @ h
        i = _sigmoid(z[:H])
        f = _sigmoid(z[H:2 * H])
        g = np.tanh(z[2 * H:3 * H])
        o = _sigmoid(z[3 * H:])
        c = f * c + i * g
        h = o * np.tanh(c)
        gi[t], gf[t], gg[t], go[t], cs[t], hs[t] = i, f, g, o, c, h
    return _DirectionCache(xs=xs, gi=gi, gf=gf, gg=gg, go=go, c=cs, h=hs)


def _lstm_backprop(Wx, Wh, cache, dh_ext, grads):
    """Backprop one direction; dh_ext is (T, H) in the cache's processing
    order. Accumulates into grads['Wx'|'Wh'|'b']."""
    T, H = dh_ext.shape
    dh_next = np.zeros(H)
    dc_next = np.zeros(H)
    dWx, dWh, db = grads
    for t in range(T - 1, -1, -1):
        i, f, g, o = cache.gi[t], cache.gf[t], cache.gg[t], cache.go[t]
        tanh_c = np.tanh(cache.c[t])
        dh = dh_ext[t] + dh_next
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        c_prev = cache.c[t - 1] if t > 0 else np.zeros(H)
        h_prev = cache.h[t - 1] if t > 0 else np.zeros(H)
        di = dc * g
        df = dc * c_prev
        dg = dc * i
        dz = np.concatenate([
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            dg * (1.0 - g * g),
            do * o * (1.0 - o),
        ])
        dWx += np.outer(dz, cache.xs[t])
        dWh += np.outer(dz, h_prev)
        db += dz
        dh_next = Wh.T @ dz
        dc_next = dc * f


def forward(params, features):
    """Run both directions and the sigmoid head over a feature sequence."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("features must be a T x D matrix with T >= 1")
    t = params.tensors
    fwd = _lstm_run(t["fwd.Wx"].values, t["fwd.Wh"].values, t["fwd.b"].values, x)
    bwd = _lstm_run(t["bwd.Wx"].values, t["bwd.Wh"].values, t["bwd.b"].values, x[::-1])
    h_cat = np.concatenate([fwd.h, bwd.h[::-1]], axis=1)
    logits = h_cat @ t["out.W"].values[0] + t["out.b"].values[0]
    if not np.all(np.isfinite(logits)):
        raise NumericsError("non-finite activation in policy forward pass")
    probs = _sigmoid(logits)
    return ForwardTrace(features=x, fwd=fwd, bwd=bwd, h_cat=h_cat, logits=logits, probs=probs)


def sample_actions(trace, rng):
    """Draw one Bernoulli action per frame; ``rng`` is a seed or Generator."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return (rng.random(trace.probs.shape[0]) < trace.probs).astype(np.int8)


def log_prob_of(trace, actions):
    """Joint log-mass of an action sequence under the trace's Bernoullis."""
    a = np.asarray(actions, dtype=np.float64)
    p = np.clip(trace.probs, PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(np.sum(a * np.log(p) + (1.0 - a) * np.log1p(-p)))


def backward_logits(params, trace, d_logits, extra_param_grads=None):
    """Accumulate gradients of a scalar whose logit-space gradient is given.

    ``d_logits[t]`` is dL/d(pre-sigmoid output at step t). Gradients are
    added into each tensor's ``grad``; ``extra_param_grads`` (name -> array)
    is added verbatim, which is how weight-decay terms enter.
    """
    t = params.tensors
    d_logits = np.asarray(d_logits, dtype=np.float64)
    H = params.hidden_size
    t["out.W"].grad[0] += d_logits @ trace.h_cat
    t["out.b"].grad[0] += d_logits.sum()
    dh_cat = np.outer(d_logits, t["out.W"].values[0])
    _lstm_backprop(
        t["fwd.Wx"].values, t["fwd.Wh"].values, trace.fwd, dh_cat[:, :H],
        (t["fwd.Wx"].grad, t["fwd.Wh"].grad, t["fwd.b"].grad))
    _lstm_backprop(
        t["bwd.Wx"].values, t["bwd.Wh"].values, trace.bwd, dh_cat[::-1, H:],
        (t["bwd.Wx"].grad, t["bwd.Wh"].grad, t["bwd.b"].grad))
    if extra_param_grads:
        for name, g in extra_param_grads.items():
            t[name].grad += g
    for p in t.values():
        if not np.all(np.isfinite(p.grad)):
            raise NumericsError(f"non-finite gradient in parameter {p.name!r}")


def backward_reinforce(params, trace, episodes, extra_logit_grad=None, extra_param_grads=None):
    """BPTT for a weighted sum of episode log-likelihoods.

    ``episodes`` is a list of (actions, weight) pairs sampled from this
    trace. The gradient of sum_n w_n * log pi(a_n) w.r.t. the step-t logit
    is sum_n w_n * (a_t_n - p_t); that seed plus any ``extra_logit_grad``
    (regularizers, supervision) is pushed through the head and both LSTM
    directions. Gradients accumulate into ``params``.
    """
    d_logits = np.zeros_like(trace.probs)
    for actions, weight in episodes:
        if weight != 0.0:
            d_logits += weight * (np.asarray(actions, dtype=np.float64) - trace.probs)
    if extra_logit_grad is not None:
        d_logits += extra_logit_grad
    backward_logits(params, trace, d_logits, extra_param_grads)
