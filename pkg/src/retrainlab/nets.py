"""Small tanh MLPs with exact reverse-mode gradients, forward-mode tangents,
and closed-form Gaussian/categorical distribution quantities.

Everything is float64 numpy; parameters live in plain arrays so updates are
deterministic and checkpoints are trivial to serialize.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG_STD_MIN = -5.0
LOG_STD_MAX = 2.0
_LOG_2PI = math.log(2.0 * math.pi)

GAUSSIAN = "gaussian"
CATEGORICAL = "categorical"


class MLP:
    """Affine layers with tanh between them and a linear final layer."""

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray]):
        if len(weights) != len(biases) or not weights:
            raise ValueError("need matching, nonempty weight/bias lists")
        self.weights = weights
        self.biases = biases

    @property
    def sizes(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> MLP:
        return MLP([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def forward(self, x: np.ndarray) -> np.ndarray:
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w.T + b
            if i != last:
                h = np.tanh(h)
        return h

    def forward_cached(self, x: np.ndarray):
        """Forward pass keeping layer inputs for the backward pass."""
        inputs = []
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(h)
            h = h @ w.T + b
            if i != last:
                h = np.tanh(h)
        return h, inputs

    def backward(self, inputs: list[np.ndarray], dout: np.ndarray):
        """Parameter gradients for a scalar loss with d(loss)/d(output) = dout.

        `inputs` must come from forward_cached on the same batch; hidden
        activations are recovered from the cached next-layer inputs.
        """
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.weights)
        d = dout
        for i in range(len(self.weights) - 1, -1, -1):
            x_i = inputs[i]
            grads_w[i] = d.T @ x_i
            grads_b[i] = d.sum(axis=0)
            if i > 0:
                # inputs[i] for i >= 1 is tanh(z_{i-1}); reuse it for the derivative
                d = (d @ self.weights[i]) * (1.0 - x_i * x_i)
        return grads_w, grads_b

    def jvp(self, x: np.ndarray, t_weights, t_biases) -> np.ndarray:
        """Forward-mode tangent of the output w.r.t. a parameter tangent."""
        h = x
        th = np.zeros_like(x)
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            tz = h @ t_weights[i].T + t_biases[i] + th @ w.T
            z = h @ w.T + b
            if i != last:
                h = np.tanh(z)
                th = (1.0 - h * h) * tz
            else:
                h, th = z, tz
        return th

    def get_flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for pair in zip(self.weights, self.biases) for a in pair])

    def set_flat(self, vec: np.ndarray) -> None:
        off = 0
        for i in range(len(self.weights)):
            for arr in (self.weights[i], self.biases[i]):
                arr[...] = vec[off : off + arr.size].reshape(arr.shape)
                off += arr.size
        if off != vec.size:
            raise ValueError(f"flat vector length {vec.size} does not match {off} parameters")

    def unflatten(self, vec: np.ndarray):
        """Split a flat vector into per-layer arrays shaped like the params."""
        ws, bs, off = [], [], 0
        for w, b in zip(self.weights, self.biases):
            ws.append(vec[off : off + w.size].reshape(w.shape))
            off += w.size
            bs.append(vec[off : off + b.size].reshape(b.shape))
            off += b.size
        return ws, bs


def flatten_grads(grads_w, grads_b) -> np.ndarray:
    return np.concatenate([a.ravel() for pair in zip(grads_w, grads_b) for a in pair])


def init_mlp(sizes, rng: np.random.Generator, gain: float = 1.0, out_gain: float = 1.0) -> MLP:
    """Scaled-uniform init (Xavier-style bounds), zero biases."""
    weights, biases = [], []
    last = len(sizes) - 2
    for i in range(len(sizes) - 1):
        fan_in, fan_out = sizes[i], sizes[i + 1]
        g = out_gain if i == last else gain
        bound = g * math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MLP(weights, biases)


@dataclass
class PolicyParams:
    """Policy network: tanh trunk + linear head, plus a state-independent
    log-std vector for the Gaussian case."""

    kind: str
    net: MLP
    log_std: np.ndarray | None = None

    @property
    def act_dim(self) -> int:
        return self.net.weights[-1].shape[0]

    @property
    def n_params(self) -> int:
        extra = self.log_std.size if self.log_std is not None else 0
        return self.net.n_params + extra

    def copy(self) -> PolicyParams:
        ls = None if self.log_std is None else self.log_std.copy()
        return PolicyParams(self.kind, self.net.copy(), ls)

    def get_flat(self) -> np.ndarray:
        flat = self.net.get_flat()
        if self.log_std is not None:
            flat = np.concatenate([flat, self.log_std])
        return flat

    def set_flat(self, vec: np.ndarray) -> None:
        n = self.net.n_params
        self.net.set_flat(vec[:n])
        if self.log_std is not None:
            self.log_std[...] = np.clip(vec[n:], LOG_STD_MIN, LOG_STD_MAX)


@dataclass
class ValueParams:
    net: MLP

    @property
    def n_params(self) -> int:
        return self.net.n_params

    def copy(self) -> ValueParams:
        return ValueParams(self.net.copy())

    def get_flat(self) -> np.ndarray:
        return self.net.get_flat()

    def set_flat(self, vec: np.ndarray) -> None:
        self.net.set_flat(vec)


def init_policy(
    obs_dim: int,
    act_dim: int,
    kind: str,
    rng: np.random.Generator,
    hidden=(64, 64),
    log_std_init: float = -0.5,
) -> PolicyParams:
    if kind not in (GAUSSIAN, CATEGORICAL):
        raise ValueError(f"unknown policy kind {kind!r}")
    net = init_mlp([obs_dim, *hidden, act_dim], rng, gain=1.0, out_gain=0.01)
    log_std = np.full(act_dim, log_std_init) if kind == GAUSSIAN else None
    return PolicyParams(kind=kind, net=net, log_std=log_std)


def init_value(obs_dim: int, rng: np.random.Generator, hidden=(64, 64)) -> ValueParams:
    return ValueParams(init_mlp([obs_dim, *hidden, 1], rng, gain=1.0, out_gain=1.0))


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gaussian:
    """Diagonal Gaussian over a batch: mean (B, A), shared log_std (A,)."""

    mean: np.ndarray
    log_std: np.ndarray


@dataclass(frozen=True)
class Categorical:
    logits: np.ndarray  # (B, A)


def policy_dist(policy: PolicyParams, states: np.ndarray):
    out = policy.net.forward(states)
    if policy.kind == GAUSSIAN:
        return Gaussian(mean=out, log_std=policy.log_std.copy())
    return Categorical(logits=out)


def log_prob(dist, actions: np.ndarray) -> np.ndarray:
    if isinstance(dist, Gaussian):
        std = np.exp(dist.log_std)
        z = (actions - dist.mean) / std
        return -0.5 * (z * z).sum(axis=-1) - dist.log_std.sum() - 0.5 * _LOG_2PI * dist.mean.shape[-1]
    if isinstance(dist, Categorical):
        logp = log_softmax(dist.logits)
        idx = np.asarray(actions, dtype=np.int64)
        return logp[np.arange(logp.shape[0]), idx]
    raise TypeError(f"unsupported distribution {type(dist)!r}")


def entropy(dist) -> np.ndarray:
    if isinstance(dist, Gaussian):
        per_state = (dist.log_std + 0.5 * (_LOG_2PI + 1.0)).sum()
        return np.full(dist.mean.shape[0], per_state)
    if isinstance(dist, Categorical):
        logp = log_softmax(dist.logits)
        return -(np.exp(logp) * logp).sum(axis=-1)
    raise TypeError(f"unsupported distribution {type(dist)!r}")


def kl(old, new) -> np.ndarray:
    """Per-state KL(old || new); closed form in both families."""
    if isinstance(old, Gaussian) and isinstance(new, Gaussian):
        var_old = np.exp(2.0 * old.log_std)
        var_new = np.exp(2.0 * new.log_std)
        dmu = new.mean - old.mean
        per_dim = (new.log_std - old.log_std) + (var_old + dmu * dmu) / (2.0 * var_new) - 0.5
        return per_dim.sum(axis=-1)
    if isinstance(old, Categorical) and isinstance(new, Categorical):
        logp = log_softmax(old.logits)
        logq = log_softmax(new.logits)
        return (np.exp(logp) * (logp - logq)).sum(axis=-1)
    raise TypeError(f"KL needs two distributions of the same family, got {type(old)!r} and {type(new)!r}")


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


def policy_eval(policy: PolicyParams, value: ValueParams, states: np.ndarray):
    """Batched forward of both heads: (means or logits, log_stds, values)."""
    out = policy.net.forward(states)
    log_stds = policy.log_std.copy() if policy.log_std is not None else None
    values = value.net.forward(states)[..., 0]
    return out, log_stds, values


# ---------------------------------------------------------------------------
# Sampling (single observation, used by the sequential rollout)
# ---------------------------------------------------------------------------


def act(policy: PolicyParams, obs: np.ndarray, rng: np.random.Generator):
    """Sample one action; returns (action, log_prob) with the action unclamped."""
    out = policy.net.forward(obs[None, :])[0]
    if policy.kind == GAUSSIAN:
        std = np.exp(policy.log_std)
        noise = rng.standard_normal(out.shape[0])
        action = out + std * noise
        logp = -0.5 * (noise * noise).sum() - policy.log_std.sum() - 0.5 * _LOG_2PI * out.shape[0]
        return action, float(logp)
    probs = softmax(out[None, :])[0]
    u = rng.random()
    action = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    action = min(action, probs.size - 1)
    return action, float(np.log(probs[action]))


def mean_action(policy: PolicyParams, obs: np.ndarray):
    """Deterministic head: Gaussian mean, or categorical argmax."""
    out = policy.net.forward(obs[None, :])[0]
    if policy.kind == GAUSSIAN:
        return out
    return int(np.argmax(out))


def value_of(value: ValueParams, obs: np.ndarray) -> float:
    return float(value.net.forward(obs[None, :])[0, 0])


# ---------------------------------------------------------------------------
# Fisher-vector products (trust-region updates)
# ---------------------------------------------------------------------------


def fisher_vector_product(policy: PolicyParams, states: np.ndarray, vec: np.ndarray, damping: float) -> np.ndarray:
    """Exact Hessian-vector product of the batch-mean KL(old || new) at
    new == old, i.e. the Fisher information applied to `vec`, plus damping.

    Computed as J^T F J v with a forward-mode pass for J v and a reverse
    pass for J^T; F is the per-state Fisher of the output distribution.
    """
    n_net = policy.net.n_params
    tw, tb = policy.net.unflatten(vec[:n_net])
    t_out = policy.net.jvp(states, tw, tb)
    batch = states.shape[0]

    if policy.kind == GAUSSIAN:
        t_log_std = vec[n_net:]
        inv_var = np.exp(-2.0 * policy.log_std)
        cotangent = t_out * inv_var / batch
        _, inputs = policy.net.forward_cached(states)
        gw, gb = policy.net.backward(inputs, cotangent)
        out = np.concatenate([flatten_grads(gw, gb), 2.0 * t_log_std])
    else:
        probs = softmax(policy.net.forward(states))
        inner = (probs * t_out).sum(axis=-1, keepdims=True)
        cotangent = (probs * t_out - probs * inner) / batch
        _, inputs = policy.net.forward_cached(states)
        gw, gb = policy.net.backward(inputs, cotangent)
        out = flatten_grads(gw, gb)
    return out + damping * vec


def conjugate_gradient(matvec, b: np.ndarray, iterations: int, tol: float = 1e-10) -> np.ndarray:
    """Solve A x = b for symmetric positive-definite A given only matvec."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = r @ r
    for _ in range(iterations):
        if rs < tol:
            break
        ap = matvec(p)
        alpha = rs / (p @ ap)
        x += alpha * p
        r -= alpha * ap
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


# ---------------------------------------------------------------------------
# Adam
# ---------------------------------------------------------------------------


class Adam:
    def __init__(self, n_params: int, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(n_params)
        self.v = np.zeros(n_params)
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        """One descent step on a flat parameter vector; returns the update."""
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1**self.t)
        v_hat = self.v / (1.0 - self.beta2**self.t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def clip_grad_norm(grad: np.ndarray, max_norm: float) -> np.ndarray:
    norm = float(np.linalg.norm(grad))
    if norm > max_norm and norm > 0.0:
        return grad * (max_norm / norm)
    return grad
