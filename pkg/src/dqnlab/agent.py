"""DQN decision making.

Epsilon-greedy action selection with an exponential schedule, Bellman
target computation against a slowly tracking target network, one Huber
loss optimization step, and Polyak soft updates. The same agent drives
both environments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import kernels as K
from .errors import ConfigError, InsufficientDataError, ShapeError
from .nn import Adam, QNetwork, clip_gradients
from .replay import Transition


@dataclass(frozen=True)
class Hyperparams:
    """All scalar training knobs with their default values."""

    gamma: float = 0.99
    eps_start: float = 0.99
    eps_end: float = 0.01
    eps_decay: float = 1000.0
    tau: float = 0.005
    lr: float = 1e-4
    batch_size: int = 256
    memory_capacity: int = 50_000
    hidden_size: int = 256
    huber_delta: float = 1.0
    clip_limit: float = 100.0
    dropout_p: float = 0.1
    learn_start: int | None = None  # None: start once batch_size is stored

    def __post_init__(self):
        checks = [
            ("gamma", 0.0 < self.gamma <= 1.0, "must be in (0, 1]"),
            ("eps_start", 0.0 <= self.eps_start <= 1.0, "must be in [0, 1]"),
            ("eps_end", 0.0 <= self.eps_end <= self.eps_start, "must be in [0, eps_start]"),
            ("eps_decay", self.eps_decay > 0.0, "must be > 0"),
            ("tau", 0.0 < self.tau <= 1.0, "must be in (0, 1]"),
            ("lr", self.lr > 0.0, "must be > 0"),
            ("batch_size", self.batch_size >= 1, "must be >= 1"),
            ("memory_capacity", self.memory_capacity >= 1, "must be >= 1"),
            ("hidden_size", self.hidden_size >= 1, "must be >= 1"),
            ("huber_delta", self.huber_delta > 0.0, "must be > 0"),
            ("clip_limit", self.clip_limit > 0.0, "must be > 0"),
            ("dropout_p", 0.0 <= self.dropout_p < 1.0, "must be in [0, 1)"),
            (
                "learn_start",
                self.learn_start is None or self.learn_start >= 0,
                "must be >= 0",
            ),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ConfigError(f"{name} {msg}, got {getattr(self, name)}")

    @property
    def effective_learn_start(self) -> int:
        """Stored transitions required before optimization begins."""
        base = self.learn_start if self.learn_start is not None else 0
        return max(base, self.batch_size)


def hyperparam_names() -> list[str]:
    return [f.name for f in fields(Hyperparams)]


def epsilon_at(h: Hyperparams, step: int) -> float:
    """Exploration rate after the given number of environment steps."""
    return h.eps_end + (h.eps_start - h.eps_end) * math.exp(-step / h.eps_decay)


class DqnAgent:
    """Policy/target network pair plus optimizer and step bookkeeping."""

    def __init__(
        self,
        obs_dim: int,
        n_actions: int,
        hp: Hyperparams,
        rng: np.random.Generator | None = None,
    ):
        self.hp = hp
        self.n_actions = n_actions
        self.policy_net = QNetwork.create(
            obs_dim, hp.hidden_size, n_actions, hp.dropout_p, rng
        )
        self.target_net = self.policy_net.copy()
        self.optimizer = Adam.for_network(self.policy_net, hp.lr)
        self.step_count = 0

    def epsilon(self) -> float:
        return epsilon_at(self.hp, self.step_count)

    def greedy_action(self, obs) -> int:
        """Argmax over eval-mode Q-values; ties break to the lowest index."""
        q, _ = self.policy_net.forward(obs, train=False)
        return int(np.argmax(q))

    def select_action(self, obs, rng: np.random.Generator) -> int:
        """Epsilon-greedy draw; advances the global step counter."""
        eps = self.epsilon()
        self.step_count += 1
        if rng.random() < eps:
            return int(rng.integers(self.n_actions))
        return self.greedy_action(obs)

    def compute_targets(self, batch: list[Transition]) -> np.ndarray:
        """r for terminal transitions, r + gamma*max_a' Q_target(s',a') otherwise."""
        if not batch:
            raise InsufficientDataError("cannot compute targets for an empty batch")
        targets = np.array([t.reward for t in batch], dtype=np.float64)
        live = [i for i, t in enumerate(batch) if not t.done]
        if live:
            nxt = np.stack([batch[i].next_state for i in live])
            qn, _ = self.target_net.forward(nxt, train=False)
            targets[live] += self.hp.gamma * qn.max(axis=1)
        return targets

    def optimize(self, batch: list[Transition], rng: np.random.Generator | None = None) -> float:
        """One gradient step on the policy net; returns the pre-step mean loss.

        Train-mode forward, Q gathered at the taken actions, mean Huber
        loss against the Bellman targets, backprop, elementwise clipping,
        one Adam step. The target net is never touched.
        """
        if not batch:
            raise InsufficientDataError("cannot optimize on an empty batch")
        n = len(batch)
        states = np.stack([t.state for t in batch])
        actions = np.array([t.action for t in batch], dtype=np.intp)
        if actions.min() < 0 or actions.max() >= self.n_actions:
            raise ShapeError("batch contains an out-of-range action index")

        q, cache = self.policy_net.forward(states, train=True, rng=rng)
        pred = np.ascontiguousarray(q[np.arange(n), actions])
        targets = self.compute_targets(batch)
        losses, dpred = K.huber_elementwise(pred, targets, self.hp.huber_delta)
        mean_loss = float(losses.mean())

        dq = np.zeros_like(q)
        dq[np.arange(n), actions] = dpred / n
        grads = self.policy_net.backward(cache, dq)
        grads = clip_gradients(grads, self.hp.clip_limit)
        self.optimizer.step(self.policy_net, grads)
        return mean_loss

    def soft_update(self) -> None:
        """target <- tau*policy + (1-tau)*target across all parameters."""
        for tp, pp in zip(self.target_net.parameters(), self.policy_net.parameters()):
            K.polyak_update(tp.ravel(), pp.ravel(), self.hp.tau)
