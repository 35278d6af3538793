"""Bounded FIFO experience memory with uniform batch sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientDataError, ShapeError


@dataclass(frozen=True)
class Transition:
    """One (state, action, next_state, reward, done) experience.

    next_state is None exactly when the transition is terminal.
    """

    state: np.ndarray
    action: int
    next_state: np.ndarray | None
    reward: float
    done: bool

    def __post_init__(self):
        if self.done != (self.next_state is None):
            raise ValueError("next_state must be absent exactly when done is true")


class ReplayMemory:
    """Ring buffer of transitions; pushes beyond capacity evict the oldest."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ConfigError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._buf: list[Transition] = []
        self._write = 0
        self.pushes = 0

    def __len__(self) -> int:
        return len(self._buf)

    def __iter__(self):
        """Surviving transitions in insertion order."""
        if len(self._buf) < self.capacity:
            yield from self._buf
        else:
            yield from self._buf[self._write :]
            yield from self._buf[: self._write]

    def push(self, t: Transition) -> None:
        dim = len(t.state)
        if self._buf and dim != self._state_dim:
            raise ShapeError(f"expected state length {self._state_dim}, got {dim}")
        if t.next_state is not None and len(t.next_state) != dim:
            raise ShapeError(
                f"next_state length {len(t.next_state)} != state length {dim}"
            )
        if not self._buf:
            self._state_dim = dim
        if len(self._buf) < self.capacity:
            self._buf.append(t)
        else:
            self._buf[self._write] = t
            self._write = (self._write + 1) % self.capacity
        self.pushes += 1

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        """batch_size distinct transitions drawn uniformly."""
        if batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {batch_size}")
        if len(self._buf) < batch_size:
            raise InsufficientDataError(
                f"memory holds {len(self._buf)} transitions, need {batch_size}"
            )
        idx = rng.choice(len(self._buf), size=batch_size, replace=False)
        return [self._buf[i] for i in idx]
