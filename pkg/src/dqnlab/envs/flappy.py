"""Headless Flappy Bird physics.

All geometry lives in a unit square: x grows rightward, y upward. The
bird hovers at a fixed x while pipes scroll left; passing a pipe's
right edge scores 1, touching a pipe or leaving [0, 1] vertically ends
the episode.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, EpisodeOverError

ACTION_FLAP = 0
ACTION_FALL = 1

BIRD_X = 0.2

OBS_MODES = ("extended", "minimal")


@dataclass(frozen=True)
class FlappyConfig:
    """Physics constants and episode rules; all tunable."""

    gravity: float = -0.004
    flap_impulse: float = 0.04
    scroll_speed: float = 0.02
    pipe_gap: float = 0.30
    pipe_width: float = 0.10
    pipe_spacing: float = 0.50
    gap_center_range: tuple[float, float] = (0.2, 0.8)
    max_steps: int = 10_000
    obs_mode: str = "extended"  # "minimal" observes bird altitude only

    def __post_init__(self):
        lo, hi = self.gap_center_range
        checks = [
            ("gravity", self.gravity < 0.0, "must be < 0"),
            ("flap_impulse", self.flap_impulse > 0.0, "must be > 0"),
            ("scroll_speed", 0.0 < self.scroll_speed < 1.0, "must be in (0, 1)"),
            ("pipe_gap", 0.0 < self.pipe_gap < 1.0, "must be in (0, 1)"),
            ("pipe_width", 0.0 < self.pipe_width < 1.0, "must be in (0, 1)"),
            ("pipe_spacing", self.pipe_spacing > self.pipe_width, "must exceed pipe_width"),
            ("gap_center_range", 0.0 < lo <= hi < 1.0, "must satisfy 0 < lo <= hi < 1"),
            (
                "gap_center_range",
                lo - self.pipe_gap / 2 >= 0.0 and hi + self.pipe_gap / 2 <= 1.0,
                "must leave the whole gap inside [0, 1]",
            ),
            ("max_steps", self.max_steps >= 1, "must be >= 1"),
            ("obs_mode", self.obs_mode in OBS_MODES, f"must be one of {OBS_MODES}"),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ConfigError(f"{name} {msg}, got {getattr(self, name)}")


@dataclass
class Pipe:
    x_left: float
    gap_center: float
    passed: bool = False


@dataclass
class FlappyState:
    bird_y: float
    bird_vy: float
    pipes: list[Pipe]
    step_count: int = 0
    score: int = 0


class FlappyEnv:
    """Deterministic-given-seed simulation with 2 actions: 0 flap, 1 fall."""

    def __init__(self, cfg: FlappyConfig | None = None, seed=None, record: bool = False):
        self.cfg = cfg if cfg is not None else FlappyConfig()
        self.rng = np.random.default_rng(seed)
        self.record = record
        self.trajectory: list[tuple] = []
        self.state: FlappyState | None = None
        self._done = True

    @property
    def n_actions(self) -> int:
        return 2

    @property
    def observation_dim(self) -> int:
        return 4 if self.cfg.obs_mode == "extended" else 1

    def _spawn_pipe(self, x_left: float) -> Pipe:
        lo, hi = self.cfg.gap_center_range
        return Pipe(x_left, float(self.rng.uniform(lo, hi)))

    def _top_up_pipes(self, pipes: list[Pipe]) -> None:
        # keep pipes covering the screen plus one spacing of lookahead
        while not pipes or pipes[-1].x_left < 1.0 + self.cfg.pipe_spacing:
            nxt = 1.0 if not pipes else pipes[-1].x_left + self.cfg.pipe_spacing
            pipes.append(self._spawn_pipe(nxt))

    def reset(self, seed=None) -> np.ndarray:
        if seed is not None:
            self.rng = np.random.default_rng(seed)
        pipes: list[Pipe] = []
        self._top_up_pipes(pipes)
        self.state = FlappyState(bird_y=0.5, bird_vy=0.0, pipes=pipes)
        self._done = False
        self.trajectory = []
        return self.observe()

    def observe(self) -> np.ndarray:
        """Current observation vector per the configured mode."""
        s = self.state
        if self.cfg.obs_mode == "minimal":
            return np.array([s.bird_y])
        nxt = next(p for p in s.pipes if not p.passed)
        return np.array([s.bird_y, s.bird_vy, nxt.x_left - BIRD_X, nxt.gap_center])

    def _collided(self, s: FlappyState) -> bool:
        half_gap = self.cfg.pipe_gap / 2
        for p in s.pipes:
            if p.x_left <= BIRD_X <= p.x_left + self.cfg.pipe_width:
                if abs(s.bird_y - p.gap_center) > half_gap:
                    return True
        return False

    def step(self, action: int):
        """Advance one tick; returns (observation, reward, done)."""
        if self._done:
            raise EpisodeOverError("episode is over; call reset()")
        if action not in (ACTION_FLAP, ACTION_FALL):
            raise ConfigError(f"action must be 0 (flap) or 1 (fall), got {action}")
        cfg = self.cfg
        s = self.state

        if action == ACTION_FLAP:
            s.bird_vy = cfg.flap_impulse
        s.bird_vy += cfg.gravity
        s.bird_y += s.bird_vy

        for p in s.pipes:
            p.x_left -= cfg.scroll_speed
        while s.pipes and s.pipes[0].x_left + cfg.pipe_width < 0.0:
            s.pipes.pop(0)
        self._top_up_pipes(s.pipes)

        s.step_count += 1
        dead = not 0.0 <= s.bird_y <= 1.0 or self._collided(s)
        reward = 0.0
        if not dead:
            for p in s.pipes:
                if not p.passed and p.x_left + cfg.pipe_width < BIRD_X:
                    p.passed = True
                    reward += 1.0
                    s.score += 1
        done = dead or s.step_count >= cfg.max_steps
        self._done = done
        if self.record:
            self.trajectory.append(
                (s.step_count, s.bird_y, s.bird_vy, action, reward, int(done))
            )
        return self.observe(), reward, done

    def save_trajectory(self, path) -> None:
        """Dump the recorded episode as CSV."""
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["step", "bird_y", "bird_vy", "action", "reward", "done"])
            for row in self.trajectory:
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
