"""Simulation environments: headless Flappy Bird and a trading account."""

from .flappy import FlappyConfig, FlappyEnv, FlappyState, Pipe
from .trading import (
    AccountState,
    StepRecord,
    TradingConfig,
    TradingEnv,
    decode_action,
    execute_trade,
    write_step_log,
)

__all__ = [
    "FlappyConfig",
    "FlappyEnv",
    "FlappyState",
    "Pipe",
    "AccountState",
    "StepRecord",
    "TradingConfig",
    "TradingEnv",
    "decode_action",
    "execute_trade",
    "write_step_log",
]
