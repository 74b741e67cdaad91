"""Prediction market over sentences with escrowed share pairs."""
from .engine import (
    BOT,
    STAR,
    TOP,
    Agent,
    AgentSpec,
    Context,
    FuelExhausted,
    FuelMeter,
    FuelPolicy,
    InvariantBreach,
    MarketState,
    MarketView,
    pass_player,
    replay_audit,
    step,
    whole_labeler,
)
from .exploit import ExploitReport, detect_exploitation
from .ledger import Ledger, Pair, Side
from .partition import LabeledPartition, PartitionError
from .reality import ArithmeticReality, RealityError, ScriptedReality
from .schedule import DemandSchedule, aggregate, budget_check, equilibrium_price, excess

__all__ = [
    "Agent", "AgentSpec", "ArithmeticReality", "BOT", "Context", "DemandSchedule",
    "ExploitReport", "FuelExhausted", "FuelMeter", "FuelPolicy", "InvariantBreach",
    "LabeledPartition", "Ledger", "MarketState", "MarketView", "Pair", "PartitionError",
    "RealityError", "STAR", "ScriptedReality", "Side", "TOP", "aggregate", "budget_check",
    "detect_exploitation", "equilibrium_price", "excess", "pass_player", "replay_audit",
    "step", "whole_labeler",
]
