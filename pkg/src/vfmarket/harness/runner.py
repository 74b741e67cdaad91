"""Running scenarios and summarising their output."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..fol import canonical_code
from ..market.engine import MarketState
from ..market.exploit import detect_exploitation
from ..market.schedule import frac
from .config import ScenarioConfig


@dataclass(frozen=True)
class ConvergenceReport:
    amplitude: Fraction
    last: Fraction
    window_len: int


def convergence_report(series: Sequence, window=Fraction(1, 4)) -> ConvergenceReport:
    """Max minus min over the trailing ``window`` fraction of ``series``."""
    values = [frac(v[1] if isinstance(v, tuple) else v) for v in series]
    if not values:
        raise ValueError("series is empty")
    window = frac(window)
    if not 0 < window <= 1:
        raise ValueError("window must lie in (0, 1]")
    n = max(1, math.ceil(len(values) * window))
    tail = values[-n:]
    return ConvergenceReport(max(tail) - min(tail), values[-1], n)


@dataclass
class RunResult:
    config: ScenarioConfig
    state: MarketState
    conservation: list[tuple[int, Fraction, Fraction]] = field(default_factory=list)
    cash_series: dict[int, list[Fraction]] = field(default_factory=dict)
    injected_series: list[Fraction] = field(default_factory=list)

    @property
    def conserved(self) -> bool:
        return all(lhs == rhs for _, lhs, rhs in self.conservation)

    @property
    def max_cash_within_injected(self) -> bool:
        return all(c <= inj for series in self.cash_series.values()
                   for c, inj in zip(series, self.injected_series))

    def price_csv(self) -> str:
        return "\n".join(self.state.price_rows()) + "\n"

    def audit_log(self) -> str:
        return "".join(line + "\n" for line in self.state.audit)

    def ledger_dump(self) -> str:
        return "".join(line + "\n" for line in self.state.ledger_dump())

    def series(self, sentence) -> list[tuple[int, Fraction]]:
        return list(self.state.history.get(sentence, []))

    def report(self) -> dict:
        st = self.state
        sentences = {}
        for m in st.universe:
            conv = convergence_report(st.history[m], self.config.window)
            sentences[str(m)] = {
                "code": canonical_code(m),
                "final_price": _fs(conv.last),
                "amplitude": _fs(conv.amplitude),
                "window": conv.window_len,
            }
        agents = {}
        for a in st.agents:
            series = self.cash_series.get(a.id, [])
            rep = detect_exploitation(series or [a.cash], floor=0, growth=st.injected)
            agents[a.name] = {
                "id": a.id,
                "final_cash": _fs(a.cash),
                "min_cash": _fs(rep.minimum),
                "max_cash": _fs(rep.maximum),
                "exploitation_flag": rep.flagged,
            }
        return {
            "scenario": self.config.name,
            "steps": st.t,
            "injected": _fs(st.injected),
            "escrow": _fs(st.ledger.total_escrow()),
            "open_pairs": len(st.ledger),
            "conservation_ok": self.conserved,
            "max_cash_within_injected": self.max_cash_within_injected,
            "sentences": sentences,
            "agents": agents,
        }

    def write(self, outdir) -> Path:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "prices.csv").write_text(self.price_csv(), encoding="utf-8")
        (out / "audit.log").write_text(self.audit_log(), encoding="utf-8")
        (out / "ledger.txt").write_text(self.ledger_dump(), encoding="utf-8")
        (out / "report.json").write_text(json.dumps(self.report(), indent=2) + "\n", encoding="utf-8")
        return out


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def run_scenario(config: ScenarioConfig, horizon: int | None = None) -> RunResult:
    """Drive the market for the configured horizon, tracking conservation every step."""
    state = MarketState.create(config.universe, config.agents, config.reality)
    result = RunResult(config, state)
    for _ in range(config.horizon if horizon is None else horizon):
        state.step()
        cash = sum((a.cash for a in state.agents), Fraction(0))
        result.conservation.append((state.t - 1, cash + state.ledger.total_escrow(), state.injected))
        for a in state.agents:
            result.cash_series.setdefault(a.id, []).append(a.cash)
        result.injected_series.append(state.injected)
    return result
