"""Per-lag test reports and their table/JSON renderings."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TestRow:
    __test__ = False

    lag: int
    statistic: float
    df: float | None = None
    pvalue: float | None = None


@dataclass(frozen=True)
class TestReport:
    """Rows of ``(lag, statistic, df, p-value)``.

    ``mode`` is ``"Asymptotic"`` or ``"MonteCarlo"``; ``pvalue`` is ``None``
    where it is undefined (non-positive df).
    """

    __test__ = False

    method: str
    mode: str
    rows: tuple[TestRow, ...]
    nrep: int | None = None
    seed: int | None = None

    @property
    def lags(self) -> list[int]:
        return [r.lag for r in self.rows]

    @property
    def statistics(self) -> list[float]:
        return [r.statistic for r in self.rows]

    @property
    def pvalues(self) -> list[float | None]:
        return [r.pvalue for r in self.rows]

    @property
    def dfs(self) -> list[float | None]:
        return [r.df for r in self.rows]

    def to_dict(self) -> dict:
        out: dict = {"method": self.method, "mode": self.mode}
        if self.nrep is not None:
            out["nrep"] = self.nrep
        if self.seed is not None:
            out["seed"] = self.seed
        rows = []
        for r in self.rows:
            row: dict = {"lag": r.lag, "statistic": r.statistic}
            if self.mode == "Asymptotic":
                row["df"] = r.df
            row["pvalue"] = r.pvalue
            rows.append(row)
        out["rows"] = rows
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def format_table(self) -> str:
        show_df = self.mode == "Asymptotic"
        header = f"{'lags':>5} {'statistic':>14}"
        if show_df:
            header += f" {'df':>12}"
        header += f" {'p-value':>12}"
        lines = [header]
        for r in self.rows:
            line = f"{r.lag:>5} {_num(r.statistic, 6):>14}"
            if show_df:
                line += f" {_num(r.df, 6):>12}"
            line += f" {_num(r.pvalue, 9):>12}"
            lines.append(line)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.format_table()


def _num(v: float | None, places: int) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "NA"
    return f"{v:.{places}f}"
