"""The level/changes/lagged/ARIMA diagnostic battery for one predictor.

Every stage runs on the same aligned data. A stage that fails numerically
records its error in ``stage_errors`` and leaves its fields as None; the
rest of the report is still produced.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .core import Series, align, difference
from .errors import SpuriousTSError
from .regress import fit_lagged_dv, fit_ols
from .select import auto_arima
from .stats import durbin_watson, partial_correlation, pearson

__all__ = [
    "VerdictPolicy",
    "DiagnosticReport",
    "diagnose",
    "verdict",
    "format_table",
    "CONSISTENT",
    "SPURIOUS_SUSPECT",
]

CONSISTENT = "consistent"
SPURIOUS_SUSPECT = "spurious-suspect"


@dataclass(frozen=True)
class VerdictPolicy:
    """Thresholds of the verdict rule. Toolkit policy, not statistical law."""

    level_alpha: float = 0.01
    change_alpha: float = 0.05
    dw_threshold: float = 1.0


@dataclass
class DiagnosticReport:
    predictor: str
    n: int
    start: int
    end: int
    covariates: list[str] = field(default_factory=list)
    # simple regression in levels
    level_r: float | None = None
    level_p: float | None = None
    level_dw: float | None = None
    # multiple regression in levels (only with covariates)
    multi_r: float | None = None
    multi_p: float | None = None
    multi_dw: float | None = None
    # simple regression in first differences
    diff_r: float | None = None
    diff_p: float | None = None
    # levels with lagged outcome (and covariates, if any)
    lagged_r: float | None = None
    lagged_p: float | None = None
    # automatically selected regression with ARIMA errors
    arima_order: tuple[int, int, int] | None = None
    arima_beta: float | None = None
    arima_se: float | None = None
    arima_p: float | None = None
    verdict: str = CONSISTENT
    stage_errors: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.arima_order is not None:
            out["arima_order"] = list(self.arima_order)
        for key, value in out.items():
            if isinstance(value, float) and not math.isfinite(value):
                out[key] = None
        return out


def verdict(report: DiagnosticReport, policy: VerdictPolicy = VerdictPolicy()) -> str:
    """Classify a report from its recorded fields alone.

    Spurious-suspect when the levels residuals have Durbin-Watson below
    ``policy.dw_threshold``, or when the level correlation is significant at
    ``policy.level_alpha`` while both the changes model and the lagged
    model have P >= ``policy.change_alpha``. Missing stages never satisfy a
    condition.
    """
    if report.level_dw is not None and report.level_dw < policy.dw_threshold:
        return SPURIOUS_SUSPECT
    if (report.level_p is not None and report.level_p < policy.level_alpha
            and report.diff_p is not None and report.diff_p >= policy.change_alpha
            and report.lagged_p is not None and report.lagged_p >= policy.change_alpha):
        return SPURIOUS_SUSPECT
    return CONSISTENT


def diagnose(
    outcome: Series,
    predictor: Series,
    covariates: Sequence[tuple[str, Series]] | None = None,
    predictor_name: str = "predictor",
    policy: VerdictPolicy = VerdictPolicy(),
    max_p: int = 5,
    max_q: int = 5,
    run_arima: bool = True,
) -> DiagnosticReport:
    """Run the full battery of ``outcome`` on ``predictor``."""
    covariates = list(covariates or [])
    frame = align(outcome, [(predictor_name, predictor)] + covariates)
    y = frame.outcome
    x = frame.predictor(predictor_name)
    simple = align(y, [(predictor_name, x)])
    report = DiagnosticReport(
        predictor=predictor_name, n=frame.n, start=int(frame.times[0]),
        end=int(frame.times[-1]), covariates=[name for name, _ in covariates],
    )

    def stage(name, fn):
        try:
            fn()
        except SpuriousTSError as exc:
            report.stage_errors[name] = f"{type(exc).__name__}: {exc}"

    def levels():
        corr = pearson(x, y)
        report.level_r, report.level_p = corr.r, corr.p_value
        report.level_dw = durbin_watson(fit_ols(simple).residuals)

    def multiple():
        fit = fit_ols(frame)
        pc = partial_correlation(fit, predictor_name)
        report.multi_r, report.multi_p = pc.r, pc.p_value
        report.multi_dw = durbin_watson(fit.residuals)

    def changes():
        corr = pearson(difference(x, 1), difference(y, 1))
        report.diff_r, report.diff_p = corr.r, corr.p_value

    def lagged():
        pc = partial_correlation(fit_lagged_dv(frame), predictor_name)
        report.lagged_r, report.lagged_p = pc.r, pc.p_value

    def arima():
        trace = auto_arima(y, [(predictor_name, x)], max_p=max_p, max_q=max_q)
        fit = trace.chosen_fit
        beta, se, _, p = fit.coef(predictor_name)
        report.arima_order = tuple(trace.chosen)
        report.arima_beta, report.arima_se, report.arima_p = beta, se, p

    stage("levels", levels)
    if covariates:
        stage("multiple", multiple)
    stage("changes", changes)
    stage("lagged", lagged)
    if run_arima:
        stage("arima", arima)
    report.verdict = verdict(report, policy)
    return report


def _num(v, digits=2) -> str:
    if v is None:
        return "-"
    return f"{v:.{digits}f}"


def _pval(v) -> str:
    if v is None:
        return "-"
    return "< 0.001" if v < 0.001 else f"{v:.2f}"


def format_table(reports: Sequence[DiagnosticReport]) -> str:
    """Fixed-width text table, one row per report, two decimals."""
    header = ["Predictor", "r", "P", "d", "r'", "P", "d",
              "r(diff)", "P", "r'(lag)", "P", "ARIMA", "beta", "P", "verdict"]
    rows = []
    for rep in reports:
        order = "-" if rep.arima_order is None else "({},{},{})".format(*rep.arima_order)
        beta = "-" if rep.arima_beta is None else f"{rep.arima_beta:.4g}"
        rows.append([
            rep.predictor,
            _num(rep.level_r), _pval(rep.level_p), _num(rep.level_dw),
            _num(rep.multi_r), _pval(rep.multi_p), _num(rep.multi_dw),
            _num(rep.diff_r), _pval(rep.diff_p),
            _num(rep.lagged_r), _pval(rep.lagged_p),
            order, beta, _pval(rep.arima_p), rep.verdict,
        ])
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).rjust(w) if i else str(c).ljust(w)
                       for i, (c, w) in enumerate(zip(line, widths)))
             for line in [header] + rows]
    lines.insert(1, "-" * len(lines[0]))
    notes = [f"  [{rep.predictor}] {stage}: {msg}"
             for rep in reports for stage, msg in rep.stage_errors.items()]
    if notes:
        lines += ["", "stage errors:"] + notes
    return "\n".join(lines)
