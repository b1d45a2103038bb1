"""Rank-based AUCROC, Welch's t-test with a continued-fraction incomplete
beta, and multi-trial aggregation of audit metrics.

The t-distribution tail is evaluated through the regularized incomplete beta
function computed by modified Lentz continued fractions, accurate to well
below 1e-10 absolute, so p-values reproduce bit-for-bit across platforms
without lookup tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

METRIC_NAMES = (
    "tpr_high",
    "tpr_low",
    "tpr_overall",
    "fpr_high",
    "fpr_low",
    "fpr_overall",
    "auc_high",
    "auc_low",
    "auc_overall",
)

DELTA_METRICS = ("tpr", "fpr", "auc")

CONDITION_BASELINE = "baseline"
CONDITION_DEBIASED = "debiased"


@dataclass(frozen=True)
class TrialMetrics:
    condition: str
    seed: int
    tpr_high: float
    tpr_low: float
    tpr_overall: float
    fpr_high: float
    fpr_low: float
    fpr_overall: float
    auc_high: float
    auc_low: float
    auc_overall: float

    def metric(self, name: str) -> float:
        return float(getattr(self, name))

    def delta(self, metric: str) -> float:
        return self.metric(f"{metric}_high") - self.metric(f"{metric}_low")


@dataclass(frozen=True)
class SignificanceResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    sided: str
    alpha: float
    significant: bool


def auc_roc(labels, scores) -> float:
    """Mann-Whitney AUC: the fraction of (positive, negative) pairs ranked
    correctly, with half credit for tied scores.
    """
    y = np.asarray(labels, dtype=np.int64)
    s = np.asarray(scores, dtype=np.float64)
    if y.shape != s.shape:
        raise ValueError("labels and scores must have equal length")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative label")

    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s), dtype=np.float64)
    ranks[order] = np.arange(1, len(s) + 1, dtype=np.float64)
    # average ranks within tied score groups
    _, inverse, counts = np.unique(s, return_inverse=True, return_counts=True)
    tie_means = np.bincount(inverse, weights=ranks) / counts
    ranks = tie_means[inverse]

    pos_rank_sum = float(ranks[y == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _beta_cont_frac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) to ~1e-15 relative accuracy."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_frac(a, b, x) / a
    return 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b


def student_t_tail(t: float, df: float) -> float:
    """P(T >= t) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    x = df / (df + t * t)
    half_two_sided = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return half_two_sided if t >= 0 else 1.0 - half_two_sided


def _p_value(t: float, df: float, sided: str) -> float:
    if sided == "one":
        return student_t_tail(t, df)
    if sided == "two":
        return 2.0 * student_t_tail(abs(t), df)
    raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")


def welch_t_test(sample_a, sample_b, sided: str = "two", alpha: float = 0.05) -> SignificanceResult:
    """Unequal-variance t-test with Welch-Satterthwaite degrees of freedom.

    One-sided tests the alternative mean(a) > mean(b): small p means a is
    significantly larger.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs size >= 2")
    va = float(a.var(ddof=1))
    vb = float(b.var(ddof=1))
    if va == 0.0 and vb == 0.0:
        raise ValueError("degenerate samples: both inputs have zero variance")
    sa, sb = va / len(a), vb / len(b)
    t = (float(a.mean()) - float(b.mean())) / math.sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa**2 / (len(a) - 1) + sb**2 / (len(b) - 1))
    p = _p_value(t, df, sided)
    return SignificanceResult(
        t_statistic=t,
        degrees_of_freedom=df,
        p_value=p,
        sided=sided,
        alpha=alpha,
        significant=p < alpha,
    )


def paired_t_test(sample_a, sample_b, sided: str = "two", alpha: float = 0.05) -> SignificanceResult:
    """Paired t-test on elementwise differences (a - b); one-sided tests
    mean(a) > mean(b).
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("paired samples must have equal length")
    if len(a) < 2:
        raise ValueError("paired test needs size >= 2")
    d = a - b
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        raise ValueError("degenerate samples: zero-variance differences")
    n = len(d)
    t = float(d.mean()) / (sd / math.sqrt(n))
    df = float(n - 1)
    p = _p_value(t, df, sided)
    return SignificanceResult(
        t_statistic=t,
        degrees_of_freedom=df,
        p_value=p,
        sided=sided,
        alpha=alpha,
        significant=p < alpha,
    )


@dataclass(frozen=True)
class AggregateResult:
    """Per-condition means, per-trial group deltas, and the significance
    battery over a multi-trial audit.
    """

    condition_means: dict
    delta_means: dict
    per_trial_deltas: dict
    group_disparity: dict
    delta_reduction_paired: dict
    delta_reduction_welch: dict
    overall_auc_change: SignificanceResult | None


def _try(test, *args, **kwargs):
    try:
        return test(*args, **kwargs)
    except ValueError:
        return None  # degenerate samples reported as n/a


def aggregate_trials(trials, alpha: float = 0.05) -> AggregateResult:
    """Average every metric per condition and test the disparities.

    Conditions must share seeds trial-for-trial; the baseline-vs-debiased
    comparisons are paired on those seeds (an unpaired Welch variant is
    emitted alongside).
    """
    by_condition: dict[str, list[TrialMetrics]] = {CONDITION_BASELINE: [], CONDITION_DEBIASED: []}
    for t in trials:
        if t.condition not in by_condition:
            raise ValueError(f"unknown condition {t.condition!r}")
        by_condition[t.condition].append(t)

    for cond, rows in by_condition.items():
        if len(rows) < 2:
            raise ValueError(f"need >= 2 trials per condition, got {len(rows)} for {cond!r}")
    baseline = by_condition[CONDITION_BASELINE]
    debiased_by_seed = {t.seed: t for t in by_condition[CONDITION_DEBIASED]}
    if sorted(debiased_by_seed) != sorted(t.seed for t in baseline):
        raise ValueError("mismatched seeds across conditions")
    debiased = [debiased_by_seed[t.seed] for t in baseline]

    condition_means = {
        cond: {name: float(np.mean([t.metric(name) for t in rows])) for name in METRIC_NAMES}
        for cond, rows in ((CONDITION_BASELINE, baseline), (CONDITION_DEBIASED, debiased))
    }
    per_trial_deltas = {
        cond: {m: [t.delta(m) for t in rows] for m in DELTA_METRICS}
        for cond, rows in ((CONDITION_BASELINE, baseline), (CONDITION_DEBIASED, debiased))
    }
    delta_means = {
        cond: {m: float(np.mean(v)) for m, v in deltas.items()}
        for cond, deltas in per_trial_deltas.items()
    }

    group_disparity = {}
    for cond, rows in ((CONDITION_BASELINE, baseline), (CONDITION_DEBIASED, debiased)):
        group_disparity[cond] = {
            m: _try(
                welch_t_test,
                [t.metric(f"{m}_high") for t in rows],
                [t.metric(f"{m}_low") for t in rows],
                sided="one",
                alpha=alpha,
            )
            for m in DELTA_METRICS
        }

    delta_reduction_paired = {
        m: _try(
            paired_t_test,
            per_trial_deltas[CONDITION_BASELINE][m],
            per_trial_deltas[CONDITION_DEBIASED][m],
            sided="one",
            alpha=alpha,
        )
        for m in DELTA_METRICS
    }
    delta_reduction_welch = {
        m: _try(
            welch_t_test,
            per_trial_deltas[CONDITION_BASELINE][m],
            per_trial_deltas[CONDITION_DEBIASED][m],
            sided="one",
            alpha=alpha,
        )
        for m in DELTA_METRICS
    }
    overall_auc_change = _try(
        paired_t_test,
        [t.auc_overall for t in baseline],
        [t.auc_overall for t in debiased],
        sided="two",
        alpha=alpha,
    )

    return AggregateResult(
        condition_means=condition_means,
        delta_means=delta_means,
        per_trial_deltas=per_trial_deltas,
        group_disparity=group_disparity,
        delta_reduction_paired=delta_reduction_paired,
        delta_reduction_welch=delta_reduction_welch,
        overall_auc_change=overall_auc_change,
    )
