"""Corpus ingestion, synthetic corpus generation, the multi-trial audit
experiment, and report emission.

The experiment builds the interaction graph and extracts features exactly
once, then runs seeded independent trials: split, rebalance, train, score,
group by centrality median, audit, fit the equalized-odds post-processor,
and audit again. Trials may run serially or across processes; results are
identical either way because every trial owns a seed stream derived from
(master_seed, trial_index) and shared inputs are immutable.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fairness import (
    GROUP_HIGH,
    GROUP_LOW,
    apply_mixing,
    assign_groups,
    fit_equalized_odds,
    group_rates,
)
from .features import (
    assemble_instance,
    default_lexicon,
    default_smiley_patterns,
    extract_social_features,
    extract_text_features,
    load_lexicon,
    load_smiley_patterns,
)
from .graph import build_graph, load_edge_list
from .model import predict_scores, threshold_labels, train_dagging
from .sampling import Dataset, SplitConfig, shuffle_split, smote_balance
from .stats import (
    CONDITION_BASELINE,
    CONDITION_DEBIASED,
    DELTA_METRICS,
    METRIC_NAMES,
    TrialMetrics,
    aggregate_trials,
    auc_roc,
)

MESSAGE_FIELDS = ("message_id", "sender", "recipient", "text", "label")

FAILED_TRIAL_BUDGET = 0.10


class ExperimentAborted(RuntimeError):
    """Raised when too many trials fail to trust the aggregates."""


@dataclass(frozen=True)
class MessageRecord:
    message_id: str
    sender: str
    recipient: str
    text: str
    label: int


@dataclass(frozen=True)
class SyntheticConfig:
    node_count: int = 500
    message_count: int = 5000
    positive_rate: float = 0.02
    bias_strength: float = 0.8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.node_count < 10:
            raise ValueError(f"node_count must be >= 10, got {self.node_count}")
        if self.message_count < 10:
            raise ValueError(f"message_count must be >= 10, got {self.message_count}")
        if not 0.0 < self.positive_rate < 0.5:
            raise ValueError(f"positive_rate must be in (0, 0.5), got {self.positive_rate}")
        if self.bias_strength < 0.0:
            raise ValueError(f"bias_strength must be >= 0, got {self.bias_strength}")


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int
    trials: int = 100
    train_fraction: float = 0.7
    smote_k: int = 5
    undersample_fraction: float = 0.0
    fold_count: int = 10
    threshold: float = 0.5
    alpha: float = 0.05
    input_path: str | None = None
    synthetic: SyntheticConfig | None = None
    lexicon_path: str | None = None
    smiley_path: str | None = None
    edge_list_path: str | None = None
    global_median: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 2:
            raise ValueError(f"trials must be >= 2, got {self.trials}")
        if (self.input_path is None) == (self.synthetic is None):
            raise ValueError("exactly one of input_path or synthetic must be set")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass
class AuditReport:
    config: dict
    trials: list
    baseline_table: dict
    proposed_table: dict
    delta_table: dict
    significance: dict
    overall_auc: dict
    diagnostics: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "trials": self.trials,
            "baseline_table": self.baseline_table,
            "proposed_table": self.proposed_table,
            "delta_table": self.delta_table,
            "significance": self.significance,
            "overall_auc": self.overall_auc,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AuditReport":
        return cls(
            config=doc["config"],
            trials=doc["trials"],
            baseline_table=doc["baseline_table"],
            proposed_table=doc["proposed_table"],
            delta_table=doc["delta_table"],
            significance=doc["significance"],
            overall_auc=doc["overall_auc"],
            diagnostics=doc["diagnostics"],
        )


def load_messages(path: str | Path) -> list[MessageRecord]:
    """Parse the tab-separated corpus: one record per line, fields in the
    fixed order message_id, sender, recipient, text, label. A header line is
    rejected.
    """
    text = Path(path).read_text(encoding="utf-8")
    records: list[MessageRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        parts = line.split("\t")
        if lineno == 1 and tuple(parts) == MESSAGE_FIELDS:
            raise ValueError("line 1: header line rejected; files carry records only")
        if len(parts) < len(MESSAGE_FIELDS):
            missing = MESSAGE_FIELDS[len(parts)]
            raise ValueError(f"line {lineno}: missing field '{missing}'")
        if len(parts) > len(MESSAGE_FIELDS):
            raise ValueError(
                f"line {lineno}: expected {len(MESSAGE_FIELDS)} fields, got {len(parts)}"
            )
        message_id, sender, recipient, body, label_raw = parts
        for name, value in zip(MESSAGE_FIELDS[:3], (message_id, sender, recipient)):
            if not value:
                raise ValueError(f"line {lineno}: empty field '{name}'")
        if label_raw not in ("0", "1"):
            raise ValueError(
                f"message {message_id!r}: label must be 0 or 1, got {label_raw!r}"
            )
        if sender == recipient:
            raise ValueError(f"message {message_id!r}: sender equals recipient")
        records.append(
            MessageRecord(
                message_id=message_id,
                sender=sender,
                recipient=recipient,
                text=body,
                label=int(label_raw),
            )
        )
    return records


def write_messages(records, path: str | Path) -> Path:
    lines = []
    for r in records:
        fields = (r.message_id, r.sender, r.recipient, r.text, str(r.label))
        for value in fields:
            if "\t" in value or "\n" in value:
                raise ValueError(
                    f"message {r.message_id!r}: fields may not contain tabs or newlines"
                )
        lines.append("\t".join(fields))
    out = Path(path)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


# --- synthetic corpus -------------------------------------------------------

_NEUTRAL_TEXTS = (
    "hey how are you doing",
    "are we still meeting later ?",
    "nice game today :)",
    "can you send me the homework notes",
    "happy birthday !!",
    "that movie was so funny lol",
    "see you at practice tomorrow",
    "thanks for the help yesterday",
    "good luck on the test",
    "did you watch the match last night",
    "let me know when you get home",
    "the new episode comes out friday",
)

_BLATANT_BULLY_TEXTS = (
    "you are such a {w0} {w1}",
    "shut up you {w0} {w1}",
    "everyone knows you are a {w0}",
    "you {w0} nobody likes you",
    "get lost you {w0} {w1}",
    "you are a {w0} and a {w1}",
)

_BANTER_TEXTS = (
    "haha you {w0} {w1} that was a crazy play !!",
    "you lucky {w0} {w1} what a shot !!",
    "that was {w0} {w1} good haha !!",
)

# injected insults; all of these live in the bundled lexicon
_INJECT_WORDS = (
    "stupid",
    "idiot",
    "loser",
    "dumb",
    "pathetic",
    "worthless",
    "ugly",
    "freak",
    "moron",
    "jerk",
)

# P(blatant | bullying) and P(banter | clean) as base + slope * centrality_rank
_BLATANCY_PROFILE = (0.70, 0.28)
_BANTER_PROFILE = (0.0, 0.012)


def _fill_template(template: str, rng: np.random.Generator) -> str:
    w0, w1 = (
        _INJECT_WORDS[int(rng.integers(len(_INJECT_WORDS)))],
        _INJECT_WORDS[int(rng.integers(len(_INJECT_WORDS)))],
    )
    return template.format(w0=w0, w1=w1)


def _tie_averaged_rank(values: np.ndarray) -> np.ndarray:
    """Normalized rank in [0, 1]; equal values share the same rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    ranks[order] = np.arange(len(values), dtype=np.float64)
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    means = np.bincount(inverse, weights=ranks) / counts
    averaged = means[inverse]
    top = max(len(values) - 1, 1)
    return averaged / top


def generate_synthetic(cfg: SyntheticConfig) -> list[MessageRecord]:
    """Deterministic desk-scale corpus over a preferential-attachment graph.

    Messages travel along graph edges. Bullying labels are drawn without
    replacement with weights exp(-bias_strength * centrality_rank(recipient)),
    so peripheral recipients attract more bullying as bias_strength grows,
    and the realized positive count equals round(positive_rate * messages).
    Bullying toward central recipients is textually blatant more often,
    which makes it easier to detect.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.node_count
    names = [f"u{i:04d}" for i in range(n)]

    # growth with 3 attachments per newcomer, degree-proportional targets
    edges: list[tuple[int, int]] = []
    known = set()
    deg = np.zeros(n)

    def add(a: int, b: int) -> None:
        if a != b and (a, b) not in known:
            known.add((a, b))
            edges.append((a, b))
            deg[a] += 1
            deg[b] += 1

    seed_size = 4
    for v in range(1, seed_size):
        add(v, v - 1)
    add(0, seed_size - 1)
    for v in range(seed_size, n):
        weights = deg[:v] + 1.0
        targets = rng.choice(v, size=min(3, v), replace=False, p=weights / weights.sum())
        for tgt in targets:
            if rng.random() < 0.5:
                add(v, int(tgt))
            else:
                add(int(tgt), v)

    outdeg = np.zeros(n)
    for a, _ in edges:
        outdeg[a] += 1
    centrality_rank = _tie_averaged_rank(outdeg)

    total = cfg.message_count
    edge_choice = rng.integers(0, len(edges), size=total)
    senders = np.array([edges[i][0] for i in edge_choice])
    recipients = np.array([edges[i][1] for i in edge_choice])

    positives = int(round(cfg.positive_rate * total))
    if positives < 1 or abs(positives / total - cfg.positive_rate) > 0.2 * cfg.positive_rate:
        raise ValueError(
            f"message_count {total} is too small to calibrate positive_rate "
            f"{cfg.positive_rate} within 20%"
        )
    label_weights = np.exp(-cfg.bias_strength * centrality_rank[recipients])
    if int((label_weights > 0).sum()) < positives:
        raise ValueError(
            f"bias_strength {cfg.bias_strength} is too extreme to reach the "
            f"target positive rate {cfg.positive_rate}"
        )
    labels = np.zeros(total, dtype=np.int64)
    pos_idx = rng.choice(total, size=positives, replace=False, p=label_weights / label_weights.sum())
    labels[pos_idx] = 1

    records = []
    for i in range(total):
        rank = float(centrality_rank[recipients[i]])
        if labels[i] == 1:
            # central recipients draw blatant abuse more often; non-overt
            # bullying is textually indistinguishable from ordinary chatter
            # at this feature granularity
            if rng.random() < _BLATANCY_PROFILE[0] + _BLATANCY_PROFILE[1] * rank:
                body = _fill_template(
                    _BLATANT_BULLY_TEXTS[int(rng.integers(len(_BLATANT_BULLY_TEXTS)))], rng
                )
                if rng.random() < 0.6:
                    body = body.upper()
                body += " !!"
            else:
                body = _NEUTRAL_TEXTS[int(rng.integers(len(_NEUTRAL_TEXTS)))]
        else:
            # rowdy-but-friendly banter, slightly more common toward central users
            if rng.random() < _BANTER_PROFILE[0] + _BANTER_PROFILE[1] * rank:
                body = _fill_template(
                    _BANTER_TEXTS[int(rng.integers(len(_BANTER_TEXTS)))], rng
                )
            else:
                body = _NEUTRAL_TEXTS[int(rng.integers(len(_NEUTRAL_TEXTS)))]
        records.append(
            MessageRecord(
                message_id=f"m{i:05d}",
                sender=names[int(senders[i])],
                recipient=names[int(recipients[i])],
                text=body,
                label=int(labels[i]),
            )
        )
    return records


# --- experiment -------------------------------------------------------------


def _extract_instances(records, lexicon, smileys, extra_edges):
    """Graph construction and feature extraction, both exactly once.

    Social features are cached per (sender, recipient) pair; the returned
    diagnostics record how many extractions actually ran.
    """
    edge_list = [(m.sender, m.recipient) for m in records]
    edge_list.extend(extra_edges)
    graph = build_graph(edge_list)

    social_cache = {}
    instances = []
    for m in records:
        key = (m.sender, m.recipient)
        if key not in social_cache:
            social_cache[key] = extract_social_features(graph, m.sender, m.recipient)
        text_features = extract_text_features(m.text, lexicon, smileys)
        instances.append(assemble_instance(social_cache[key], text_features, m.label, m.message_id))
    diagnostics = {
        "messages": len(records),
        "unique_sender_recipient_pairs": len(social_cache),
        "social_feature_extractions": len(social_cache),
        "positive_count": int(sum(m.label for m in records)),
        "self_loops_dropped": graph.self_loops_dropped,
    }
    return instances, diagnostics


def _trial_seeds(master_seed: int, trial_index: int) -> tuple[int, int, int, int]:
    """Documented mixing: a SeedSequence keyed by (master_seed, trial_index)
    yields the split, SMOTE, model, and mixing seeds for one trial.
    """
    ss = np.random.SeedSequence([int(master_seed), int(trial_index)])
    return tuple(int(v) for v in ss.generate_state(4, dtype=np.uint64))


def _pooled_rates(labels, preds) -> tuple[float, float]:
    tp = sum(1 for y, p in zip(labels, preds) if y == 1 and p == 1)
    fn = sum(1 for y, p in zip(labels, preds) if y == 1 and p == 0)
    fp = sum(1 for y, p in zip(labels, preds) if y == 0 and p == 1)
    tn = sum(1 for y, p in zip(labels, preds) if y == 0 and p == 0)
    tpr = tp / (tp + fn) if tp + fn else 0.0
    fpr = fp / (fp + tn) if fp + tn else 0.0
    return tpr, fpr


def _metrics_for(condition, seed, labels, preds, scores, groups) -> TrialMetrics:
    rates = group_rates(labels, preds, groups)
    tpr_overall, fpr_overall = _pooled_rates(labels, preds)
    values = {}
    for g in (GROUP_HIGH, GROUP_LOW):
        idx = [i for i, grp in enumerate(groups) if grp == g]
        values[f"auc_{g}"] = auc_roc([labels[i] for i in idx], [scores[i] for i in idx])
    return TrialMetrics(
        condition=condition,
        seed=seed,
        tpr_high=rates.high.tpr,
        tpr_low=rates.low.tpr,
        tpr_overall=tpr_overall,
        fpr_high=rates.high.fpr,
        fpr_low=rates.low.fpr,
        fpr_overall=fpr_overall,
        auc_high=values["auc_high"],
        auc_low=values["auc_low"],
        auc_overall=auc_roc(labels, scores),
    )


def _run_trial(state: dict, trial_index: int):
    """One audit round; returns (trial_index, [baseline, debiased], error)."""
    split_seed, smote_seed, model_seed, mix_seed = _trial_seeds(
        state["master_seed"], trial_index
    )
    dataset: Dataset = state["dataset"]
    try:
        train, test = shuffle_split(
            dataset, SplitConfig(train_fraction=state["train_fraction"], seed=split_seed)
        )
        balanced = smote_balance(
            train,
            k=state["smote_k"],
            undersample_fraction=state["undersample_fraction"],
            seed=smote_seed,
        )
        ensemble = train_dagging(balanced, fold_count=state["fold_count"], seed=model_seed)
        scores = predict_scores(ensemble, test.instances)
        if ensemble.n_features != len(dataset.instances[0].model_features):
            raise ValueError("model dimensionality drifted from the instance width")
        preds = threshold_labels(scores, state["threshold"])
        labels = [inst.label for inst in test.instances]

        if state["global_groups"] is not None:
            groups = [state["global_groups"][inst.message_id] for inst in test.instances]
            if GROUP_LOW not in groups or GROUP_HIGH not in groups:
                raise ValueError("a centrality group is empty in this test split")
        else:
            groups = list(assign_groups([inst.sensitive_value for inst in test.instances]).groups)

        baseline = _metrics_for(
            CONDITION_BASELINE, split_seed, labels, [int(p) for p in preds], list(scores), groups
        )

        rates = group_rates(labels, [int(p) for p in preds], groups)
        mixing, _derived = fit_equalized_odds(rates)
        debiased_preds = apply_mixing(preds, groups, mixing, mode="sampled", seed=mix_seed)
        debiased_scores = apply_mixing(preds, groups, mixing, mode="expectation")
        debiased = _metrics_for(
            CONDITION_DEBIASED,
            split_seed,
            labels,
            [int(p) for p in debiased_preds],
            list(debiased_scores),
            groups,
        )
        return trial_index, [baseline, debiased], None
    except ValueError as exc:
        return trial_index, None, str(exc)


_WORKER_STATE: dict | None = None


def _init_worker(state: dict) -> None:
    global _WORKER_STATE
    _WORKER_STATE = state


def _trial_by_index(trial_index: int):
    return _run_trial(_WORKER_STATE, trial_index)


def _metric_triple(means: dict, group: str) -> dict:
    return {
        "tpr": means[f"tpr_{group}"],
        "fpr": means[f"fpr_{group}"],
        "auc": means[f"auc_{group}"],
    }


def _condition_table(means: dict) -> dict:
    high = _metric_triple(means, "high")
    low = _metric_triple(means, "low")
    difference = {k: high[k] - low[k] for k in DELTA_METRICS}
    return {"high": high, "low": low, "difference": difference}


def _sig_dict(sig) -> dict | None:
    if sig is None:
        return None
    return {
        "t_statistic": sig.t_statistic,
        "degrees_of_freedom": sig.degrees_of_freedom,
        "p_value": sig.p_value,
        "sided": sig.sided,
        "alpha": sig.alpha,
        "significant": sig.significant,
    }


def _config_echo(cfg: ExperimentConfig) -> dict:
    if cfg.synthetic is not None:
        corpus = {
            "mode": "synthetic",
            "node_count": cfg.synthetic.node_count,
            "message_count": cfg.synthetic.message_count,
            "positive_rate": cfg.synthetic.positive_rate,
            "bias_strength": cfg.synthetic.bias_strength,
            "seed": cfg.synthetic.seed,
        }
    else:
        corpus = {"mode": "file", "path": str(cfg.input_path)}
    return {
        "master_seed": cfg.master_seed,
        "trials": cfg.trials,
        "train_fraction": cfg.train_fraction,
        "smote_k": cfg.smote_k,
        "undersample_fraction": cfg.undersample_fraction,
        "fold_count": cfg.fold_count,
        "threshold": cfg.threshold,
        "alpha": cfg.alpha,
        "median_mode": "global" if cfg.global_median else "per-trial",
        "lexicon_path": str(cfg.lexicon_path) if cfg.lexicon_path else "bundled",
        "smiley_path": str(cfg.smiley_path) if cfg.smiley_path else "bundled",
        "edge_list_path": str(cfg.edge_list_path) if cfg.edge_list_path else None,
        "corpus": corpus,
    }


def run_experiment(cfg: ExperimentConfig) -> AuditReport:
    """Run the full audit and return the report."""
    if cfg.input_path is not None:
        records = load_messages(cfg.input_path)
        provenance = "real"
    else:
        records = generate_synthetic(cfg.synthetic)
        provenance = "synthetic"
    if not records:
        raise ValueError("corpus is empty")
    seen_ids = set()
    for r in records:
        if r.message_id in seen_ids:
            raise ValueError(f"duplicate message_id {r.message_id!r}")
        seen_ids.add(r.message_id)
    label_counts = (sum(1 for r in records if r.label == 0), sum(1 for r in records if r.label == 1))
    if min(label_counts) < 2:
        raise ValueError(
            f"corpus needs at least 2 messages of each class, got {label_counts}"
        )

    lexicon = load_lexicon(cfg.lexicon_path) if cfg.lexicon_path else default_lexicon()
    smileys = (
        load_smiley_patterns(cfg.smiley_path) if cfg.smiley_path else default_smiley_patterns()
    )
    extra_edges = load_edge_list(cfg.edge_list_path) if cfg.edge_list_path else []

    instances, diagnostics = _extract_instances(records, lexicon, smileys, extra_edges)
    dataset = Dataset(instances, provenance=provenance)

    global_groups = None
    if cfg.global_median:
        assignment = assign_groups([inst.sensitive_value for inst in instances])
        global_groups = {
            inst.message_id: g for inst, g in zip(instances, assignment.groups)
        }
        diagnostics["global_median"] = assignment.median

    state = {
        "dataset": dataset,
        "master_seed": cfg.master_seed,
        "train_fraction": cfg.train_fraction,
        "smote_k": cfg.smote_k,
        "undersample_fraction": cfg.undersample_fraction,
        "fold_count": cfg.fold_count,
        "threshold": cfg.threshold,
        "global_groups": global_groups,
    }

    indices = range(1, cfg.trials + 1)
    if cfg.workers > 1:
        with ProcessPoolExecutor(
            max_workers=cfg.workers, initializer=_init_worker, initargs=(state,)
        ) as pool:
            outcomes = list(pool.map(_trial_by_index, indices))
    else:
        outcomes = [_run_trial(state, t) for t in indices]

    trial_metrics: list[TrialMetrics] = []
    trial_rows = []
    failures = []
    for trial_index, metrics, error in outcomes:
        if error is not None:
            failures.append({"trial": trial_index, "error": error})
            continue
        for m in metrics:
            trial_metrics.append(m)
            row = {"trial": trial_index, "condition": m.condition, "seed": m.seed}
            row.update({name: m.metric(name) for name in METRIC_NAMES})
            trial_rows.append(row)

    if len(failures) > FAILED_TRIAL_BUDGET * cfg.trials:
        raise ExperimentAborted(
            f"{len(failures)} of {cfg.trials} trials failed "
            f"(budget {FAILED_TRIAL_BUDGET:.0%}); first error: {failures[0]['error']}"
        )
    if cfg.trials - len(failures) < 2:
        raise ExperimentAborted("fewer than 2 successful trials; nothing to aggregate")

    aggregate = aggregate_trials(trial_metrics, alpha=cfg.alpha)

    baseline_table = _condition_table(aggregate.condition_means[CONDITION_BASELINE])
    proposed_table = _condition_table(aggregate.condition_means[CONDITION_DEBIASED])
    baseline_delta = baseline_table["difference"]
    proposed_delta = proposed_table["difference"]
    delta_table = {
        "baseline_delta": dict(baseline_delta),
        "proposed_delta": dict(proposed_delta),
        "change": {k: baseline_delta[k] - proposed_delta[k] for k in DELTA_METRICS},
        "baseline_delta_abs": {k: abs(v) for k, v in baseline_delta.items()},
        "proposed_delta_abs": {k: abs(v) for k, v in proposed_delta.items()},
        "change_abs": {
            k: abs(baseline_delta[k]) - abs(proposed_delta[k]) for k in DELTA_METRICS
        },
    }
    significance = {
        "group_disparity": {
            cond: {m: _sig_dict(sig) for m, sig in tests.items()}
            for cond, tests in aggregate.group_disparity.items()
        },
        "delta_reduction_paired": {
            m: _sig_dict(sig) for m, sig in aggregate.delta_reduction_paired.items()
        },
        "delta_reduction_welch": {
            m: _sig_dict(sig) for m, sig in aggregate.delta_reduction_welch.items()
        },
        "overall_auc_change": _sig_dict(aggregate.overall_auc_change),
    }
    auc_before = aggregate.condition_means[CONDITION_BASELINE]["auc_overall"]
    auc_after = aggregate.condition_means[CONDITION_DEBIASED]["auc_overall"]
    overall_auc = {
        "baseline": auc_before,
        "debiased": auc_after,
        "change": auc_after - auc_before,
    }
    diagnostics = dict(diagnostics)
    diagnostics["failed_trials"] = failures
    diagnostics["feature_width"] = len(instances[0].model_features)

    return AuditReport(
        config=_config_echo(cfg),
        trials=trial_rows,
        baseline_table=baseline_table,
        proposed_table=proposed_table,
        delta_table=delta_table,
        significance=significance,
        overall_auc=overall_auc,
        diagnostics=diagnostics,
    )


# --- report emission ---------------------------------------------------------

TABLE_TITLES = {
    "baseline": "Baseline",
    "proposed": "Proposed Method",
    "deltas": "Deltas across high/low centrality groups",
}

_COLUMNS = ("tpr", "fpr", "auc")
_COLUMN_HEADERS = ("TPR", "FPR", "ROC AUC")


def _render_table(title: str, rows: list[tuple[str, dict]]) -> list[str]:
    label_width = max(len(r[0]) for r in rows) + 2
    header = " " * label_width + "".join(f"{h:>10}" for h in _COLUMN_HEADERS)
    lines = [title, header]
    for name, cells in rows:
        lines.append(
            f"{name:<{label_width}}" + "".join(f"{cells[c]:>10.4f}" for c in _COLUMNS)
        )
    lines.append("")
    return lines


def _render_sig_line(label: str, sig: dict | None, alpha: float) -> str:
    if sig is None:
        return f"  {label}: n/a (degenerate samples)"
    return (
        f"  {label}: t={sig['t_statistic']:.4f}, df={sig['degrees_of_freedom']:.1f}, "
        f"p={sig['p_value']:.6g} -- significant at alpha={alpha:g}: "
        f"{'yes' if sig['significant'] else 'no'}"
    )


def render_human_report(report: AuditReport) -> str:
    alpha = report.config["alpha"]
    lines: list[str] = []
    lines += _render_table(
        TABLE_TITLES["baseline"],
        [
            ("High", report.baseline_table["high"]),
            ("Low", report.baseline_table["low"]),
            ("Difference", report.baseline_table["difference"]),
        ],
    )
    lines += _render_table(
        TABLE_TITLES["proposed"],
        [
            ("High", report.proposed_table["high"]),
            ("Low", report.proposed_table["low"]),
            ("Difference", report.proposed_table["difference"]),
        ],
    )
    lines += _render_table(
        TABLE_TITLES["deltas"],
        [
            ("Baseline Delta", report.delta_table["baseline_delta"]),
            ("Proposed Delta", report.delta_table["proposed_delta"]),
            ("Change", report.delta_table["change"]),
        ],
    )
    lines.append("Group disparity, one-sided t-tests (high > low):")
    for cond in (CONDITION_BASELINE, CONDITION_DEBIASED):
        for metric in DELTA_METRICS:
            sig = report.significance["group_disparity"][cond][metric]
            lines.append(_render_sig_line(f"{cond} {metric.upper()}", sig, alpha))
    lines.append("Delta reduction, paired one-sided t-tests (baseline > debiased):")
    for metric in DELTA_METRICS:
        sig = report.significance["delta_reduction_paired"][metric]
        lines.append(_render_sig_line(metric.upper(), sig, alpha))
    lines.append("Delta reduction, unpaired Welch t-tests (baseline > debiased):")
    for metric in DELTA_METRICS:
        sig = report.significance["delta_reduction_welch"][metric]
        lines.append(_render_sig_line(metric.upper(), sig, alpha))
    oa = report.overall_auc
    lines.append(
        f"Overall AUC: baseline {oa['baseline']:.4f} -> debiased {oa['debiased']:.4f} "
        f"(change {oa['change']:+.4f})"
    )
    lines.append(
        _render_sig_line(
            "two-sided paired t-test", report.significance["overall_auc_change"], alpha
        )
    )
    lines.append("")
    return "\n".join(lines)


def emit_report(report: AuditReport, fmt: str, path: str | Path) -> Path:
    """Write one report file; "structured" is canonical JSON, "human" is the
    three aligned tables plus significance lines.
    """
    out = Path(path)
    if fmt == "structured":
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"
    elif fmt == "human":
        text = render_human_report(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    out.write_text(text, encoding="utf-8")
    return out


def load_report(path: str | Path) -> AuditReport:
    return AuditReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
