"""Group assignment, per-group detection rates, and equalized-odds
post-processing via a randomized derived predictor.

The derived predictor keeps or flips the base prediction with probabilities
that depend on the predicted label and the group: p_{ya} = Pr{output 1 |
prediction y, group a} with a=0 for "low" and a=1 for "high". The four
probabilities are chosen to equalize the groups' derived TPR and FPR while
minimizing expected misclassification loss.

Solver. For one group with base rates (fpr, tpr), the achievable derived
(fpr~, tpr~) pairs form the convex quadrilateral with corners (0,0),
(fpr,tpr), (1-fpr,1-tpr), (1,1) - the image of the unit square of flip
probabilities under an affine map. Equalized odds pins both groups to a
common target point inside the intersection of the two quadrilaterals, and
the loss is linear in that target, so the optimum sits on a vertex of the
intersection (at most 8 of them). We enumerate the vertices, evaluate the
loss, and invert the affine map to recover the mixing probabilities - exact,
no LP machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median

import numpy as np

GROUP_LOW = "low"
GROUP_HIGH = "high"
GROUPS = (GROUP_LOW, GROUP_HIGH)

_VERTEX_MERGE_TOL = 1e-9
_INSIDE_TOL = 1e-9


@dataclass(frozen=True)
class GroupAssignment:
    """Median split of the sensitive values: value >= median maps to "high"."""

    groups: tuple[str, ...]
    median: float


@dataclass(frozen=True)
class RateEntry:
    tpr: float
    fpr: float
    base_rate: float
    mass: float
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass(frozen=True)
class GroupRates:
    low: RateEntry
    high: RateEntry

    def entry(self, group: str) -> RateEntry:
        if group == GROUP_LOW:
            return self.low
        if group == GROUP_HIGH:
            return self.high
        raise ValueError(f"unknown group {group!r}")

    def pooled_base_rate(self) -> float:
        return self.low.mass * self.low.base_rate + self.high.mass * self.high.base_rate


@dataclass(frozen=True)
class MixingParameters:
    """p_{ya}: first subscript is the predicted label, second the group
    (0=low, 1=high). Identity mixing is (0, 0, 1, 1).
    """

    p00: float
    p01: float
    p10: float
    p11: float

    def flip_probs(self, group: str) -> tuple[float, float]:
        """(p for prediction 0, p for prediction 1) of one group."""
        if group == GROUP_LOW:
            return self.p00, self.p10
        if group == GROUP_HIGH:
            return self.p01, self.p11
        raise ValueError(f"unknown group {group!r}")


@dataclass(frozen=True)
class DerivedRates:
    tpr_low: float
    fpr_low: float
    tpr_high: float
    fpr_high: float
    expected_loss: float


def assign_groups(sensitive_values) -> GroupAssignment:
    """Split at the standard midpoint-of-middle-two median; ties go high."""
    values = [float(v) for v in sensitive_values]
    if len(values) < 2:
        raise ValueError("need at least 2 sensitive values to form groups")
    med = float(median(values))
    groups = tuple(GROUP_HIGH if v >= med else GROUP_LOW for v in values)
    if GROUP_LOW not in groups or GROUP_HIGH not in groups:
        raise ValueError("degenerate sensitive attribute; audit impossible")
    return GroupAssignment(groups=groups, median=med)


def group_rates(labels, hard_preds, groups) -> GroupRates:
    """Confusion-count rates within each group, plus base rates and masses."""
    labels = list(labels)
    preds = list(hard_preds)
    groups = list(groups)
    if not len(labels) == len(preds) == len(groups):
        raise ValueError("labels, predictions, and groups must have equal length")

    entries = {}
    total = len(labels)
    for g in GROUPS:
        idx = [i for i, grp in enumerate(groups) if grp == g]
        if not idx:
            raise ValueError(f"group '{g}' is empty")
        tp = sum(1 for i in idx if labels[i] == 1 and preds[i] == 1)
        fn = sum(1 for i in idx if labels[i] == 1 and preds[i] == 0)
        fp = sum(1 for i in idx if labels[i] == 0 and preds[i] == 1)
        tn = sum(1 for i in idx if labels[i] == 0 and preds[i] == 0)
        if tp + fn == 0:
            raise ValueError(f"group '{g}' has no positive instances")
        if fp + tn == 0:
            raise ValueError(f"group '{g}' has no negative instances")
        entries[g] = RateEntry(
            tpr=tp / (tp + fn),
            fpr=fp / (fp + tn),
            base_rate=(tp + fn) / len(idx),
            mass=len(idx) / total,
            tp=tp,
            fp=fp,
            tn=tn,
            fn=fn,
        )
    return GroupRates(low=entries[GROUP_LOW], high=entries[GROUP_HIGH])


def _convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone-chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else pts


def group_polygon(fpr: float, tpr: float) -> list[tuple[float, float]]:
    """Achievable derived-rate region of one group (hull of the 4 corners).

    Degenerates to the diagonal segment when the base predictor is
    uninformative (tpr == fpr).
    """
    return _convex_hull([(0.0, 0.0), (float(fpr), float(tpr)), (1.0 - fpr, 1.0 - tpr), (1.0, 1.0)])


def _point_in_polygon(p: tuple[float, float], poly, tol: float = _INSIDE_TOL) -> bool:
    if len(poly) == 2:
        (x1, y1), (x2, y2) = poly
        dx, dy = x2 - x1, y2 - y1
        if abs(dx * (p[1] - y1) - dy * (p[0] - x1)) > tol:
            return False
        along = (p[0] - x1) * dx + (p[1] - y1) * dy
        return -tol <= along <= dx * dx + dy * dy + tol
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) < -tol:
            return False
    return True


def _polygon_edges(poly):
    if len(poly) == 2:
        return [(poly[0], poly[1])]
    return [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def _segment_crossing(a1, a2, b1, b2):
    d1 = (a2[0] - a1[0], a2[1] - a1[1])
    d2 = (b2[0] - b1[0], b2[1] - b1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) < 1e-12:
        return None  # parallel/collinear: endpoints cover these cases
    dx, dy = b1[0] - a1[0], b1[1] - a1[1]
    s = (dx * d2[1] - dy * d2[0]) / den
    u = (dx * d1[1] - dy * d1[0]) / den
    if -1e-9 <= s <= 1 + 1e-9 and -1e-9 <= u <= 1 + 1e-9:
        x = min(max(a1[0] + s * d1[0], 0.0), 1.0)
        y = min(max(a1[1] + s * d1[1], 0.0), 1.0)
        return (x, y)
    return None


def _feasible_vertices(poly_low, poly_high) -> list[tuple[float, float]]:
    """Vertices of the intersection of the two achievable regions.

    Exact polygon vertices are preferred; edge crossings only join the list
    when no existing candidate sits within the merge tolerance.
    """
    candidates: list[tuple[float, float]] = []

    def push(p):
        for q in candidates:
            if abs(p[0] - q[0]) <= _VERTEX_MERGE_TOL and abs(p[1] - q[1]) <= _VERTEX_MERGE_TOL:
                return
        candidates.append(p)

    push((0.0, 0.0))
    push((1.0, 1.0))
    for v in poly_low:
        if _point_in_polygon(v, poly_high):
            push(v)
    for v in poly_high:
        if _point_in_polygon(v, poly_low):
            push(v)
    for e1 in _polygon_edges(poly_low):
        for e2 in _polygon_edges(poly_high):
            p = _segment_crossing(e1[0], e1[1], e2[0], e2[1])
            if p is not None and _point_in_polygon(p, poly_low, 1e-7) and _point_in_polygon(p, poly_high, 1e-7):
                push(p)
    return sorted(candidates)


def _solve_flip_probs(entry: RateEntry, target: tuple[float, float]) -> tuple[float, float]:
    """Invert the affine map: find (p0, p1) sending (fpr, tpr) to the target."""
    f_star, t_star = target
    det = entry.fpr - entry.tpr
    if abs(det) < 1e-12:
        # uninformative predictor: the region is the diagonal, p0 = p1 = t*
        p0 = p1 = t_star
    else:
        p0 = (t_star * entry.fpr - entry.tpr * f_star) / det
        p1 = ((1.0 - entry.tpr) * f_star - (1.0 - entry.fpr) * t_star) / det
    return min(max(p0, 0.0), 1.0), min(max(p1, 0.0), 1.0)


def _derived_entry(entry: RateEntry, p0: float, p1: float) -> tuple[float, float]:
    tpr = p1 * entry.tpr + p0 * (1.0 - entry.tpr)
    fpr = p1 * entry.fpr + p0 * (1.0 - entry.fpr)
    return tpr, fpr


def derived_rates(p: MixingParameters, rates: GroupRates) -> DerivedRates:
    """Analytic post-mixing rates per group and the expected loss."""
    t_low, f_low = _derived_entry(rates.low, p.p00, p.p10)
    t_high, f_high = _derived_entry(rates.high, p.p01, p.p11)
    loss = 0.0
    for entry, t, f in ((rates.low, t_low, f_low), (rates.high, t_high, f_high)):
        loss += entry.mass * (entry.base_rate * (1.0 - t) + (1.0 - entry.base_rate) * f)
    return DerivedRates(
        tpr_low=t_low, fpr_low=f_low, tpr_high=t_high, fpr_high=f_high, expected_loss=loss
    )


def expected_loss(p: MixingParameters, rates: GroupRates) -> float:
    """Expected misclassification rate of the derived predictor; linear in p."""
    return derived_rates(p, rates).expected_loss


def fit_equalized_odds(rates: GroupRates) -> tuple[MixingParameters, DerivedRates]:
    """Loss-minimizing mixing probabilities that equalize both groups' rates.

    The feasible set always contains the diagonal corners, so a solution
    exists for any input rates.
    """
    poly_low = group_polygon(rates.low.fpr, rates.low.tpr)
    poly_high = group_polygon(rates.high.fpr, rates.high.tpr)
    pooled = rates.pooled_base_rate()

    best_loss = None
    best_target = None
    for f_star, t_star in _feasible_vertices(poly_low, poly_high):
        loss = pooled * (1.0 - t_star) + (1.0 - pooled) * f_star
        if best_loss is None or loss < best_loss - 1e-15:
            best_loss = loss
            best_target = (f_star, t_star)

    p00, p10 = _solve_flip_probs(rates.low, best_target)
    p01, p11 = _solve_flip_probs(rates.high, best_target)
    mixing = MixingParameters(p00=p00, p01=p01, p10=p10, p11=p11)
    return mixing, derived_rates(mixing, rates)


def apply_mixing(preds, groups, p: MixingParameters, mode: str = "sampled", seed: int = 0):
    """Run the derived predictor.

    "sampled" draws the randomized binary outputs (seeded); "expectation"
    returns each instance's output probability p_{ya} as a score.
    """
    preds = np.asarray(preds, dtype=np.int64)
    groups = list(groups)
    if len(preds) != len(groups):
        raise ValueError("predictions and groups must have equal length")
    probs = np.empty(len(preds), dtype=np.float64)
    for g in GROUPS:
        p0, p1 = p.flip_probs(g)
        for i, grp in enumerate(groups):
            if grp == g:
                probs[i] = p1 if preds[i] == 1 else p0
    if mode == "expectation":
        return probs
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        return (rng.random(len(preds)) < probs).astype(np.int64)
    raise ValueError(f"unknown mode {mode!r}; expected 'sampled' or 'expectation'")
