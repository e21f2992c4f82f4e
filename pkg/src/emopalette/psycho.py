"""Two-alternative forced choice (2AFC) analysis.

Pipeline: participant filtering (color-vision failures, then majority-vote
outliers in one pass), per-emotion hit rates, psychometric points
(stimulus difference vs proportion correct), Spearman-Karber mean and
standard error, and a least-squares logistic fit with a 0.5 floor.

Spearman-Karber mean over augmented points (x_0, p_0=0) .. (x_{k+1}, p_{k+1}=1):

    mu = 1/2 * sum_i (p_i - p_{i-1}) * (x_i + x_{i-1})

Standard error ("perceptual noise"):

    SE = sqrt( sum_i g_i (1 - g_i) / (n_i - 1) * (x_{i+1} - x_{i-1})^2 )

Points at equal stimulus differences are pooled (n-weighted) first. The
sequence fed to the mean is NOT monotonized by default; weighted
pooled-adjacent-violators is available via monotonize="pav", and the
report always prints the sequence actually used so the choice is
auditable.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import AnalysisError, DomainError, FitError, InputError

MONOTONIZE_METHODS = ("none", "pav")


@dataclass(frozen=True)
class TrialRecord:
    trial_id: str
    emotion: str
    intensity_first: float
    intensity_second: float
    choice: int  # 1 or 2

    def __post_init__(self):
        if self.choice not in (1, 2):
            raise InputError(f"trial {self.trial_id}: choice must be 1 or 2")
        for v in (self.intensity_first, self.intensity_second):
            if not 0.0 <= v <= 1.0:
                raise InputError(
                    f"trial {self.trial_id}: intensity {v} outside [0, 1]"
                )

    @property
    def difference(self) -> float:
        return abs(self.intensity_first - self.intensity_second)

    @property
    def is_hit(self) -> bool:
        """Chose the item with the higher predicted intensity (ties count)."""
        chosen = self.intensity_first if self.choice == 1 else self.intensity_second
        other = self.intensity_second if self.choice == 1 else self.intensity_first
        return chosen >= other


@dataclass(frozen=True)
class ParticipantRecord:
    participant_id: str
    passed_color_test: bool
    trials: tuple[TrialRecord, ...]


@dataclass(frozen=True)
class PsychometricPoint:
    x: float  # stimulus difference
    g: float  # observed proportion correct
    n: int    # observation count


@dataclass
class ExclusionReport:
    total: int
    color_test_failures: list[str]
    outliers: list[tuple[str, float]]

    @property
    def analyzed(self) -> int:
        return self.total - len(self.color_test_failures) - len(self.outliers)


def load_trials(path: str | Path) -> list[ParticipantRecord]:
    """Read the flat trial TSV.

    Columns: participant, trial, emotion, intensity1, intensity2, choice,
    passed_color_test. A header row with these names is required.
    """
    expected = ["participant", "trial", "emotion", "intensity1", "intensity2",
                "choice", "passed_color_test"]
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read trials file {path}: {exc}") from exc
    if not lines:
        raise InputError(f"trials file {path} is empty")
    header = [h.strip().lower() for h in lines[0].split("\t")]
    if header != expected:
        raise InputError(
            f"trials file {path}: expected header {expected}, got {header}"
        )
    by_participant: dict[str, list[TrialRecord]] = defaultdict(list)
    passed: dict[str, bool] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != len(expected):
            raise InputError(f"trials file {path} row {lineno}: wrong field count")
        pid, trial, emotion, i1, i2, choice, flag = (f.strip() for f in fields)
        try:
            record = TrialRecord(trial, emotion.lower(), float(i1), float(i2),
                                 int(choice))
        except ValueError as exc:
            raise InputError(f"trials file {path} row {lineno}: {exc}") from exc
        by_participant[pid].append(record)
        flag_value = flag.lower() in ("1", "true", "yes", "y")
        if pid in passed and passed[pid] != flag_value:
            raise InputError(
                f"trials file {path}: inconsistent color-test flag for {pid}"
            )
        passed[pid] = flag_value
    return [
        ParticipantRecord(pid, passed[pid], tuple(trials))
        for pid, trials in by_participant.items()
    ]


def exclude_invalid(participants: Sequence[ParticipantRecord]
                    ) -> tuple[list[ParticipantRecord], ExclusionReport]:
    """Drop color-test failures, then majority-vote outliers in one pass.

    The per-trial majority is computed once over test-passing participants
    (prospective outliers included); a participant is an outlier when fewer
    than half of their decided trials match the majority. Trials whose
    votes tie carry no majority and are left out of the agreement ratio.
    """
    if len(participants) < 2:
        raise AnalysisError("need at least 2 participants")
    failures = [p.participant_id for p in participants if not p.passed_color_test]
    passers = [p for p in participants if p.passed_color_test]

    votes: dict[str, Counter] = defaultdict(Counter)
    for p in passers:
        for t in p.trials:
            votes[t.trial_id][t.choice] += 1
    majority: dict[str, int] = {}
    for trial_id, counter in votes.items():
        ranked = counter.most_common(2)
        if len(ranked) == 1 or ranked[0][1] > ranked[1][1]:
            majority[trial_id] = ranked[0][0]

    kept = []
    outliers = []
    for p in passers:
        decided = [t for t in p.trials if t.trial_id in majority]
        if not decided:
            kept.append(p)
            continue
        agreement = sum(
            1 for t in decided if t.choice == majority[t.trial_id]
        ) / len(decided)
        if agreement < 0.5:
            outliers.append((p.participant_id, agreement))
        else:
            kept.append(p)
    if not kept:
        raise AnalysisError("every participant was excluded")
    return kept, ExclusionReport(len(participants), failures, outliers)


@dataclass
class HitRates:
    per_emotion: dict[str, tuple[int, float]]  # hits, rate
    total_hits: int
    total_responses: int

    @property
    def average(self) -> float:
        return self.total_hits / self.total_responses

    @property
    def average_fraction(self) -> Fraction:
        return Fraction(self.total_hits, self.total_responses)


def hit_rates(participants: Sequence[ParticipantRecord]) -> HitRates:
    """Per-emotion hit counts and rates over a filtered cohort."""
    if not participants:
        raise AnalysisError("no participants to analyze")
    n = len(participants)
    hits: Counter = Counter()
    responses = 0
    for p in participants:
        for t in p.trials:
            responses += 1
            if t.is_hit:
                hits[t.emotion] += 1
    per_emotion = {e: (h, h / n) for e, h in sorted(hits.items())}
    return HitRates(per_emotion, sum(hits.values()), responses)


def hit_rates_from_counts(counts: dict[str, int], n_participants: int) -> HitRates:
    if n_participants <= 0:
        raise AnalysisError("participant count must be positive")
    per_emotion = {e: (h, h / n_participants) for e, h in counts.items()}
    total = sum(counts.values())
    return HitRates(per_emotion, total, n_participants * len(counts))


def transform_probability(g: float) -> float:
    """2AFC probability transform p = 2g - 1, clamped to [0, 1]."""
    if not 0.0 <= g <= 1.0:
        raise DomainError(f"proportion correct must be in [0, 1], got {g!r}")
    return min(1.0, max(0.0, 2.0 * g - 1.0))


def merge_points(points: Iterable[PsychometricPoint]) -> list[PsychometricPoint]:
    """Sort by stimulus difference and pool equal-x points (n-weighted)."""
    pooled: dict[float, tuple[float, int]] = {}
    for pt in points:
        mass, n = pooled.get(pt.x, (0.0, 0))
        pooled[pt.x] = (mass + pt.g * pt.n, n + pt.n)
    return [
        PsychometricPoint(x, mass / n, n)
        for x, (mass, n) in sorted(pooled.items())
    ]


def pav_monotonize(values: Sequence[float], weights: Sequence[int]
                   ) -> list[float]:
    """Weighted pooled-adjacent-violators: nondecreasing, mass-preserving."""
    blocks: list[tuple[float, float]] = []  # (weighted sum, weight)
    for v, w in zip(values, weights):
        blocks.append((v * w, float(w)))
        while len(blocks) > 1 and blocks[-2][0] / blocks[-2][1] > blocks[-1][0] / blocks[-1][1]:
            s2, w2 = blocks.pop()
            s1, w1 = blocks.pop()
            blocks.append((s1 + s2, w1 + w2))
    out = []
    i = 0
    for s, w in blocks:
        level = s / w
        remaining = w
        while remaining > 0:
            out.append(level)
            remaining -= weights[i]
            i += 1
    return out


def spearman_karber_mean(points: Sequence[PsychometricPoint],
                         x_low: float = 0.0, x_high: float = 1.0) -> float:
    """Mean of the psychometric function over the augmented sequence.

    points must be sorted with strictly increasing x (merge_points does
    both); the probabilities are used exactly as given.
    """
    if not points:
        raise AnalysisError("no psychometric points")
    xs = [p.x for p in points]
    ps = [p.g for p in points]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise AnalysisError("stimulus values must be strictly increasing")
    if x_low > xs[0] or x_high < xs[-1]:
        raise AnalysisError(
            f"augmentation bounds [{x_low}, {x_high}] must bracket the data"
        )
    if any(not 0.0 <= p <= 1.0 for p in ps):
        raise AnalysisError("probabilities must lie in [0, 1]")
    X = [x_low, *xs, x_high]
    P = [0.0, *ps, 1.0]
    return 0.5 * sum(
        (P[i] - P[i - 1]) * (X[i] + X[i - 1]) for i in range(1, len(X))
    )


def spearman_karber_se(points: Sequence[PsychometricPoint],
                       x_low: float = 0.0, x_high: float = 1.0) -> float:
    """Standard error of the Spearman-Karber mean from observed rates."""
    if not points:
        raise AnalysisError("no psychometric points")
    for p in points:
        if p.n < 2:
            raise AnalysisError(
                f"need at least 2 observations per point, got n={p.n} at x={p.x}"
            )
    X = [x_low, *(p.x for p in points), x_high]
    total = 0.0
    for i, p in enumerate(points, start=1):
        total += p.g * (1.0 - p.g) / (p.n - 1) * (X[i + 1] - X[i - 1]) ** 2
    return math.sqrt(total)


@dataclass
class LogisticFit:
    threshold: float
    slope: float
    residuals: np.ndarray
    degenerate: bool
    note: str = ""

    def curve(self, x):
        return logistic_2afc(np.asarray(x, dtype=float), self.threshold, self.slope)


_SLOPE_BOUND = 1e4
_THRESHOLD_BOUND = 10.0


def logistic_2afc(x, threshold: float, slope: float):
    """Chance-floored logistic: 0.5 + 0.5 / (1 + exp(-slope (x - threshold)))."""
    return 0.5 + 0.5 / (1.0 + np.exp(-slope * (x - threshold)))


def fit_logistic(points: Sequence[PsychometricPoint],
                 max_iterations: int = 2000) -> LogisticFit:
    """Deterministic least-squares fit of the chance-floored logistic.

    Initialization is fixed (threshold = median x, slope = 10). Degenerate
    data pushes the slope to its bound; that comes back flagged rather than
    raising. Failure to converge raises FitError carrying the residuals.
    """
    from scipy.optimize import least_squares

    xs = np.asarray([p.x for p in points], dtype=float)
    gs = np.asarray([p.g for p in points], dtype=float)
    if len(set(xs.tolist())) < 3:
        raise AnalysisError("logistic fit needs at least 3 distinct stimulus values")

    def residual(theta):
        return logistic_2afc(xs, theta[0], theta[1]) - gs

    start = np.array([float(np.median(xs)), 10.0])
    result = least_squares(
        residual, start,
        bounds=([-_THRESHOLD_BOUND, -_SLOPE_BOUND],
                [_THRESHOLD_BOUND, _SLOPE_BOUND]),
        max_nfev=max_iterations,
    )
    if not result.success:
        raise FitError("logistic fit did not converge", residuals=result.fun)
    threshold, slope = result.x
    degenerate = False
    note = ""
    if (abs(abs(slope) - _SLOPE_BOUND) < 1e-6
            or abs(abs(threshold) - _THRESHOLD_BOUND) < 1e-6):
        degenerate = True
        note = "parameter at bound: data may be degenerate"
    elif not xs.min() <= threshold <= xs.max():
        # e.g. constant near-perfect rates: the transition is not identified
        degenerate = True
        note = "threshold outside the observed stimulus range: data may be degenerate"
    return LogisticFit(float(threshold), float(slope), result.fun, degenerate, note)


@dataclass
class AnalysisOptions:
    monotonize: str = "none"       # "none" | "pav"
    probabilities: str = "rate"    # "rate" | "transformed" (p = 2g - 1)
    x_low: float = 0.0
    x_high: float = 1.0

    def __post_init__(self):
        if self.monotonize not in MONOTONIZE_METHODS:
            raise AnalysisError(f"unknown monotonization {self.monotonize!r}")
        if self.probabilities not in ("rate", "transformed"):
            raise AnalysisError(f"unknown probability mode {self.probabilities!r}")


@dataclass
class AnalysisReport:
    rates: HitRates
    n_participants: int
    differences: dict[str, float]
    points: list[PsychometricPoint]          # merged, sorted
    sequence: list[float]                    # probabilities fed to the mean
    options: AnalysisOptions
    mu: float
    se: float
    fit: LogisticFit | None
    exclusions: ExclusionReport | None = None

    def describe(self) -> str:
        lines = []
        if self.exclusions is not None:
            e = self.exclusions
            lines.append(
                f"participants: {e.total} total, "
                f"{len(e.color_test_failures)} color-test failures, "
                f"{len(e.outliers)} outliers, {e.analyzed} analyzed"
            )
        else:
            lines.append(f"participants: {self.n_participants} analyzed")
        lines.append("")
        lines.append("emotion\thits\trate\tdifference")
        for emotion, (hits, rate) in self.rates.per_emotion.items():
            diff = self.differences.get(emotion, float("nan"))
            lines.append(f"{emotion}\t{hits}\t{rate:.2f}\t{diff:g}")
        avg = self.rates.average_fraction
        lines.append("")
        lines.append(
            f"average hit rate: {self.rates.average:.4f} "
            f"({avg.numerator}/{avg.denominator})"
        )
        lines.append("")
        lines.append("psychometric points (x, g, n):")
        for p in self.points:
            lines.append(f"  {p.x:g}\t{p.g:.6f}\t{p.n}")
        lines.append(
            f"sequence for the mean (probabilities={self.options.probabilities}, "
            f"monotonize={self.options.monotonize}):"
        )
        lines.append("  " + " ".join(f"{v:.6f}" for v in self.sequence))
        lines.append(f"spearman-karber mean: {self.mu:.4f}")
        lines.append(f"standard error: {self.se:.4f}")
        if self.fit is not None:
            lines.append(
                f"logistic fit: threshold={self.fit.threshold:.4f} "
                f"slope={self.fit.slope:.4f}"
                + (f" ({self.fit.note})" if self.fit.note else "")
            )
        return "\n".join(lines)


def _analyze_points(raw_points: list[PsychometricPoint],
                    options: AnalysisOptions) -> tuple[list, list, float, float]:
    points = merge_points(raw_points)
    if options.probabilities == "transformed":
        seq = [transform_probability(p.g) for p in points]
    else:
        seq = [p.g for p in points]
    if options.monotonize == "pav":
        seq = pav_monotonize(seq, [p.n for p in points])
    sk_points = [
        PsychometricPoint(p.x, v, p.n) for p, v in zip(points, seq)
    ]
    mu = spearman_karber_mean(sk_points, options.x_low, options.x_high)
    se = spearman_karber_se(points, options.x_low, options.x_high)
    return points, seq, mu, se


def analyze_counts(hits: dict[str, int], differences: dict[str, float],
                   n_participants: int,
                   options: AnalysisOptions | None = None) -> AnalysisReport:
    """Analyze aggregated per-emotion hit counts and stimulus differences."""
    options = options or AnalysisOptions()
    rates = hit_rates_from_counts(hits, n_participants)
    raw_points = [
        PsychometricPoint(differences[e], h / n_participants, n_participants)
        for e, h in hits.items()
    ]
    points, seq, mu, se = _analyze_points(raw_points, options)
    try:
        fit = fit_logistic(points)
    except AnalysisError:
        fit = None
    return AnalysisReport(
        rates=rates, n_participants=n_participants, differences=differences,
        points=points, sequence=seq, options=options, mu=mu, se=se, fit=fit,
    )


def analyze_trials(participants: Sequence[ParticipantRecord],
                   options: AnalysisOptions | None = None) -> AnalysisReport:
    """Full pipeline from raw trials: filter, rates, SK estimates, fit."""
    options = options or AnalysisOptions()
    kept, exclusions = exclude_invalid(participants)
    rates = hit_rates(kept)
    n = len(kept)

    by_emotion: dict[str, list[TrialRecord]] = defaultdict(list)
    for p in kept:
        for t in p.trials:
            by_emotion[t.emotion].append(t)
    differences = {
        e: sum(t.difference for t in ts) / len(ts)
        for e, ts in by_emotion.items()
    }
    raw_points = [
        PsychometricPoint(
            differences[e],
            sum(1 for t in ts if t.is_hit) / len(ts),
            len(ts),
        )
        for e, ts in by_emotion.items()
    ]
    points, seq, mu, se = _analyze_points(raw_points, options)
    try:
        fit = fit_logistic(points)
    except AnalysisError:
        fit = None
    return AnalysisReport(
        rates=rates, n_participants=n, differences=differences,
        points=points, sequence=seq, options=options, mu=mu, se=se, fit=fit,
        exclusions=exclusions,
    )
