"""Trial aggregation and Welch's unequal-variance t-test.

The t-distribution tail is computed from scratch via the regularized
incomplete beta function (continued fraction, modified Lentz evaluation), so
the package carries no statistics dependency.  For two-sample comparisons the
two-tailed p-value is ``I_x(dof/2, 1/2)`` with ``x = dof/(dof + t²)``.
"""

import math
from dataclasses import dataclass
from typing import Optional

_MAX_CF_ITERATIONS = 300
_CF_EPSILON = 1e-15
_CF_TINY = 1e-300


@dataclass(frozen=True)
class AggregateStats:
    """Reporting metrics over one batch of trials of a single configuration.

    ``expected_fes`` is the mean evaluation count at which successful trials
    reached the acceptance threshold; None when no trial succeeded.
    """

    mean: float
    std: float
    success_ratio: float
    expected_fes: Optional[float]
    n_trials: int
    n_success: int


@dataclass(frozen=True)
class TTestResult:
    t_value: float
    p_value: float
    dof: float
    significant_at_005: bool


def aggregate(records, acceptance):
    """Summarize final values and acceptance hits of a batch of trials.

    ``records`` need only expose ``final_value`` and ``fe_at_acceptance``.
    The standard deviation uses the n−1 denominator (0.0 for a single trial);
    a trial succeeds when its final value is at or below ``acceptance``.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot aggregate zero trials")
    finals = [r.final_value for r in records]
    n = len(finals)
    mean = math.fsum(finals) / n
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in finals) / (n - 1)) if n > 1 else 0.0
    hits = [r.fe_at_acceptance for r in records if r.final_value <= acceptance]
    expected_fes = None
    if hits:
        if any(h is None for h in hits):
            raise ValueError("successful trial without an acceptance evaluation count")
        expected_fes = math.fsum(hits) / len(hits)
    return AggregateStats(
        mean=mean,
        std=std,
        success_ratio=len(hits) / n,
        expected_fes=expected_fes,
        n_trials=n,
        n_success=len(hits),
    )


def _beta_cf(a, b, x):
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPSILON:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction failed to converge (a={a}, b={b}, x={x})")


def betainc_reg(a, b, x):
    """Regularized incomplete beta function ``I_x(a, b)`` for a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("incomplete beta requires positive shape parameters")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # The continued fraction converges fast below the distribution's mean;
    # above it, use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t, dof):
    """P(|T| >= |t|) for a Student-t variable with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    return betainc_reg(dof / 2.0, 0.5, dof / (dof + t * t))


def welch_t_test(a, b):
    """Welch's two-sample t-test (unequal variances), two-tailed.

    Degrees of freedom follow Welch–Satterthwaite.  The degenerate case of
    two constant samples is not an error: equal constants give ``t = 0,
    p = 1``; different constants give an infinite ``t`` and ``p = 0``.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each sample needs at least 2 observations")
    mean_a = math.fsum(a) / na
    mean_b = math.fsum(b) / nb
    var_a = math.fsum((v - mean_a) ** 2 for v in a) / (na - 1)
    var_b = math.fsum((v - mean_b) ** 2 for v in b) / (nb - 1)
    sa = var_a / na
    sb = var_b / nb
    se_sq = sa + sb
    if se_sq == 0.0:
        dof = float(na + nb - 2)
        if mean_a == mean_b:
            return TTestResult(0.0, 1.0, dof, False)
        t = math.inf if mean_a > mean_b else -math.inf
        return TTestResult(t, 0.0, dof, True)
    t = (mean_a - mean_b) / math.sqrt(se_sq)
    dof = se_sq * se_sq / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    p = student_t_two_tailed_p(t, dof)
    return TTestResult(t, p, dof, p < 0.05)
