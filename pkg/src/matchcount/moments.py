"""Ensemble moments of matching counts, in exact rational arithmetic.

Two ensembles are analyzed.  For fair-coin Bernoulli matrices the mean and
second moment of the skip-allowing estimator follow a two-term recurrence

    f(m, l) = a(l) * f(m-1, l) + c(l) * f(m-1, l-1),    f(0, l) = 1

whose coefficient pair (a, c) is (1, l/2) for the mean of the matching count
and ((l+2)/2, (l^2+3l)/4) for the estimator's second moment.  For n x n
matrices with exactly m ones, mean and second moment of the matching count
come from inclusion-exclusion over pairs of fixed matchings.

Everything returns Fraction (or int); decimal strings are rendering only.
"""

from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, factorial, isqrt
from math import perm as _math_perm
from typing import Callable

from .ensembles import EnsembleSpec, enumerate_ensemble, matrix_probability
from .errors import DomainError
from .exact import amm_trial_second_moment, count_all_matchings
from .matrix import ZeroOneMatrix

DEFAULT_DIGITS = 12

# Largest epsilon the majority-tail bound accepts.
MAX_EPS = Fraction(1, 50)


def to_decimal(value, digits: int = DEFAULT_DIGITS) -> str:
    """Render an int or Fraction as a decimal string with `digits` significant digits."""
    if digits < 1:
        raise DomainError(f"digits must be >= 1, got {digits}")
    frac = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(frac.numerator) / Decimal(frac.denominator))


def _comb(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _perm(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return _math_perm(n, k)


# ---------------------------------------------------------------------------
# The two-term recurrence and its closed form.


@dataclass(frozen=True)
class RecursionCoeffs:
    """Coefficient pair (a, c) of the recurrence, each a function of l."""

    a: Callable[[int], Fraction]
    c: Callable[[int], Fraction]


MEAN_COEFFS = RecursionCoeffs(lambda l: Fraction(1), lambda l: Fraction(l, 2))
SECOND_MOMENT_COEFFS = RecursionCoeffs(
    lambda l: Fraction(l + 2, 2), lambda l: Fraction(l * l + 3 * l, 4)
)


def solve_two_term_recurrence(m: int, n: int, coeffs: RecursionCoeffs) -> Fraction:
    """f(m, n) by dynamic programming over (rows done, l); needs 0 <= m <= n."""
    if not 0 <= m <= n:
        raise DomainError(f"recurrence needs 0 <= m <= n, got m={m}, n={n}")
    row = {l: Fraction(1) for l in range(n - m, n + 1)}
    for i in range(1, m + 1):
        row = {
            l: coeffs.a(l) * row[l] + coeffs.c(l) * row[l - 1]
            for l in range(n - m + i, n + 1)
        }
    return row[n]


def _weak_compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total` (stars and bars)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        comp = []
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(total + parts - 2 - prev)
        yield tuple(comp)


def two_term_recurrence_closed_form(m: int, n: int, coeffs: RecursionCoeffs) -> Fraction:
    """f(m, n) summed over explicit compositions; exponential, for cross-checks.

    f(m, n) = sum over k = 0..m of c(n)*...*c(n-k+1) times the sum over
    compositions s_0+...+s_k = m-k of a(n)^s_0 * ... * a(n-k)^s_k.
    """
    if not 0 <= m <= n:
        raise DomainError(f"recurrence needs 0 <= m <= n, got m={m}, n={n}")
    total = Fraction(0)
    c_product = Fraction(1)
    for k in range(m + 1):
        if k > 0:
            c_product *= coeffs.c(n - k + 1)
        a_values = [coeffs.a(n - t) for t in range(k + 1)]
        inner = Fraction(0)
        for comp in _weak_compositions(m - k, k + 1):
            term = Fraction(1)
            for x, s in zip(a_values, comp):
                term *= x**s
            inner += term
        total += c_product * inner
    return total


def _complete_homogeneous(degree: int, xs: list[int]) -> int:
    """Sum of all degree-`degree` monomials in xs (complete homogeneous symmetric)."""
    g = [1] + [0] * degree
    for x in xs:
        for d in range(1, degree + 1):
            g[d] += x * g[d - 1]
    return g[degree]


# ---------------------------------------------------------------------------
# Fair-coin Bernoulli ensemble, shape m x n with m <= n.


def bernoulli_mean_matchings(m: int, n: int) -> Fraction:
    """Mean matching count over m x n fair-coin matrices:
    sum over k of C(m, k) * P(n, k) / 2^k."""
    if not 0 <= m <= n:
        raise DomainError(f"needs 0 <= m <= n, got m={m}, n={n}")
    return sum(
        (Fraction(comb(m, k) * _perm(n, k), 2**k) for k in range(m + 1)),
        Fraction(0),
    )


def bernoulli_second_moment(m: int, n: int) -> Fraction:
    """Mean over m x n fair-coin matrices of the estimator's exact E[X^2].

    Production path: the two-term recurrence with SECOND_MOMENT_COEFFS.
    """
    return solve_two_term_recurrence(m, n, SECOND_MOMENT_COEFFS)


def bernoulli_second_moment_closed_form(m: int, n: int) -> Fraction:
    """Same value as bernoulli_second_moment by the explicit summation:
    sum over k of P(n,k) * P(n+3,k) / 2^(m+k) * h_{m-k}(n+2, ..., n+2-k)
    where h_d is the complete homogeneous symmetric polynomial."""
    if not 0 <= m <= n:
        raise DomainError(f"needs 0 <= m <= n, got m={m}, n={n}")
    total = Fraction(0)
    for k in range(m + 1):
        coef = _perm(n, k) * _perm(n + 3, k)
        if coef == 0:
            continue
        xs = [n + 2 - t for t in range(k + 1)]
        total += Fraction(coef * _complete_homogeneous(m - k, xs), 2 ** (m + k))
    return total


@dataclass(frozen=True)
class MeanBounds:
    """Peak-term sandwich for the square fair-coin mean matching count.

    The mean equals (n!)^2 / 2^n times a sum of n+1 positive terms b_k whose
    largest is b_kstar; peak = (n!)^2 / 2^n * b_kstar.  peak <= mean <=
    (n+1) * peak always; mean <= n * peak does not always hold (it already
    fails at n = 1), so it is recorded per n rather than asserted.
    """

    n: int
    kstar: int
    peak: Fraction
    mean: Fraction
    upper: Fraction
    n_peak: Fraction
    peak_le_mean: bool
    mean_le_upper: bool
    mean_le_n_peak: bool


def mean_matchings_bounds(n: int) -> MeanBounds:
    """Sandwich the square fair-coin mean between its peak term and (n+1) times it.

    b_k = 2^k / ((n-k)! * (k!)^2); successive ratios 2(n-k+1)/k^2 show the
    peak sits at kstar = isqrt(2n+3) - 1, the largest k with k^2 <= 2(n-k+1).
    """
    if n < 0:
        raise DomainError(f"needs n >= 0, got {n}")
    kstar = isqrt(2 * n + 3) - 1
    b_star = Fraction(2**kstar, factorial(n - kstar) * factorial(kstar) ** 2)
    peak = Fraction(factorial(n) ** 2, 2**n) * b_star
    mean = bernoulli_mean_matchings(n, n)
    upper = (n + 1) * peak
    n_peak = n * peak
    return MeanBounds(
        n=n,
        kstar=kstar,
        peak=peak,
        mean=mean,
        upper=upper,
        n_peak=n_peak,
        peak_le_mean=peak <= mean,
        mean_le_upper=mean <= upper,
        mean_le_n_peak=mean <= n_peak,
    )


def ensemble_critical_ratio(n: int) -> Fraction:
    """Averaged second moment over the squared averaged mean, n x n fair coin."""
    if n < 0:
        raise DomainError(f"needs n >= 0, got {n}")
    mean = bernoulli_mean_matchings(n, n)
    return bernoulli_second_moment(n, n) / mean**2


def second_moment_diag_lower_bound(n: int) -> Fraction:
    """Closed-form lower bound on the averaged second moment (diagnostic only):
    sum over k of (n!)^2 (n+3)! / 2^(2n) * 2^k (k+2)^k / ((k!)^2 (k+3)! (n-k)!)."""
    if n < 0:
        raise DomainError(f"needs n >= 0, got {n}")
    lead = Fraction(factorial(n) ** 2 * factorial(n + 3), 2 ** (2 * n))
    return lead * sum(
        (
            Fraction(2**k * (k + 2) ** k, factorial(k) ** 2 * factorial(k + 3) * factorial(n - k))
            for k in range(n + 1)
        ),
        Fraction(0),
    )


def meets_power_threshold(value: Fraction, n: int) -> bool:
    """Decide value >= n ** (sqrt(n)/2) exactly, no floating point.

    Squaring reduces the question to value^2 >= n^sqrt(n).  For square n the
    exponent is an integer and the comparison is direct.  Otherwise sqrt(n)
    is bracketed by p/q <= sqrt(n) < (p+1)/q with p = isqrt(n q^2), which
    turns each side into an integer power comparison; q doubles until the
    bracket separates value^2 from n^sqrt(n), which must happen because a
    rational can never equal n^sqrt(n) for non-square n.
    """
    if n < 1:
        raise DomainError(f"needs n >= 1, got {n}")
    if value <= 0:
        return False
    if n == 1:
        return value >= 1
    squared = value * value
    root = isqrt(n)
    if root * root == n:
        return squared >= Fraction(n) ** root
    num, den = squared.numerator, squared.denominator
    q = 1
    while q <= 1 << 20:
        p = isqrt(n * q * q)
        # squared >= n^((p+1)/q) implies True; squared < n^(p/q) implies False
        if num**q >= n ** (p + 1) * den**q:
            return True
        if num**q < n**p * den**q:
            return False
        q *= 2
    raise RuntimeError(f"threshold bracket for n={n} did not separate")  # pragma: no cover


def majority_tail(n: int, eps: Fraction) -> Fraction:
    """Upper tail of the symmetric binomial on n^2 trials:
    sum of C(n^2, i) / 2^(n^2) for i from ceil((1/2 + eps) n^2) to n^2.

    Needs n >= 1 and 0 < eps <= MAX_EPS.  The lower limit is rounded up to
    the next integer so the reported value never overstates the tail.
    """
    if n < 1:
        raise DomainError(f"needs n >= 1, got {n}")
    eps = Fraction(eps)
    if not 0 < eps <= MAX_EPS:
        raise DomainError(f"needs 0 < eps <= {MAX_EPS}, got {eps}")
    cells = n * n
    lower = ceil((Fraction(1, 2) + eps) * cells)
    return Fraction(sum(comb(cells, i) for i in range(lower, cells + 1)), 2**cells)


# ---------------------------------------------------------------------------
# Uniform n x n matrices with exactly m ones.


def partial_derangement(n: int, p: int) -> int:
    """Number of injections from p fixed sources into n slots with no source i
    landing in slot i: sum over r of (-1)^r C(p, r) P(n-r, p-r).

    At p = n this is the derangement number of n.  Zero when p > n; the empty
    injection gives 1 at p = 0.
    """
    if n < 0 or p < 0:
        raise DomainError(f"needs n, p >= 0, got n={n}, p={p}")
    if p > n:
        return 0
    return sum((-1) ** r * comb(p, r) * _perm(n - r, p - r) for r in range(p + 1))


def containment_probability(n: int, m: int, k: int) -> Fraction:
    """Probability that k fixed cells all lie inside a uniform n x n matrix
    with exactly m ones: C(n^2 - k, m - k) / C(n^2, m).

    Zero when k > m (m ones cannot cover more than m cells).  k may exceed n:
    the second-moment decomposition applies this to unions of two matchings,
    which have up to 2n cells.
    """
    if n < 0 or k < 0:
        raise DomainError(f"needs n, k >= 0, got n={n}, k={k}")
    if not 0 <= m <= n * n:
        raise DomainError(f"needs 0 <= m <= n^2, got m={m}, n={n}")
    if k > m:
        return Fraction(0)
    return Fraction(_comb(n * n - k, m - k), comb(n * n, m))


def edge_count_mean_matchings(n: int, m: int) -> Fraction:
    """Mean matching count of a uniform n x n matrix with exactly m ones:
    sum over k of C(n, k)^2 k! times the k-matching containment probability."""
    return sum(
        (
            comb(n, k) ** 2 * factorial(k) * containment_probability(n, m, k)
            for k in range(n + 1)
        ),
        Fraction(0),
    )


def edge_count_second_moment(n: int, m: int) -> Fraction:
    """Second moment of the matching count of a uniform n x n matrix with m ones.

    Inclusion-exclusion over ordered pairs of matchings (sizes k and i); the
    second matching is decomposed by how it reuses the first one's rows and
    columns.  The two sums cover i <= k and i < k, which together count the
    ordered pairs once each.  All out-of-range binomials, falling factorials
    and diagonal-avoiding rook counts are zero by convention, which is what
    truncates impossible configurations.
    """
    if n < 0:
        raise DomainError(f"needs n >= 0, got {n}")
    if not 0 <= m <= n * n:
        raise DomainError(f"needs 0 <= m <= n^2, got m={m}, n={n}")
    total = Fraction(0)
    for k in range(n + 1):
        base = comb(n, k) ** 2 * factorial(k)
        if base == 0:
            continue
        for i_top in (k, k - 1):
            for i in range(i_top + 1):
                inner = Fraction(0)
                for p in range(min(i, n - k) + 1):
                    weight = comb(n - k, p) * comb(k, i - p) * _perm(n - i + p, p)
                    if weight == 0:
                        continue
                    jsum = Fraction(0)
                    for j in range(i - p + 1):
                        f = partial_derangement(n - j, i - p - j)
                        if f == 0:
                            continue
                        jsum += (
                            comb(i - p, j)
                            * f
                            * containment_probability(n, m, k + i - j)
                        )
                    inner += weight * jsum
                total += base * inner
    return total


# ---------------------------------------------------------------------------
# Brute-force moment oracle over any enumerable ensemble.


class MomentStatistic(Enum):
    MEAN_COUNT = "mean-count"
    MEAN_COUNT_SQUARED = "mean-count-squared"
    MEAN_TRIAL_SECOND_MOMENT = "mean-trial-second-moment"


_STATISTIC_FN: dict[MomentStatistic, Callable[[ZeroOneMatrix], int]] = {
    MomentStatistic.MEAN_COUNT: count_all_matchings,
    MomentStatistic.MEAN_COUNT_SQUARED: lambda a: count_all_matchings(a) ** 2,
    MomentStatistic.MEAN_TRIAL_SECOND_MOMENT: amm_trial_second_moment,
}


def ensemble_moment_oracle(spec: EnsembleSpec, statistic: MomentStatistic) -> Fraction:
    """Exact ensemble expectation of a per-matrix statistic, by enumeration.

    Weights each support matrix with its exact probability, so non-uniform
    Bernoulli ensembles are handled too.  Subject to the enumeration caps.
    """
    fn = _STATISTIC_FN[statistic]
    return sum(
        (matrix_probability(spec, a) * fn(a) for a in enumerate_ensemble(spec)),
        Fraction(0),
    )
