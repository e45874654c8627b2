"""Exact counting: matchings, permanents, and estimator second moments.

The workhorse is a memoized recursion on (row index, available columns).
Processing rows top-down, a row either stays unmatched or is matched to one
of its available columns:

    count(i, avail) = count(i+1, avail) + sum over j in row_i & avail of
                      count(i+1, avail minus j)

with count(m, avail) = 1 for the empty row suffix.  Memo tables are plain
dicts keyed on (row, column bitmask); at most m * 2^n states exist, which is
why these routines insist on cols <= MAX_RECURSION_COLS.  All arithmetic is
Python int, so counts never overflow or round.
"""

from fractions import Fraction
from math import factorial

from .errors import CapacityError, ShapeError, UndefinedRatioError
from .estimators import Method
from .matrix import ZeroOneMatrix, build_transformed

# State space of the row recursion is m * 2^cols; 24 columns is the point
# where a dense worst case stops fitting in desk-scale memory.
MAX_RECURSION_COLS = 24
# Ryser's formula walks all 2^n column subsets.
MAX_RYSER_COLS = 20
# The permanent route builds a 2n x 2n matrix for Ryser, so n caps at 10.
MAX_TRANSFORM_SIDE = 10

# Aliases for the shapes the recursions trade in.
MemoTable = dict[tuple[int, int], int]
MatchingProfile = list[int]


def _require_cols(a: ZeroOneMatrix, cap: int, what: str):
    if a.cols > cap:
        raise CapacityError(f"{what} supports at most {cap} columns, got {a.cols}")


def count_all_matchings(a: ZeroOneMatrix) -> int:
    """Total number of matchings of a, the empty matching included.

    Always at least 1.  Requires cols <= MAX_RECURSION_COLS.
    """
    _require_cols(a, MAX_RECURSION_COLS, "count_all_matchings")
    masks = a.row_masks
    m = a.rows
    memo: MemoTable = {}

    def value(i: int, avail: int) -> int:
        if i == m:
            return 1
        key = (i, avail)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = value(i + 1, avail)
        choices = masks[i] & avail
        while choices:
            bit = choices & -choices
            total += value(i + 1, avail ^ bit)
            choices ^= bit
        memo[key] = total
        return total

    return value(0, (1 << a.cols) - 1)


def matching_profile(a: ZeroOneMatrix) -> MatchingProfile:
    """Counts of k-edge matchings for k = 0 .. cols.

    Entry 0 is always 1 (the empty matching) and the entries sum to
    count_all_matchings(a).  Same recursion as the total count, but the value
    carried per state is a tuple of counts by matching size.
    """
    _require_cols(a, MAX_RECURSION_COLS, "matching_profile")
    masks = a.row_masks
    m = a.rows
    memo: dict[tuple[int, int], tuple[int, ...]] = {}

    def value(i: int, avail: int) -> tuple[int, ...]:
        if i == m:
            return (1,)
        key = (i, avail)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = list(value(i + 1, avail))
        choices = masks[i] & avail
        while choices:
            bit = choices & -choices
            sub = value(i + 1, avail ^ bit)
            # matching row i to this column adds one edge: shift by one
            if len(acc) < len(sub) + 1:
                acc.extend([0] * (len(sub) + 1 - len(acc)))
            for k, c in enumerate(sub):
                acc[k + 1] += c
            choices ^= bit
        out = tuple(acc)
        memo[key] = out
        return out

    counts = list(value(0, (1 << a.cols) - 1))
    counts.extend([0] * (a.cols + 1 - len(counts)))
    return counts


def permanent_ryser(a: ZeroOneMatrix) -> int:
    """Permanent by Ryser's inclusion-exclusion over column subsets.

    per(a) = sum over column subsets S of (-1)^(n - |S|) * prod_i |row_i & S|.
    Square input, n <= MAX_RYSER_COLS (2^n subsets are visited).
    """
    if not a.is_square:
        raise ShapeError(f"permanent needs a square matrix, got {a.rows}x{a.cols}")
    _require_cols(a, MAX_RYSER_COLS, "permanent_ryser")
    n = a.rows
    if n == 0:
        return 1
    masks = a.row_masks
    total = 0
    for subset in range(1, 1 << n):
        prod = 1
        for mask in masks:
            prod *= (mask & subset).bit_count()
            if not prod:
                break
        if (n - subset.bit_count()) & 1:
            total -= prod
        else:
            total += prod
    return total


def count_matchings_via_permanent(a: ZeroOneMatrix) -> int:
    """Total matching count of a square matrix through the permanent route.

    Builds the 2n x 2n block form [[A, I], [J, J]], takes its permanent with
    Ryser, and divides by n!.  Exists as a second, structurally different
    route to the same number as count_all_matchings; n <= MAX_TRANSFORM_SIDE.
    """
    if not a.is_square:
        raise ShapeError(f"permanent route needs a square matrix, got {a.rows}x{a.cols}")
    if a.rows > MAX_TRANSFORM_SIDE:
        raise CapacityError(
            f"permanent route supports n <= {MAX_TRANSFORM_SIDE}, got {a.rows}"
        )
    per = permanent_ryser(build_transformed(a))
    nfact = factorial(a.rows)
    assert per % nfact == 0, f"permanent {per} not divisible by {a.rows}!"
    return per // nfact


def amm_trial_second_moment(a: ZeroOneMatrix) -> int:
    """Exact E[X^2] for the skip-allowing estimator on a fixed matrix.

    At state (i, avail) a trial has q = |row_i & avail| + 1 equally likely
    branches (the skip branch plus one per available 1-column) and multiplies
    its output by q, so the second moment obeys

        V(i, avail) = q * (V(i+1, avail) + sum_j V(i+1, avail minus j))

    with V(m, avail) = 1.  The result is an exact integer.
    """
    _require_cols(a, MAX_RECURSION_COLS, "amm_trial_second_moment")
    masks = a.row_masks
    m = a.rows
    memo: MemoTable = {}

    def value(i: int, avail: int) -> int:
        if i == m:
            return 1
        key = (i, avail)
        hit = memo.get(key)
        if hit is not None:
            return hit
        choices = masks[i] & avail
        q = choices.bit_count() + 1
        total = value(i + 1, avail)
        while choices:
            bit = choices & -choices
            total += value(i + 1, avail ^ bit)
            choices ^= bit
        out = q * total
        memo[key] = out
        return out

    return value(0, (1 << a.cols) - 1)


def rm_trial_second_moment(a: ZeroOneMatrix) -> int:
    """Exact E[Y^2] for the perfect-matching estimator on a square matrix.

    Same shape as the skip-allowing recursion minus the skip branch; a row
    with no available 1-column kills the trial, contributing 0.
    """
    if not a.is_square:
        raise ShapeError(f"rm trials need a square matrix, got {a.rows}x{a.cols}")
    _require_cols(a, MAX_RECURSION_COLS, "rm_trial_second_moment")
    masks = a.row_masks
    m = a.rows
    memo: MemoTable = {}

    def value(i: int, avail: int) -> int:
        if i == m:
            return 1
        key = (i, avail)
        hit = memo.get(key)
        if hit is not None:
            return hit
        choices = masks[i] & avail
        q = choices.bit_count()
        total = 0
        while choices:
            bit = choices & -choices
            total += value(i + 1, avail ^ bit)
            choices ^= bit
        out = q * total
        memo[key] = out
        return out

    return value(0, (1 << a.cols) - 1)


def critical_ratio(a: ZeroOneMatrix, method: Method) -> Fraction:
    """E[X^2] / E[X]^2 for one trial of the chosen estimator on a.

    The mean of the skip-allowing estimator is the total matching count
    (never zero); the mean of the perfect-matching estimator is the
    permanent, and a zero permanent leaves the ratio undefined.
    """
    if method is Method.AMM:
        mean = count_all_matchings(a)
        return Fraction(amm_trial_second_moment(a), mean * mean)
    second = rm_trial_second_moment(a)
    mean = permanent_ryser(a)
    if mean == 0:
        raise UndefinedRatioError("permanent is 0, critical ratio undefined")
    return Fraction(second, mean * mean)
