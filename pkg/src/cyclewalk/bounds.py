"""Moment formulas and total-variation bounds for the cycle-to-transpositions walk.

Everything here is a closed form or a finite sum evaluated at a given
(n, k, t) or (k, c).  Exact values use Fractions; bounds that need square
roots or exponentials are floats.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple, Sequence

from .characters import (
    FeasibilityError,
    cycle_character,
    max_n_table,
    mn_character,
    transposition_normalized,
)
from .partitions import (
    Partition,
    content_sum,
    dimension,
    enumerate_partitions,
    iter_attachments,
    part,
)
from .walk import (
    c_for,
    class_size,
    cycle_sign,
    fixed_points,
    steps_for,
)

LOG_SPACE_STEPS = 1000
EXACT_POWER_STEPS = 12
PMF_TERM_TOL = 1e-12
PMF_MAX_TERMS = 200


@lru_cache(maxsize=None)
def stirling2(r: int, i: int) -> int:
    """Stirling number of the second kind: set partitions of r items into i blocks."""
    if r < 0 or i < 0:
        raise ValueError("stirling2 needs non-negative arguments")
    if r == i:
        return 1
    if r == 0 or i == 0 or i > r:
        return 0
    return i * stirling2(r - 1, i) + stirling2(r - 1, i - 1)


def bell(r: int) -> int:
    return sum(stirling2(r, i) for i in range(r + 1))


def tensor_coeff(lam: Partition, r: int) -> int:
    """Multiplicity of S^lam in the r-th tensor power of the defining representation.

    Valid for 1 <= r <= n - lam_2 only; outside that range it raises.
    """
    n = sum(lam)
    hi = n - part(lam, 1)
    if not 1 <= r <= hi:
        raise ValueError(f"tensor_coeff for {lam} needs 1 <= r <= {hi}, got r={r}")
    rest = lam[1:]
    s = sum(rest)
    return dimension(rest) * sum(comb(i, s) * stirling2(r, i) for i in range(s, r + 1))


def tensor_multiplicity(lam: Partition, r: int) -> int:
    """Same multiplicity as :func:`tensor_coeff` from the character inner product, for any r >= 0."""
    n = sum(lam)
    total = sum(class_size(mu) * fixed_points(mu) ** r * mn_character(lam, mu) for mu in enumerate_partitions(n))
    q, rem = divmod(total, factorial(n))
    if rem:
        raise ArithmeticError(f"non-integral multiplicity for {lam}, r={r}")
    return q


def moment_route_max_r(n: int) -> int:
    """Largest r for which every S^lam inside rho^{(x)r} lies in tensor_coeff's range.

    Only lam with n - lam_1 <= r occur, and each needs r <= n - lam_2.  The
    largest lam_2 among them is min(r, n // 2), so the condition is
    r <= n - min(r, n // 2).
    """
    return max((r for r in range(1, n + 1) if r <= n - min(r, n // 2)), default=0)


def moment_via_tensor(n: int, k: int, t: int, r: int, exact: bool = True):
    """E[fp^r] after the cycle and t transpositions, as sum_lam a_{lam,r} tr(mu_hat(lam))."""
    if not 1 <= r <= moment_route_max_r(n):
        raise ValueError(f"moment route needs 1 <= r <= {moment_route_max_r(n)} at n={n}")
    total = Fraction(0) if exact else []
    for lam in _shapes_with_short_tail(n, r):
        chi = cycle_character(lam, k)
        if chi == 0:
            continue
        a = tensor_coeff(lam, r)
        rr = transposition_normalized(lam)
        if exact:
            total += a * chi * rr**t
        else:
            total.append(a * chi * _power(rr, t))
    return total if exact else math.fsum(total)


def coset_moment(n: int, sign: int, r: int) -> int:
    """E[fp^r] under the uniform law on a coset of A_n: B_r + sign * a_{(1^n), r}."""
    if not 0 <= r <= n - 1:
        raise ValueError(f"coset moment identity needs 0 <= r <= n - 1 = {n - 1}, got r={r}")
    a = tensor_coeff((1,) * n, r) if r >= 1 else 0
    return bell(r) + sign * a


def _shapes_with_short_tail(n: int, r: int):
    """Partitions of n whose rows below the first hold at most r cells."""
    for j in range(0, min(r, n) + 1):
        for nu in enumerate_partitions(j):
            if part(nu, 0) <= n - j:
                yield (n - j,) + nu


def _power(r: Fraction, t: int) -> float:
    x = float(r)
    if t > LOG_SPACE_STEPS and 0 < abs(x) < 1:
        mag = math.exp(t * math.log(abs(x)))
        return -mag if (x < 0 and t % 2) else mag
    return x**t


def moment_k1(r: int, c: float) -> float:
    """Limiting E[fp^r] after an (n-1)-cycle and cn transpositions."""
    if c <= 0:
        raise ValueError("c must be positive")
    if r < 0:
        raise ValueError("r must be non-negative")
    x = math.exp(-2 * c)
    beta = 1 - x
    eta = x / beta
    return math.fsum(stirling2(r, i) * (1 + i * eta) * beta**i for i in range(r + 1))


def moments_k(k: int, c: float) -> tuple[float, float, float | None]:
    """Limiting first, second and (k = 2 only) third moments at t = cn + (n/2) ln k."""
    if k < 2:
        raise ValueError("moments_k needs k >= 2")
    if c <= 0:
        raise ValueError("c must be positive")
    x = math.exp(-2 * c)
    first = 1 + (k - 1) / k * x
    if k == 2:
        second = 2 + 1.5 * x - 0.25 * x**2
        third = 5 + 5 * x - 1.5 * x**2 - x**3 / 8
        return first, second, third
    if k == 3:
        return first, 2 + 2 * x + x**2 / 9, None
    return first, 2 + 3 * (k - 1) / k * x + (k * k - 3 * k + 1) / k**2 * x**2, None


def holder_lower_bound(delta_e: float, pth_moment_sum: float, p: float) -> float:
    """Lower bound on TV from a mean gap and the summed p-th moments of a test statistic.

    Returns (1/2) * delta_e**q / pth_moment_sum**(q - 1) with 1/p + 1/q = 1.
    """
    if pth_moment_sum <= 0:
        raise ValueError("sum of p-th moments must be positive")
    if delta_e < 0:
        raise ValueError("mean gap must be non-negative")
    if not p > 1:
        raise ValueError("p must exceed 1")
    q = p / (p - 1)
    return 0.5 * delta_e**q / pth_moment_sum ** (q - 1)


def theorem_envelopes(k: int, c: float) -> tuple[float, float]:
    """Limiting (lower, upper) TV envelopes: k = 1 after cn steps, k >= 2 after cn + (n/2) ln k."""
    if c <= 0:
        raise ValueError("c must be positive")
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        x = math.exp(-2 * c)
        lower = (1 - math.exp(x) + math.exp(x - 2 * c)) / math.e
        y = math.exp(-4 * c)
        return lower, y / (2 * math.sqrt(1 - y))
    return math.exp(-4 * c) / 12, math.sqrt((math.e - 1) / 2) * math.exp(-2 * c)


class SeriesValue(NamedTuple):
    value: float
    terms: int
    tail_bound: float


def pmf_series(j: int, c: float, truncation: int | None = None) -> SeriesValue:
    """Limiting P(fp = j) for k = 1 as a truncated alternating series.

    Sum over i >= j of (-1)^(i-j) C(i, j) (1 + i eta) beta^i / i!, with
    beta = 1 - e^{-2c}, eta = e^{-2c} / beta.  Stops once the next term is
    below 1e-12 in magnitude (and below 1e-12 times the first term, so
    tiny probabilities keep their relative accuracy), or at
    i = ``truncation`` (default 200).
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    if c <= 0:
        raise ValueError("c must be positive")
    cap = PMF_MAX_TERMS if truncation is None else truncation
    if cap < j:
        raise ValueError("truncation must be at least j")
    x = math.exp(-2 * c)
    beta = 1 - x
    eta = x / beta
    lead = beta**j / factorial(j)

    def term(m: int) -> float:
        # i = j + m; C(i, j) / i! = 1 / (j! m!)
        return (-1) ** m * (1 + (j + m) * eta) * lead * beta**m / factorial(m)

    tol = PMF_TERM_TOL * min(1.0, abs(term(0)))
    terms = []
    m = 0
    while j + m <= cap:
        terms.append(term(m))
        m += 1
        if truncation is None and abs(term(m)) < tol:
            break
    tail = abs(term(m))
    return SeriesValue(math.fsum(terms), len(terms), tail)


def asymptotic_pmf_k1(j: int, c: float, truncation: int | None = None) -> float:
    return pmf_series(j, c, truncation).value


def theorem1_lower_from_pmf(c: float) -> float:
    """|P(no fixed points) - 1/e| in the k = 1 limit."""
    return abs(asymptotic_pmf_k1(0, c) - math.exp(-1))


def _restricted_terms(n: int, k: int, t: int, exact: bool):
    """(chi^2, r^2t) for every nontrivial, non-sign lam with chi^lam(cycle) != 0, when n - k > n/2.

    Such lam are the attachments of an (n-k)-rim hook to some xi of size k,
    and chi^lam(cycle) = +-d_xi.  r(lam) comes from the content sum, which the
    attached hook shifts by a run of consecutive contents.
    """
    m = n - k
    pairs = comb(n, 2)
    for xi in enumerate_partitions(k):
        d2 = dimension(xi) ** 2
        base = content_sum(xi)
        for att in iter_attachments(xi, m):
            contents = base + m * att.lowest_content + comb(m, 2)
            if contents == pairs or contents == -pairs:
                # only (n) and (1^n) reach the extreme content sums
                continue
            r = Fraction(contents, pairs)
            yield d2, (r ** (2 * t) if exact else _power(r, 2 * t))


def _full_terms(n: int, k: int, t: int, exact: bool):
    for lam in enumerate_partitions(n):
        if lam == (n,) or lam == (1,) * n:
            continue
        chi = cycle_character(lam, k)
        if chi == 0:
            continue
        r = transposition_normalized(lam)
        yield chi * chi, (r ** (2 * t) if exact else _power(r, 2 * t))


def ds_sum(n: int, k: int, t: int, exact: bool | None = None):
    """sum over lam != triv, sign of chi^lam(cycle)^2 r(lam)^2t."""
    if n - k < 2 or k < 0:
        raise ValueError(f"need 0 <= k and n - k >= 2, got n={n}, k={k}")
    if t < 0:
        raise ValueError("t must be non-negative")
    if exact is None:
        exact = t <= EXACT_POWER_STEPS
    if 2 * (n - k) > n:
        terms = _restricted_terms(n, k, t, exact)
    else:
        if n > max_n_table():
            raise FeasibilityError(
                f"full enumeration for n - k <= n/2 limited to n <= {max_n_table()}, got n={n}"
            )
        terms = _full_terms(n, k, t, exact)
    if exact:
        return sum((a * b for a, b in terms), Fraction(0))
    return math.fsum(a * b for a, b in terms)


def ds_upper_bound(n: int, k: int, t: int) -> float:
    """Upper bound on TV after the cycle and t transpositions: (1/2) sqrt((1/2) * ds_sum)."""
    return 0.5 * math.sqrt(float(ds_sum(n, k, t)) / 2)


def dim_sum_bound(n: int, lam1: int) -> tuple[int, int]:
    """(sum of d_lam^2 over lam with first row lam1, C(n, lam1)^2 (n - lam1)!)."""
    if not 1 <= lam1 <= n:
        raise ValueError("need 1 <= lam1 <= n")
    lhs = sum(dimension(lam) ** 2 for lam in enumerate_partitions(n) if lam[0] == lam1)
    return lhs, comb(n, lam1) ** 2 * factorial(n - lam1)


def alternating_power_sum(n: int, m: int) -> int:
    return sum((-1) ** (n - k) * comb(n, k) * k**m for k in range(n + 1))


def binomial_reciprocal_sum(n: int, x: float) -> tuple[float, float]:
    """Both sides of sum_k C(n,k) (-x)^(k+2) / (k+2) = ((1-x)^(n+2)-1)/(n+2) - ((1-x)^(n+1)-1)/(n+1)."""
    lhs = math.fsum(comb(n, k) * (-x) ** (k + 2) / (k + 2) for k in range(n + 1))
    rhs = ((1 - x) ** (n + 2) - 1) / (n + 2) - ((1 - x) ** (n + 1) - 1) / (n + 1)
    return lhs, rhs


def stirling_identity_checks(max_n: int = 12, xs: Sequence[float] = (-2.0, 0.3, 1.0, 1.7),
                             tol: float = 1e-10) -> dict[str, bool]:
    """Verify the two summation identities used for the limiting moments.

    ``alternating_power_sum`` must vanish exactly for m < n; the
    reciprocal-binomial identity must hold to ``tol`` relative error.
    """
    power_ok = all(alternating_power_sum(n, m) == 0 for n in range(1, max_n + 1) for m in range(n))
    recip_ok = True
    for n in range(0, max_n + 1):
        for x in xs:
            lhs, rhs = binomial_reciprocal_sum(n, x)
            recip_ok &= abs(lhs - rhs) <= tol * max(1.0, abs(rhs))
    return {"alternating_power_sum": power_ok, "binomial_reciprocal_sum": recip_ok}


@dataclass
class BoundsReport:
    n: int
    k: int
    t: int
    c: float | None
    finite_n_upper: float
    moment_lower: float
    theorem_lower: float | None
    theorem_upper: float | None
    exact_tv: float | None = None
    simulated_stats: dict | None = None
    details: dict = field(default_factory=dict)

    CSV_FIELDS = ("n", "k", "t", "c", "exact_tv", "finite_n_upper", "moment_lower", "theorem_lower", "theorem_upper")

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list:
        return [getattr(self, f) for f in self.CSV_FIELDS]


def finite_moment_lower(n: int, k: int, t: int) -> dict:
    """Moment-based lower bound at finite n with both readings of the 1/2 prefactor.

    Uses p = 3 for k = 2 and p = 2 otherwise, exact chain moments from the
    tensor route and exact coset moments for the stationary law.
    """
    p = 3 if k == 2 else 2
    if moment_route_max_r(n) < p:
        return {"p": p, "lemma": None, "without_half": None}
    sign = cycle_sign((n - k,) + (1,) * k) * (-1) ** t
    e1 = moment_via_tensor(n, k, t, 1, exact=False)
    ep = moment_via_tensor(n, k, t, p, exact=False)
    u1 = coset_moment(n, sign, 1)
    up = coset_moment(n, sign, p)
    gap = max(e1 - u1, 0.0)
    value = holder_lower_bound(gap, ep + up, p)
    return {"p": p, "mean_gap": gap, "moment_sum": ep + up, "lemma": value, "without_half": 2 * value}


def displayed_chain_lower(k: int, c: float) -> dict:
    """The k >= 2 moment bound from limiting moments, with and without the 1/2 prefactor."""
    if k < 2:
        return {}
    first, second, third = moments_k(k, c)
    gap = first - 1
    if k == 2:
        value = holder_lower_bound(gap, third + 5, 3)
    else:
        value = holder_lower_bound(gap, second + 2, 2)
    return {"lemma": value, "without_half": 2 * value}


def bounds_report(n: int, k: int, c: float | None = None, t: int | None = None,
                  exact_tv: float | None = None, simulated_stats: dict | None = None) -> BoundsReport:
    """Collect every bound for one (n, k, t); ``c`` and ``t`` determine each other."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if (c is None) == (t is None):
        raise ValueError("give exactly one of c or t")
    if c is not None:
        if c <= 0:
            raise ValueError("c must be positive")
        t = steps_for(n, k, c)
    else:
        c = c_for(n, k, t)
    lower = upper = None
    if c > 0:
        lower, upper = theorem_envelopes(k, c)
    moment = finite_moment_lower(n, k, t)
    details = {
        "step_rule": "t = round(c*n)" if k == 1 else "t = round(c*n + (n/2)*ln(k))",
        "moment_lower_p": moment["p"],
        "moment_lower_without_half": moment["without_half"],
    }
    if k == 1 and c > 0:
        details["theorem1_lower_from_pmf"] = theorem1_lower_from_pmf(c)
    if k >= 2 and c > 0:
        chain = displayed_chain_lower(k, c)
        details["limit_moment_lower_lemma"] = chain["lemma"]
        details["limit_moment_lower_without_half"] = chain["without_half"]
    return BoundsReport(
        n=n, k=k, t=t, c=c,
        finite_n_upper=ds_upper_bound(n, k, t),
        moment_lower=moment["lemma"] if moment["lemma"] is not None else 0.0,
        theorem_lower=lower, theorem_upper=upper,
        exact_tv=exact_tv, simulated_stats=simulated_stats, details=details,
    )
