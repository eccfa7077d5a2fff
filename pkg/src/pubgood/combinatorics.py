"""Exact binomial and hypergeometric primitives.

Everything here returns ``int`` or :class:`fractions.Fraction`. Out-of-range
binomial coefficients are 0, so sums whose index bounds overshoot the support
simply pick up vanishing terms.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Fraction",
    "to_rational",
    "binom",
    "binomial_pmf",
    "hypergeom_pmf",
    "log_binom",
    "binomial_pmf_float",
    "hypergeom_pmf_float",
]


def to_rational(value) -> Fraction:
    """Parse ``value`` ("p/q", "0.25", int, Fraction) into an exact Fraction.

    Floats are rejected: a binary float is rarely the number the user meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def binom(n: int, r: int) -> int:
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def _check_prob(p: Fraction) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")


def _binomial_pmf(j: int, n: int, p: Fraction) -> Fraction:
    # unchecked; callers guarantee 0 <= p <= 1
    if j < 0 or j > n:
        return Fraction(0)
    return binom(n, j) * p**j * (1 - p) ** (n - j)


def binomial_pmf(j: int, n: int, p) -> Fraction:
    """C(n, j) p^j (1-p)^(n-j), and 0 for j outside {0, ..., n}."""
    p = to_rational(p)
    _check_prob(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    return _binomial_pmf(j, n, p)


def _hypergeom(k_s: int, j: int, n: int, k: int) -> Fraction:
    """Probability that ``k`` audits among ``n`` agents, ``j`` of whom
    contributed, land on exactly ``k_s`` non-contributors.

    Unchecked: allows k = 0 and n = 0, which the audited branches of the
    agent utilities need (k-1 audits among n-1 other agents).
    """
    total = binom(n, k)
    if total == 0:
        return Fraction(0)
    return Fraction(binom(j, k - k_s) * binom(n - j, k_s), total)


def hypergeom_pmf(k_s: int, j: int, n: int, k: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be positive")
    if not 1 <= k <= n:
        raise ValueError(f"audit count k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if not 0 <= j <= n:
        raise ValueError(f"contributor count j must satisfy 0 <= j <= n, got j={j}")
    return _hypergeom(k_s, j, n, k)


# Float fast path. Display and sampling only, never verification.

def log_binom(n: int, r: int) -> float:
    if r < 0 or n < 0 or r > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)


def binomial_pmf_float(j: int, n: int, p: float) -> float:
    if j < 0 or j > n:
        return 0.0
    if p == 0.0:
        return 1.0 if j == 0 else 0.0
    if p == 1.0:
        return 1.0 if j == n else 0.0
    return math.exp(log_binom(n, j) + j * math.log(p) + (n - j) * math.log1p(-p))


def hypergeom_pmf_float(k_s: int, j: int, n: int, k: int) -> float:
    num = log_binom(j, k - k_s) + log_binom(n - j, k_s)
    if num == -math.inf:
        return 0.0
    return math.exp(num - log_binom(n, k))
