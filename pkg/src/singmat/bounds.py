"""Exact evaluation of the closed-form probability bounds.

Everything is computed in rational arithmetic.  Union-bound sums stay
fully exact up to a dimension cutoff; past it, per-term powers are
rounded *up* to 256-significant-bit dyadic rationals (so the result is
still a true upper bound), which keeps numerator sizes tame at any n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import BudgetExceeded, PairingInfeasible
from .matrices import RationalVector
from .models import sample_pairing
from .stats import clopper_pearson

EXACT_UNION_N = 64
ROUND_BITS = 256
ATOM_BERNOULLI_MAX_LEN = 30
ATOM_DP_MAP_BUDGET = 2_000_000
ATOM_COMB_BUDGET = 10**6


@dataclass(frozen=True)
class BoundParams:
    """Parameter bundle for threshold-regime bound evaluation."""

    n: int
    eps: Fraction
    p: Fraction | None = None
    d: int | None = None
    c: Fraction | None = None
    delta: Fraction | None = None

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie strictly between 0 and 1")
        if self.p is not None and not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")

    @property
    def p_star(self) -> Fraction:
        if self.p is None:
            raise ValueError("p_star needs p")
        return min(self.p, 1 - self.p)

    @property
    def r(self) -> Fraction:
        if self.delta is None:
            raise ValueError("r needs delta")
        return self.delta / self.p_star


def p_even(s: int, p) -> Fraction:
    """Probability that a Binomial(s, p) variable is even:
    1/2 + (1-2p)**s / 2, exactly."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    p = Fraction(p)
    return (1 + (1 - 2 * p) ** s) / 2


def _round_up(x: Fraction, bits: int = ROUND_BITS) -> Fraction:
    """Smallest dyadic rational >= x with about ``bits`` significant bits."""
    if x == 0:
        return x
    if x < 0:
        raise ValueError("round-up helper expects nonnegative values")
    shift = bits - (x.numerator.bit_length() - x.denominator.bit_length())
    if shift >= 0:
        num = -((-x.numerator << shift) // x.denominator)
        return Fraction(num, 1 << shift)
    num = -((-x.numerator) // (x.denominator << -shift))
    return Fraction(num << -shift)


def _pow_round_up(base: Fraction, exponent: int, bits: int = ROUND_BITS) -> Fraction:
    """Upper bound on base**exponent by square-and-multiply, rounding up
    after every step."""
    result = Fraction(1)
    b = _round_up(base, bits)
    e = exponent
    while e:
        if e & 1:
            result = _round_up(result * b, bits)
        b = _round_up(b * b, bits)
        e >>= 1
    return result


def union_bound_ber(n: int, p, s_max: int) -> Fraction:
    """Sum over s = 1..s_max of C(n, s) * p_even(s, p)**(n-1).

    Exact for n <= 64; above that every power is rounded up to dyadic
    form, so the value remains a valid upper bound.
    """
    p = Fraction(p)
    if s_max > n:
        raise ValueError("s_max cannot exceed n")
    exact = n <= EXACT_UNION_N
    total = Fraction(0)
    for s in range(1, s_max + 1):
        base = p_even(s, p)
        power = base ** (n - 1) if exact else _pow_round_up(base, n - 1)
        total += comb(n, s) * power
    return total


def union_bound_comb(n: int, p, q: int, s_max: int, P_values: Sequence) -> Fraction:
    """Sum over s = 1..s_max of C(n, s) * q**(s+1) * P_values[s-1]**(n-1),
    with the same round-up policy as union_bound_ber.

    P_values supplies the per-s orthogonality bounds (from exact atom
    enumeration or an analytic surrogate)."""
    if s_max > n:
        raise ValueError("s_max cannot exceed n")
    if len(P_values) < s_max:
        raise ValueError(f"need {s_max} P values, got {len(P_values)}")
    values = [Fraction(v) for v in P_values]
    if any(not 0 <= v <= 1 for v in values):
        raise ValueError("P values must lie in [0, 1]")
    exact = n <= EXACT_UNION_N
    total = Fraction(0)
    for s in range(1, s_max + 1):
        base = values[s - 1]
        power = base ** (n - 1) if exact else _pow_round_up(base, n - 1)
        total += comb(n, s) * q ** (s + 1) * power
    return total


@dataclass(frozen=True)
class AtomResult:
    """Largest point mass of a random weighted sum and where it sits."""

    max_prob: Fraction
    argmax: Fraction | int


def max_atom_bernoulli(x: RationalVector, p) -> AtomResult:
    """Exact maximal atom of x_1 xi_1 + ... + x_n xi_n with i.i.d.
    Bernoulli(p) coefficients, by subset-sum dynamic programming over
    the distinct reachable sums."""
    if x.length > ATOM_BERNOULLI_MAX_LEN:
        raise BudgetExceeded(
            f"vector length {x.length} exceeds DP budget {ATOM_BERNOULLI_MAX_LEN}"
        )
    p = Fraction(p)
    dist: dict[Fraction, Fraction] = {Fraction(0): Fraction(1)}
    for xi in x.entries:
        new: dict[Fraction, Fraction] = {}
        for value, prob in dist.items():
            lo = prob * (1 - p)
            hi = prob * p
            new[value] = new.get(value, Fraction(0)) + lo
            shifted = value + xi
            new[shifted] = new.get(shifted, Fraction(0)) + hi
        if len(new) > ATOM_DP_MAP_BUDGET:
            raise BudgetExceeded("distinct-sum map exceeded its budget")
        dist = new
    best = max(dist.values())
    argmax = min(v for v, pr in dist.items() if pr == best)
    return AtomResult(best, argmax)


def max_atom_combinatorial(x: RationalVector, d: int, modulus: int | None = None) -> AtomResult:
    """Exact maximal atom of x . gamma for gamma a uniform d-subset
    indicator, optionally with sums reduced mod q, by full enumeration
    of all C(n, d) subsets."""
    n = x.length
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    total = comb(n, d)
    if total > ATOM_COMB_BUDGET:
        raise BudgetExceeded(f"C({n},{d}) = {total} exceeds budget {ATOM_COMB_BUDGET}")
    if modulus is not None:
        entries: Sequence = x.integer_entries()
    else:
        entries = x.entries
    counts: dict = {}
    for subset in combinations(range(n), d):
        value = sum(entries[i] for i in subset)
        if modulus is not None:
            value %= modulus
        counts[value] = counts.get(value, 0) + 1
    best = max(counts.values())
    argmax = min(v for v, c in counts.items() if c == best)
    return AtomResult(Fraction(best, total), argmax)


def binomial_point_mass(n: int, p, d: int) -> Fraction:
    """C(n, d) p**d (1-p)**(n-d), exactly."""
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    p = Fraction(p)
    return comb(n, d) * p**d * (1 - p) ** (n - d)


@dataclass(frozen=True)
class DisagreementEstimate:
    """Monte Carlo estimate of the probability that some random pair
    straddles two fibres of a fixed vector."""

    hits: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float

    @property
    def ci_halfwidth(self) -> float:
        return (self.ci_high - self.ci_low) / 2


def pairing_disagreement_prob(
    v: RationalVector, n: int, d: int, trials: int, seed: int
) -> DisagreementEstimate:
    """Estimate the probability that at least one of d random disjoint
    pairs (i, j) has v_i != v_j, with a 99% Clopper-Pearson interval."""
    if v.length != n:
        raise ValueError("vector length must equal n")
    if 2 * d > n:
        raise PairingInfeasible(f"cannot place {2 * d} distinct indices in [0, {n})")
    if trials < 1:
        raise ValueError("trials must be positive")
    from .rng import derive_seed

    entries = v.entries
    hits = 0
    for t in range(trials):
        pairing = sample_pairing(n, d, derive_seed(seed, t))
        if any(entries[i] != entries[j] for i, j in pairing.pairs):
            hits += 1
    lo, hi = clopper_pearson(hits, trials, confidence=0.99)
    return DisagreementEstimate(hits, trials, hits / trials, lo, hi)
