from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from oracle.services import default_oracle, pi_enclosure

from .models import BoundClass

logger = logging.getLogger(__name__)


class ContinuedFractionTooShort(ValueError):
    pass


def continued_fraction(x: Fraction | int) -> list[int]:
    """Partial quotients of a rational; the expansion always terminates."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    terms = []
    while den:
        a = num // den
        terms.append(a)
        num, den = den, num - a * den
    return terms


def convergents(terms: list[int] | tuple[int, ...]) -> list[Fraction]:
    """p_k = a_k p_{k-1} + p_{k-2}, q_k likewise, from p_{-1}/q_{-1} = 1/0."""
    out: list[Fraction] = []
    p_prev, q_prev = 1, 0
    p, q = terms[0] if terms else 0, 1
    for index, a in enumerate(terms):
        if index:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        out.append(Fraction(p, q))
    return out


@dataclass(frozen=True)
class CFExpansion:
    terms: tuple[int, ...]
    convergents: tuple[Fraction, ...]

    @classmethod
    def from_terms(cls, terms: list[int] | tuple[int, ...]) -> CFExpansion:
        return cls(terms=tuple(terms), convergents=tuple(convergents(terms)))


def _certain_terms(lo: Fraction, hi: Fraction, limit: int) -> list[int]:
    """
    Terms shared by every real in [lo, hi], at most `limit` of them.

    After taking the common integer part a the interval maps to
    [1/(hi - a), 1/(lo - a)]; reciprocation swaps the ends.
    """
    terms: list[int] = []
    while len(terms) < limit:
        a = math.floor(lo)
        if math.floor(hi) != a:
            break
        terms.append(a)
        lo_frac, hi_frac = lo - a, hi - a
        if lo_frac <= 0:
            break
        lo, hi = 1 / hi_frac, 1 / lo_frac
    return terms


def pi_continued_fraction(k: int, *, start_digits: int | None = None) -> CFExpansion:
    """
    First k partial quotients of pi, each certified by an enclosure whose
    whole range shares it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    oracle = default_oracle()
    digits = min(start_digits or oracle.start_digits, oracle.max_digits)
    while True:
        enc = pi_enclosure(digits)
        terms = _certain_terms(enc.lo.to_fraction(), enc.hi.to_fraction(), k)
        if len(terms) >= k:
            return CFExpansion.from_terms(terms)
        logger.debug("only %s of %s pi terms certain at digits=%s", len(terms), k, digits)
        digits = oracle.escalate(digits)


def semiconvergents(cf: CFExpansion) -> list[Fraction]:
    """
    (p_{k-1} j + p_{k-2}) / (q_{k-1} j + q_{k-2}) for 1 <= j < a_k.

    Every j in that range is included, without the a_k/2 admissibility rule.
    """
    out: list[Fraction] = []
    p_prev2, q_prev2 = 1, 0
    p_prev, q_prev = cf.terms[0], 1
    for a in cf.terms[1:]:
        for j in range(1, a):
            out.append(Fraction(p_prev * j + p_prev2, q_prev * j + q_prev2))
        p_prev, p_prev2 = a * p_prev + p_prev2, p_prev
        q_prev, q_prev2 = a * q_prev + q_prev2, q_prev
    return out


def classify_bound(r: Fraction, cf: CFExpansion) -> str:
    r = Fraction(r)
    if not cf.convergents or cf.convergents[-1].denominator <= r.denominator:
        raise ContinuedFractionTooShort(
            f"Need convergents past denominator {r.denominator}; have {len(cf.terms)} terms."
        )
    if r in cf.convergents:
        return BoundClass.CONVERGENT
    if r in semiconvergents(cf):
        return BoundClass.SEMICONVERGENT
    return BoundClass.OTHER
