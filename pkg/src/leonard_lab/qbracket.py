"""β extraction and odd q-brackets, computed without ever forming q.

With ``β = q² + q⁻²`` every odd bracket ``[n]_q`` is an integer polynomial
in β, given by ``[n+2] = β[n] − [n−2]`` from ``[−1] = −1, [1] = 1``.
Ratios ``[j−i]_q / [s−r]_q`` with odd differences therefore live in the
base field too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BracketVanished, EvenIndexUnsupported, NotEnoughTerms, RatioInconsistent
from .scalar import FieldElement

DEFAULT_BETA = 2


@dataclass(frozen=True)
class BetaContext:
    d: int
    beta: FieldElement
    derived: bool = True  # False when β was a free choice (d <= 2)

    @property
    def field(self):
        return self.beta.field


def ratio_windows(eigs: Sequence[FieldElement]) -> list[FieldElement]:
    """The values (θ_{i−2} − θ_{i+1}) / (θ_{i−1} − θ_i) for 2 <= i <= d−1."""
    d = len(eigs) - 1
    return [(eigs[i - 2] - eigs[i + 1]) / (eigs[i - 1] - eigs[i]) for i in range(2, d)]


def beta_of(eigs: Sequence[FieldElement]) -> BetaContext:
    d = len(eigs) - 1
    if d < 3:
        raise NotEnoughTerms(f"β is only determined for d >= 3 (got d={d})")
    for i in range(1, d + 1):
        if (eigs[i - 1] - eigs[i]).is_zero():
            raise RatioInconsistent(i, f"consecutive eigenvalues {i - 1},{i} coincide")
    windows = ratio_windows(eigs)
    for offset, value in enumerate(windows[1:], start=3):
        if value != windows[0]:
            raise RatioInconsistent(offset, f"ratio at i={offset} is {value}, expected {windows[0]}")
    return BetaContext(d, windows[0] - 1)


def context_for(eigs: Sequence[FieldElement], beta=None) -> BetaContext:
    """β from the sequence when d >= 3, otherwise the supplied or default choice."""
    d = len(eigs) - 1
    if d >= 3:
        ctx = beta_of(eigs)
        if beta is not None and ctx.beta != ctx.field(beta):
            raise RatioInconsistent(2, f"supplied β={beta} disagrees with derived {ctx.beta}")
        return ctx
    field = eigs[0].field
    return BetaContext(d, field(DEFAULT_BETA if beta is None else beta), derived=False)


def q_bracket_odd(n: int, ctx: BetaContext) -> FieldElement:
    if n < 1 or n % 2 == 0:
        raise EvenIndexUnsupported(f"[{n}]_q: only odd positive indices are supported")
    prev, cur = -ctx.field.one, ctx.field.one
    for _ in range((n - 1) // 2):
        prev, cur = cur, ctx.beta * cur - prev
    return cur


def odd_bracket_polynomial(n: int) -> list[int]:
    """Integer coefficients (constant first) of [n]_q as a polynomial in β."""
    if n < 1 or n % 2 == 0:
        raise EvenIndexUnsupported(f"[{n}]_q: only odd positive indices are supported")
    prev, cur = [-1], [1]
    for _ in range((n - 1) // 2):
        shifted = [0] + cur
        nxt = [shifted[k] - (prev[k] if k < len(prev) else 0) for k in range(len(shifted))]
        prev, cur = cur, nxt
    return cur


def assert_odd_brackets_nonzero(d: int, ctx: BetaContext) -> list[FieldElement]:
    """Check [i]_q != 0 for odd i <= d; returns the bracket values."""
    values = []
    for i in range(1, d + 1, 2):
        v = q_bracket_odd(i, ctx)
        if v.is_zero():
            raise BracketVanished(i)
        values.append(v)
    return values


def bracket_ratio(num: int, den: int, ctx: BetaContext) -> FieldElement:
    return q_bracket_odd(num, ctx) / q_bracket_odd(den, ctx)
