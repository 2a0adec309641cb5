"""Closed-form bounds, all in exact integer arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class BoundsReport:
    formula_name: str
    argument: int
    value: int

    def __str__(self) -> str:
        return str(self.value)


def bichromatic_upper(g: int) -> int:
    """Upper bound on the bichromatic number of the orientable surface S_g.

    floor((13 + sqrt(73 + 96 g)) / 2).  Replacing the square root by its
    integer floor does not change the outer floor since 13 is an integer.
    """
    if g < 1:
        raise DomainError(f"the bichromatic bound needs genus g >= 1, got {g}")
    return (13 + isqrt(73 + 96 * g)) // 2


def bigenus_lower(n: int) -> int:
    """ceil((n^2 - 13 n + 24) / 24), rounding toward +infinity for any sign."""
    if n < 1:
        raise DomainError(f"vertex count must be positive, got {n}")
    return -(-(n * n - 13 * n + 24) // 24)


def b_of_s(s: int) -> int:
    """Common genus of the triangular biembedding of K_{24s+21}."""
    if s < 0:
        raise DomainError(f"family parameter must be nonnegative, got {s}")
    return 24 * s * s + 29 * s + 8


def edge_bound(v: int, g: int) -> int:
    """Most edges a simple graph on v vertices can have in S_g."""
    if v < 3:
        raise DomainError(f"the edge bound needs at least 3 vertices, got {v}")
    if g < 0:
        raise DomainError(f"genus must be nonnegative, got {g}")
    return 3 * v - 6 + 6 * g


FORMULAS = {
    "bichromatic": bichromatic_upper,
    "bigenus-lower": bigenus_lower,
    "b-of-s": b_of_s,
}


def report(formula_name: str, argument: int) -> BoundsReport:
    return BoundsReport(formula_name, argument, FORMULAS[formula_name](argument))
