"""Genus bookkeeping for curves linked by a complete intersection."""

from __future__ import annotations

from dataclasses import dataclass


class LinkageError(ValueError):
    """The data cannot come from a linkage (non-integral residual genus)."""


@dataclass(frozen=True)
class LinkageData:
    a: int
    b: int
    deg: int
    genus: int
    residual_deg: int
    residual_genus: int


def residual(a: int, b: int, deg: int, genus: int) -> tuple[int, int]:
    """(deg C', g(C')) for C' residual to C in a complete intersection of type (a, b)."""
    if a < 1 or b < 1:
        raise LinkageError("surface degrees must be positive")
    if a * b <= deg:
        raise LinkageError(f"complete intersection of degree {a * b} cannot contain a curve of degree {deg}")
    rdeg = a * b - deg
    num = (a + b - 4) * (deg - rdeg)
    if num % 2:
        raise LinkageError("invalid linkage data: residual genus is not an integer")
    return rdeg, genus - num // 2


def link(a: int, b: int, deg: int, genus: int) -> LinkageData:
    rdeg, rg = residual(a, b, deg, genus)
    return LinkageData(a, b, deg, genus, rdeg, rg)
