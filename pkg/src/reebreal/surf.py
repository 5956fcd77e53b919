"""Closed surfaces by orientability and genus; Euler characteristic arithmetic."""

from __future__ import annotations

import re
from dataclasses import dataclass


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SurfaceDescriptor:
    """``Sigma_g`` (orientable, g >= 0) or ``S_g`` (non-orientable, g >= 1)."""

    orientable: bool
    genus: int

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise SurfaceError("genus must be non-negative")
        if not self.orientable and self.genus < 1:
            raise SurfaceError("non-orientable surfaces have genus >= 1")

    @property
    def is_sphere(self) -> bool:
        return self.orientable and self.genus == 0

    def spelling(self) -> str:
        return f"{self.genus}{'+' if self.orientable else '-'}"

    def __str__(self) -> str:
        return f"{'Sigma' if self.orientable else 'S'}_{self.genus}"


SPHERE = SurfaceDescriptor(True, 0)

_SPELLING = re.compile(r"^\s*(?:S_)?(\d+)\s*([+-])\s*$")


def parse_surface(text: str) -> SurfaceDescriptor:
    """Parse ``"2+"`` (Sigma_2) or ``"3-"`` (S_3); an ``S_`` prefix is allowed."""
    m = _SPELLING.match(text)
    if m is None:
        raise SurfaceError(f"bad surface spelling {text!r}; expected e.g. '2+' or '3-'")
    return SurfaceDescriptor(m.group(2) == "+", int(m.group(1)))


def euler_characteristic(s: SurfaceDescriptor) -> int:
    return 2 - 2 * s.genus if s.orientable else 2 - s.genus


def reeb_number(s: SurfaceDescriptor) -> int:
    """Largest cycle count of a Reeb graph on ``s``: g, or floor(g/2)."""
    return s.genus if s.orientable else s.genus // 2


def surface_from_chi(chi: int, orientable: bool) -> SurfaceDescriptor:
    if chi > 2:
        raise SurfaceError(f"no closed surface has chi = {chi} > 2")
    if orientable:
        if chi % 2:
            raise SurfaceError("odd χ for orientable surface")
        return SurfaceDescriptor(True, (2 - chi) // 2)
    if chi > 1:
        raise SurfaceError("non-orientable closed surfaces have chi <= 1")
    return SurfaceDescriptor(False, 2 - chi)


def chi_block(k_minus: int, k_plus: int, t: int = 0, r: int = 0) -> int:
    """Euler characteristic of a vertex block with one critical level.

    ``k_minus`` lower and ``k_plus`` upper boundary circles, ``t`` extra
    handle pairs (orientable padding) or ``r`` orientation-reversing
    1-handles. The two paddings are never combined in one block.
    """
    if k_minus < 1 or k_plus < 1:
        raise SurfaceError("interior blocks need k_minus >= 1 and k_plus >= 1")
    if t < 0 or r < 0:
        raise SurfaceError("t and r must be non-negative")
    if r > 0 and t > 0:
        raise SurfaceError("cross handles (r) are only added to t = 0 blocks")
    return 2 - (k_minus + k_plus + 2 * t) - r
