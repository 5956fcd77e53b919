"""Decide whether an oriented graph is the Reeb graph of a function on a surface.

Negative answers are data: every decider returns a verdict with an
obstruction instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .graphcore import OrientedMultigraph, betti1, degree_profile, delta2, is_gamma0
from .orient import check_good, find_directed_cycle
from .surf import SurfaceDescriptor, reeb_number

FINITE = "finite-critical"
MORSE = "morse"
HOMEOMORPHIC_ONLY = "homeomorphic-only"
NONE = "none"

NO_GOOD_ORIENTATION = "no-good-orientation"
ORIENTED_CYCLE = "oriented-cycle"
BETTI_EXCEEDS = "betti-exceeds-reeb-number"
GENUS_TOO_SMALL = "genus-too-small"
GAMMA0_NEEDS_SPHERE = "gamma0-needs-sphere"


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: bool
    function_class: str
    obstruction: Optional[str] = None
    deficit: Optional[int] = None
    padding: Dict[str, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        obj: dict = {"realizable": self.realizable, "function_class": self.function_class}
        if self.obstruction is not None:
            obj["obstruction"] = self.obstruction
        if self.deficit is not None:
            obj["deficit"] = self.deficit
        if self.padding:
            obj["padding"] = dict(self.padding)
        return obj


def _no(obstruction: str, deficit: Optional[int] = None) -> RealizabilityVerdict:
    return RealizabilityVerdict(False, NONE, obstruction, deficit)


def _gamma0(s: SurfaceDescriptor, function_class: str) -> RealizabilityVerdict:
    # two critical points force the sphere
    if s.is_sphere:
        return RealizabilityVerdict(True, function_class)
    return _no(GAMMA0_NEEDS_SPHERE)


def _finite_padding(b1: int, s: SurfaceDescriptor) -> Dict[str, int]:
    # extra genus goes into one vertex block: t pairs or r cross handles
    if s.orientable:
        t0 = s.genus - b1
        return {"t0": t0} if t0 > 0 else {}
    r0 = s.genus - 2 * b1
    return {"r0": r0} if r0 > 0 else {}


def decide_finite(g: OrientedMultigraph, s: SurfaceDescriptor) -> RealizabilityVerdict:
    """Realizability by a function with finitely many critical points."""
    if is_gamma0(g):
        return _gamma0(s, FINITE)
    if not g.is_connected() or not check_good(g).good:
        return _no(NO_GOOD_ORIENTATION)
    b1 = betti1(g)
    if b1 > reeb_number(s):
        return _no(BETTI_EXCEEDS)
    return RealizabilityVerdict(True, FINITE, padding=_finite_padding(b1, s))


def morse_minimum_genus(g: OrientedMultigraph, orientable: bool) -> int:
    """Smallest genus carrying a Morse function with Reeb graph ``g``."""
    b1, d2 = betti1(g), delta2(g)
    return b1 + d2 if orientable else max(1, 2 * b1 + d2)


def decide_morse(g: OrientedMultigraph, s: SurfaceDescriptor) -> RealizabilityVerdict:
    """Realizability by a Morse function; degree-2 vertices cost genus."""
    if is_gamma0(g):
        return _gamma0(s, MORSE)
    if not g.is_connected() or not check_good(g).good:
        return _no(NO_GOOD_ORIENTATION)
    b1, d2 = betti1(g), delta2(g)
    need = b1 + d2 if s.orientable else 2 * b1 + d2
    if s.genus < need:
        deficit = need - s.genus
        if b1 > reeb_number(s):
            return _no(BETTI_EXCEEDS, deficit)
        return _no(GENUS_TOO_SMALL, deficit)
    if d2 == 0:
        padding = _finite_padding(b1, s)
    elif s.genus > need:
        key = "t0" if s.orientable else "r0"
        padding = {key: s.genus - need + 1}
    else:
        padding = {}
    return RealizabilityVerdict(True, MORSE, padding=padding)


def has_mixed_vertex(g: OrientedMultigraph) -> bool:
    """Some vertex has both an incoming and an outgoing edge."""
    for v in g.vertices:
        p = degree_profile(g, v)
        if p.deg_in and p.deg_out:
            return True
    return False


def decide_acyclic_orientation(
    g: OrientedMultigraph, s: SurfaceDescriptor
) -> RealizabilityVerdict:
    """Realizability of an acyclic, not necessarily good, orientation.

    All-in or all-out vertices of degree >= 2 are allowed; they are realized
    by blocks with infinitely many critical points on one level.
    """
    if not g.is_connected() or len(g.vertices) < 2:
        return _no(NO_GOOD_ORIENTATION)
    if find_directed_cycle(g) is not None:
        return _no(ORIENTED_CYCLE)
    if check_good(g).good:
        return decide_finite(g, s)
    b1 = betti1(g)
    if b1 > reeb_number(s):
        return _no(BETTI_EXCEEDS)
    cls = FINITE if has_mixed_vertex(g) else HOMEOMORPHIC_ONLY
    return RealizabilityVerdict(True, cls, padding=_finite_padding(b1, s))


DECIDERS = {
    "finite": decide_finite,
    "morse": decide_morse,
    "acyclic": decide_acyclic_orientation,
}
