"""Numerical tolerance profiles.

The active profile is chosen with the ``PORISM_TOLERANCE_PROFILE``
environment variable (``default`` or ``strict``).
"""

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    geometry: float = 1e-10
    classification: float = 1e-7
    through_center: float = 1e-9   # relative to the inversion radius
    stationary: float = 1e-9
    segment: float = 1e-8
    circle: float = 1e-7
    conic: float = 1e-6
    rank_separation: float = 1e-9
    relative_floor: float = 1e-30

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(geometry=1e-12, classification=1e-9, stationary=1e-11,
                         segment=1e-10, circle=1e-9, conic=1e-8),
}


def active_profile():
    name = os.environ.get("PORISM_TOLERANCE_PROFILE", "default").strip().lower()
    if name not in PROFILES:
        raise ValueError(f"unknown tolerance profile {name!r}; expected one of {sorted(PROFILES)}")
    return PROFILES[name]


DEFAULT = PROFILES["default"]
