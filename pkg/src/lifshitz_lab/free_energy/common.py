"""Report types shared by the free-energy representations."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..model import ModelParams


class Representation(enum.Enum):
    MATSUBARA = "matsubara"
    REAL_FREQUENCY = "real"
    ABEL_PLANA = "abel-plana"


def _plain(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.complexfloating):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


@dataclass
class FreeEnergyReport:
    """Free energy per unit area and its parts.

    ``total`` is E0 + thermal when the vacuum part is available, otherwise
    None.  ``breakdown`` holds per-polarisation pieces and any subtracted
    L-independent terms.
    """

    representation: Representation
    params: ModelParams
    model: str
    thermal_part: complex
    vacuum_part: float | None = None
    total: complex | None = None
    error_estimate: float = 0.0
    breakdown: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        d = {
            "representation": self.representation.value,
            "model": self.model,
            "params": asdict(self.params),
            "thermal_part": self.thermal_part,
            "vacuum_part": self.vacuum_part,
            "total": self.total,
            "error_estimate": self.error_estimate,
            "breakdown": self.breakdown,
            "notes": list(self.notes),
        }
        return _plain(d)
