"""The five realizable gain/loss arrangements of a two-guide coupler.

Each arrangement fixes the raw per-guide complex refractive indices from a
small set of positive magnitudes (gain enters as a negative imaginary part,
loss as a positive one), and maps them onto the effective parameters that
drive propagation:

    kind          guide 1           guide 2           gamma              beta
    ------------  ----------------  ----------------  -----------------  ------------------
    gain-loss     nr - i ni         nr + i ni         -ni/g              0
    gain-gain     nr - i ni1        nr - i ni2        (ni2 - ni1)/(2g)   (ni1 + ni2)/(2g)
    gain-passive  nr - i ni         nr                -ni/(2g)           ni/(2g)
    passive-loss  nr                nr + i ni         -ni/(2g)           -ni/(2g)
    loss-loss     nr + i ni1        nr + i ni2        (ni1 - ni2)/(2g)   -(ni1 + ni2)/(2g)

Here gamma = Im((n1 - n2)/(2g)) is the gain-loss asymmetry and
beta = -Im((n1 + n2)/(2g)) the global envelope rate, so beta is positive
whenever the pair has net gain.  Note the sign bookkeeping: negative gamma
means the amplified guide is guide 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import EffectiveParams


class Kind(enum.Enum):
    GAIN_LOSS = "gain-loss"
    GAIN_GAIN = "gain-gain"
    GAIN_PASSIVE = "gain-passive"
    PASSIVE_LOSS = "passive-loss"
    LOSS_LOSS = "loss-loss"


# Kinds using a single imaginary magnitude `ni` versus the pair `ni1, ni2`.
_SINGLE_MAGNITUDE = (Kind.GAIN_LOSS, Kind.GAIN_PASSIVE, Kind.PASSIVE_LOSS)
_PAIR_MAGNITUDE = (Kind.GAIN_GAIN, Kind.LOSS_LOSS)

# Kinds whose gamma sign is forced (always negative: gain or the lossier
# guide sits first).  The two-magnitude kinds reach both signs.
_FORCED_NEGATIVE = (Kind.GAIN_LOSS, Kind.GAIN_PASSIVE, Kind.PASSIVE_LOSS)


class UnreachableGammaError(ValueError):
    """Requested asymmetry sign cannot be realized by the given kind."""


def _positive(value: float | None, name: str) -> float:
    if value is None:
        raise ValueError(f"{name} is required for this kind")
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class DimerRealization:
    """Raw description of one physical device.

    Magnitudes are all strictly positive; which of ni / ni1 / ni2 apply
    depends on the kind (see the module table).  Fields that the kind does
    not use are ignored.
    """

    kind: Kind
    nr: float
    g: float
    ni: float | None = None
    ni1: float | None = None
    ni2: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, Kind):
            raise ValueError(f"kind must be a Kind, got {self.kind!r}")
        _positive(self.nr, "nr")
        _positive(self.g, "g")
        if self.kind in _SINGLE_MAGNITUDE:
            _positive(self.ni, "ni")
        else:
            _positive(self.ni1, "ni1")
            _positive(self.ni2, "ni2")


def raw_indices(realization: DimerRealization) -> tuple[complex, complex]:
    """Complex refractive indices (n1, n2) of the two guides."""
    r = realization
    if r.kind is Kind.GAIN_LOSS:
        return complex(r.nr, -r.ni), complex(r.nr, r.ni)
    if r.kind is Kind.GAIN_GAIN:
        return complex(r.nr, -r.ni1), complex(r.nr, -r.ni2)
    if r.kind is Kind.GAIN_PASSIVE:
        return complex(r.nr, -r.ni), complex(r.nr, 0.0)
    if r.kind is Kind.PASSIVE_LOSS:
        return complex(r.nr, 0.0), complex(r.nr, r.ni)
    if r.kind is Kind.LOSS_LOSS:
        return complex(r.nr, r.ni1), complex(r.nr, r.ni2)
    raise ValueError(f"unknown kind {r.kind!r}")


def effective_params(realization: DimerRealization) -> EffectiveParams:
    """Effective detuning, bias, asymmetry and envelope rate of the device."""
    n1, n2 = raw_indices(realization)
    two_g = 2.0 * realization.g
    n = (n1 - n2) / two_g
    n0 = (n1 + n2) / two_g
    return EffectiveParams.from_detuning(n, n0)


def realization_for_gamma(
    kind: Kind, gamma_target: float, nr: float = 1.5, g: float = 1.0
) -> DimerRealization:
    """Invert the asymmetry: build a device whose effective gamma is the target.

    For the single-magnitude kinds the inversion is unique and only negative
    targets are reachable.  For gain-gain and loss-loss one magnitude is free;
    the tie is broken by putting the smaller magnitude at g*|gamma| and the
    larger at 3*g*|gamma|, assigning them to the guides so that the requested
    sign comes out.  Raises UnreachableGammaError for an impossible sign.
    """
    gamma_target = float(gamma_target)
    if not math.isfinite(gamma_target) or gamma_target == 0.0:
        raise ValueError(f"gamma target must be nonzero and finite, got {gamma_target!r}")
    nr = _positive(nr, "nr")
    g = _positive(g, "g")
    mag = abs(gamma_target)

    if kind in _FORCED_NEGATIVE:
        if gamma_target > 0.0:
            raise UnreachableGammaError(
                f"{kind.value} only realizes negative gamma, got {gamma_target!r}"
            )
        scale = 1.0 if kind is Kind.GAIN_LOSS else 2.0
        return DimerRealization(kind=kind, nr=nr, g=g, ni=scale * g * mag)

    low, high = g * mag, 3.0 * g * mag
    if kind is Kind.GAIN_GAIN:
        # gamma = (ni2 - ni1) / (2 g): the more strongly pumped guide carries
        # the larger magnitude.
        ni1, ni2 = (low, high) if gamma_target > 0.0 else (high, low)
        return DimerRealization(kind=kind, nr=nr, g=g, ni1=ni1, ni2=ni2)
    if kind is Kind.LOSS_LOSS:
        # gamma = (ni1 - ni2) / (2 g), mirrored relative to gain-gain.
        ni1, ni2 = (low, high) if gamma_target < 0.0 else (high, low)
        return DimerRealization(kind=kind, nr=nr, g=g, ni1=ni1, ni2=ni2)
    raise ValueError(f"unknown kind {kind!r}")


def conventional_gamma(kind: Kind, magnitude: float) -> float:
    """Signed gamma a kind realizes by default for a given |gamma|.

    Gain-gain devices are quoted with the stronger pump in guide 2 (positive
    gamma); every other kind puts the amplified or less lossy guide first
    (negative gamma).
    """
    magnitude = abs(float(magnitude))
    if magnitude == 0.0 or not math.isfinite(magnitude):
        raise ValueError(f"|gamma| must be nonzero and finite, got {magnitude!r}")
    return magnitude if kind is Kind.GAIN_GAIN else -magnitude


def preset_realization(
    kind: Kind, gamma: float, nr: float = 1.5, g: float = 1.0
) -> DimerRealization:
    """Realization for CLI-style presets: a positive gamma that the kind
    cannot reach is read as a magnitude and given the conventional sign."""
    try:
        return realization_for_gamma(kind, gamma, nr, g)
    except UnreachableGammaError:
        if gamma > 0.0:
            return realization_for_gamma(kind, conventional_gamma(kind, gamma), nr, g)
        raise
