"""Vacuum, single-photon and two-photon observables of active dimers.

Everything here reduces to integrals of transfer-matrix elements against the
exponential envelope exp(2 beta t):

    spontaneous numbers     n_j = sum_k w_k Int_0^zeta |U_jk(t)|^2 e^{2 beta t} dt
    vacuum cross moment     n12 = sum_k w_k Int_0^zeta U_1k*(t) U_2k(t) e^{2 beta t} dt

with per-kind pump weights w_k fed by the amplifying guides only:

    gain-loss      (-2 gamma, 0)                  (beta = 0, gamma < 0)
    gain-gain      (2 (beta - gamma), 2 (beta + gamma))
    gain-passive   (-4 gamma, 0)                  (beta = -gamma)
    passive-loss   (0, 0)
    loss-loss      (0, 0)

Single-photon and two-photon inputs add stimulated terms built from the
transfer matrix at the end point.  The integrands are entire functions of t,
so an adaptive Gauss-Kronrod rule converges fast; scipy's quad_vec evaluates
all needed components in one pass.

Absolute photon numbers in amplifying devices grow without bound in this
linear model.  Functions returning them reject evaluation once the predicted
integrand magnitude exceeds ``max_magnitude`` (default 1e12), beyond which
raw numbers are physically meaningless (a real device saturates first).
Scale-invariant ratios (renormalized shares and the correlation parameters
q00 / q2002) remain well defined, so those paths evaluate unguarded; pass
``max_magnitude=None`` to lift the guard explicitly elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad_vec

from .configurations import Kind
from .core import EffectiveParams, propagator_entries

QUAD_ABS_TOL = 1e-10
QUAD_REL_TOL = 1e-11
QUAD_MAX_PANELS = 2**16

GROWTH_GUARD_MAX = 1e12

# Slack allowed when validating the Cauchy-Schwarz bound |n12|^2 <= n1 n2;
# the relative part matters once the moments grow large.
_CS_ABS_SLACK = 1e-9
_CS_REL_SLACK = 1e-12


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge within the panel budget."""


class GrowthGuardError(RuntimeError):
    """Predicted magnitude beyond the configured guard; raw numbers rejected."""


class NoSpontaneousFieldError(ValueError):
    """Vacuum correlation requested where no spontaneous field exists."""


class DecayedFieldError(ValueError):
    """Statistics undefined because the mean field has fully decayed."""


@dataclass(frozen=True)
class PhotonNumbers:
    """Mean photon numbers in the two guides."""

    n1: float
    n2: float

    def __post_init__(self) -> None:
        for name in ("n1", "n2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            if value < -1e-12:
                raise ValueError(f"{name} must be non-negative, got {value!r}")
            if value < 0.0:
                object.__setattr__(self, name, 0.0)


@dataclass(frozen=True)
class VacuumMoments:
    """Spontaneous second moments (n1, n2, n12) generated from vacuum."""

    n1: float
    n2: float
    n12: complex

    def __post_init__(self) -> None:
        for name in ("n1", "n2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < -1e-12:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
            if value < 0.0:
                object.__setattr__(self, name, 0.0)
        if not (math.isfinite(self.n12.real) and math.isfinite(self.n12.imag)):
            raise ValueError(f"n12 must be finite, got {self.n12!r}")
        cross = abs(self.n12) ** 2
        bound = self.n1 * self.n2
        if cross > bound + _CS_ABS_SLACK + _CS_REL_SLACK * max(cross, bound):
            raise ValueError(
                f"moments violate the Cauchy-Schwarz bound: |n12|^2={cross!r} > n1*n2={bound!r}"
            )


def vacuum_pump_weights(params: EffectiveParams, kind: Kind) -> tuple[float, float]:
    """Pump weights (w1, w2) of the spontaneous integrals for one kind.

    Each weight is the photon injection rate of the corresponding guide,
    and must come out non-negative; a negative weight means the parameters
    do not belong to the declared kind.
    """
    gamma, beta = params.gamma, params.beta
    if kind is Kind.GAIN_LOSS:
        weights = (-2.0 * gamma, 0.0)
    elif kind is Kind.GAIN_GAIN:
        weights = (2.0 * (beta - gamma), 2.0 * (beta + gamma))
    elif kind is Kind.GAIN_PASSIVE:
        weights = (-4.0 * gamma, 0.0)
    elif kind in (Kind.PASSIVE_LOSS, Kind.LOSS_LOSS):
        weights = (0.0, 0.0)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if weights[0] < 0.0 or weights[1] < 0.0:
        raise ValueError(
            f"negative pump rate {weights!r}: parameters inconsistent with {kind.value}"
        )
    return weights


def _growth_exponent(params: EffectiveParams, zeta: float) -> float:
    """Log of the predicted peak integrand magnitude e^{2 (|Im Omega| + beta) zeta}."""
    rate = abs(params.omega.imag) + params.beta
    return 2.0 * max(0.0, rate) * zeta


def _check_growth(params: EffectiveParams, zeta: float, max_magnitude: float | None) -> None:
    if max_magnitude is None:
        return
    exponent = _growth_exponent(params, zeta)
    if exponent > math.log(max_magnitude):
        raise GrowthGuardError(
            f"predicted magnitude e^{exponent:.1f} exceeds the guard {max_magnitude:g}; "
            "raw photon numbers are saturation-dominated here"
        )


def _check_zeta(zeta: float) -> float:
    zeta = float(zeta)
    if not math.isfinite(zeta) or zeta < 0.0:
        raise ValueError(f"zeta must be finite and non-negative, got {zeta!r}")
    return zeta


def vacuum_moments(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> VacuumMoments:
    """All spontaneous second moments at distance zeta in one quadrature pass."""
    zeta = _check_zeta(zeta)
    w1, w2 = vacuum_pump_weights(params, kind)
    if zeta == 0.0 or (w1 == 0.0 and w2 == 0.0):
        return VacuumMoments(0.0, 0.0, 0.0j)
    _check_growth(params, zeta, max_magnitude)

    n, omega, two_beta = params.n, params.omega, 2.0 * params.beta

    def integrand(t: float) -> np.ndarray:
        u11, u12, u21, u22 = propagator_entries(n, t, omega)
        env = math.exp(two_beta * t)
        f1 = w1 * (u11.real**2 + u11.imag**2) + w2 * (u12.real**2 + u12.imag**2)
        f2 = w1 * (u21.real**2 + u21.imag**2) + w2 * (u22.real**2 + u22.imag**2)
        cross = w1 * u11.conjugate() * u21 + w2 * u12.conjugate() * u22
        return np.array([f1 * env, f2 * env, cross.real * env, cross.imag * env])

    values, _, info = quad_vec(
        integrand,
        0.0,
        zeta,
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_REL_TOL,
        limit=QUAD_MAX_PANELS,
        full_output=True,
    )
    if not info.success:
        raise QuadratureError(
            f"spontaneous-moment quadrature did not converge at zeta={zeta!r}: {info.message}"
        )
    return VacuumMoments(float(values[0]), float(values[1]), complex(values[2], values[3]))


def spontaneous_generation(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> VacuumMoments:
    """Mean spontaneously generated photon numbers (vacuum input)."""
    return vacuum_moments(params, kind, zeta, max_magnitude=max_magnitude)


def cross_correlation_vacuum(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> complex:
    """Inter-guide moment <a1^dag a2> generated from vacuum."""
    return vacuum_moments(params, kind, zeta, max_magnitude=max_magnitude).n12


def q_vacuum(params: EffectiveParams, kind: Kind, zeta: float) -> float:
    """Normalized vacuum cross-correlation q = |n12|^2 / (n1 n2).

    Non-negative by construction (the spontaneous fields of the two guides
    can only be bunched) and bounded by one through Cauchy-Schwarz.  Undefined
    for passive kinds and at zeta = 0, where there is no spontaneous field.
    A ratio of moments, so it stays well defined far beyond the growth guard;
    evaluation is unguarded.
    """
    zeta = _check_zeta(zeta)
    w1, w2 = vacuum_pump_weights(params, kind)
    if (w1 == 0.0 and w2 == 0.0) or zeta == 0.0:
        raise NoSpontaneousFieldError(
            f"q undefined for kind={kind.value} at zeta={zeta!r}: no spontaneous field"
        )
    vm = vacuum_moments(params, kind, zeta, max_magnitude=None)
    denom = vm.n1 * vm.n2
    if not math.isfinite(denom) or denom <= 0.0:
        raise NoSpontaneousFieldError(
            f"q undefined at zeta={zeta!r}: vanishing spontaneous product"
        )
    return abs(vm.n12) ** 2 / denom


def g2_vacuum(params: EffectiveParams, kind: Kind, zeta: float) -> float:
    """Second-order two-point correlation g2 = 1 + q of the spontaneous field."""
    return 1.0 + q_vacuum(params, kind, zeta)


def _stimulated_pair(
    params: EffectiveParams, zeta: float, port: int
) -> tuple[float, float]:
    if port not in (1, 2):
        raise ValueError(f"input port must be 1 or 2, got {port!r}")
    u11, u12, u21, u22 = propagator_entries(params.n, zeta, params.omega)
    env = math.exp(2.0 * params.beta * zeta)
    top, bottom = (u11, u21) if port == 1 else (u12, u22)
    return (
        env * (top.real**2 + top.imag**2),
        env * (bottom.real**2 + bottom.imag**2),
    )


def single_photon_numbers(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    port: int = 1,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> PhotonNumbers:
    """Mean photon numbers for one photon injected into the given guide.

    Stimulated transfer e^{2 beta zeta} |U_j,port|^2 plus the spontaneous
    background; passive kinds keep the stimulated term only.
    """
    zeta = _check_zeta(zeta)
    if zeta == 0.0:
        return PhotonNumbers(1.0, 0.0) if port == 1 else PhotonNumbers(0.0, 1.0)
    _check_growth(params, zeta, max_magnitude)
    stim1, stim2 = _stimulated_pair(params, zeta, port)
    vm = vacuum_moments(params, kind, zeta, max_magnitude=max_magnitude)
    return PhotonNumbers(stim1 + vm.n1, stim2 + vm.n2)


def noon_photon_numbers(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> PhotonNumbers:
    """Mean photon numbers for the two-photon input (|20> + |02>)/sqrt(2)."""
    zeta = _check_zeta(zeta)
    if zeta == 0.0:
        return PhotonNumbers(1.0, 1.0)
    _check_growth(params, zeta, max_magnitude)
    s1a, s2a = _stimulated_pair(params, zeta, 1)
    s1b, s2b = _stimulated_pair(params, zeta, 2)
    vm = vacuum_moments(params, kind, zeta, max_magnitude=max_magnitude)
    return PhotonNumbers(s1a + s1b + vm.n1, s2a + s2b + vm.n2)


def noon_two_point(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> float:
    """Two-guide coincidence moment <a1^dag a2^dag a2 a1> for the N00N input.

    Interference of the two stimulated paths plus spontaneous background and
    the mixed stimulated-spontaneous terms.
    """
    zeta = _check_zeta(zeta)
    if zeta == 0.0:
        return 0.0
    _check_growth(params, zeta, max_magnitude)
    u11, u12, u21, u22 = propagator_entries(params.n, zeta, params.omega)
    env2 = math.exp(2.0 * params.beta * zeta)
    env4 = env2 * env2
    vm = vacuum_moments(params, kind, zeta, max_magnitude=max_magnitude)

    pair = u11 * u21 + u12 * u22
    row1 = u11.real**2 + u11.imag**2 + u12.real**2 + u12.imag**2
    row2 = u21.real**2 + u21.imag**2 + u22.real**2 + u22.imag**2
    interf = u21.conjugate() * u11 + u22.conjugate() * u12
    return (
        env4 * (pair.real**2 + pair.imag**2)
        + vm.n1 * vm.n2
        + abs(vm.n12) ** 2
        + env2 * (vm.n1 * row2 + vm.n2 * row1)
        + 2.0 * env2 * (vm.n12 * interf).real
    )


def q_noon(params: EffectiveParams, kind: Kind, zeta: float) -> float:
    """Normalized N00N correlation q = n1212 / (n1 n2) - 1.

    Exactly -1 at zeta = 0 (perfect anti-correlation of the input), at most
    zero for passive kinds, and crossing into bunching once the spontaneous
    background dominates in amplifying kinds.  A ratio of moments; unguarded.
    """
    zeta = _check_zeta(zeta)
    numbers = noon_photon_numbers(params, kind, zeta, max_magnitude=None)
    denom = numbers.n1 * numbers.n2
    if not math.isfinite(denom) or denom <= 0.0:
        raise DecayedFieldError(
            f"N00N statistics undefined at zeta={zeta!r}: mean field fully decayed"
        )
    return noon_two_point(params, kind, zeta, max_magnitude=None) / denom - 1.0


def renormalize(numbers: PhotonNumbers) -> tuple[float, float]:
    """Relative photon shares (n1, n2) / (n1 + n2), summing to one exactly."""
    total = numbers.n1 + numbers.n2
    if not math.isfinite(total) or total <= 0.0:
        raise ValueError(f"renormalization undefined for total photon number {total!r}")
    share1 = min(max(numbers.n1 / total, 0.0), 1.0)
    return share1, 1.0 - share1


def asymptotic_shares(gamma: float) -> tuple[float, float]:
    """Limiting renormalized shares (smaller, larger) beyond the degeneracy.

    Evaluated with a = |gamma| >= 1:

        share1 = 1 / (2 a (a + sqrt(a^2 - 1)))       share2 = 1 - share1

    The returned order is (smaller, larger); the larger share belongs to the
    guide favoured by the dominant eigenvector, which is guide 1 when
    gamma < 0 and guide 2 when gamma > 0.  Undefined for |gamma| < 1, where
    the shares keep oscillating instead of settling.
    """
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma!r}")
    a = abs(gamma)
    if a < 1.0:
        raise ValueError(f"no asymptotic shares in the oscillatory regime |gamma|={a!r} < 1")
    share2 = (a + math.sqrt(a * a - 1.0)) / (2.0 * a)
    return 1.0 - share2, share2


# --------------------------------------------------------------------------
# Curve sampling

CURVE_COLUMNS: dict[str, tuple[str, ...]] = {
    "spont": ("n1", "n2", "share1", "share2"),
    "q00": ("n1", "n2", "n12_re", "n12_im", "q00"),
    "single": ("n1", "n2", "share1", "share2"),
    "noon_n": ("n1", "n2", "share1", "share2"),
    "q2002": ("n1", "n2", "q2002"),
    "all": ("n1", "n2", "share1", "share2", "n12_re", "n12_im", "q00", "q2002"),
}

# Observables whose value at zeta = 0 is a 0/0 (spontaneous shares, q00).
ZERO_UNDEFINED = ("spont", "q00", "all")


@dataclass
class ObservableCurve:
    """A sampled observable: one record per grid point, gaps where undefined.

    ``values[i]`` is a dict of column values at ``zetas[i]``; individual
    entries are NaN where that point could not be evaluated, with the reason
    recorded in ``gaps`` as (index, message).
    """

    observable: str
    zetas: np.ndarray
    values: list[dict[str, float]]
    gaps: list[tuple[int, str]] = field(default_factory=list)

    @property
    def columns(self) -> tuple[str, ...]:
        return CURVE_COLUMNS[self.observable]

    def column(self, name: str) -> np.ndarray:
        return np.array([v[name] for v in self.values])


def _guarded(value: float, ok: bool) -> float:
    return value if ok else math.nan


def _eval_point(
    params: EffectiveParams,
    kind: Kind,
    zeta: float,
    observable: str,
    max_magnitude: float | None,
) -> tuple[dict[str, float], list[str]]:
    notes: list[str] = []
    raw_ok = True
    try:
        _check_growth(params, zeta, max_magnitude)
    except GrowthGuardError as exc:
        raw_ok = False
        notes.append(str(exc))

    rec: dict[str, float] = {}

    def shares_of(n1: float, n2: float) -> tuple[float, float]:
        try:
            return renormalize(PhotonNumbers(n1, n2))
        except ValueError as exc:
            notes.append(str(exc))
            return math.nan, math.nan

    if observable in ("spont", "q00", "all"):
        vm = vacuum_moments(params, kind, zeta, max_magnitude=None)
        if observable in ("spont", "all"):
            rec["n1"] = _guarded(vm.n1, raw_ok)
            rec["n2"] = _guarded(vm.n2, raw_ok)
            rec["share1"], rec["share2"] = shares_of(vm.n1, vm.n2)
        else:
            rec["n1"] = _guarded(vm.n1, raw_ok)
            rec["n2"] = _guarded(vm.n2, raw_ok)
        if observable in ("q00", "all"):
            rec["n12_re"] = _guarded(vm.n12.real, raw_ok)
            rec["n12_im"] = _guarded(vm.n12.imag, raw_ok)
            denom = vm.n1 * vm.n2
            if denom > 0.0 and math.isfinite(denom):
                rec["q00"] = abs(vm.n12) ** 2 / denom
            else:
                notes.append(f"q00 undefined at zeta={zeta!r}: no spontaneous field")
                rec["q00"] = math.nan
    elif observable == "single":
        stim1, stim2 = _stimulated_pair(params, zeta, 1)
        vm = vacuum_moments(params, kind, zeta, max_magnitude=None)
        n1, n2 = stim1 + vm.n1, stim2 + vm.n2
        rec["n1"] = _guarded(n1, raw_ok)
        rec["n2"] = _guarded(n2, raw_ok)
        rec["share1"], rec["share2"] = shares_of(n1, n2)
    elif observable == "noon_n":
        numbers = noon_photon_numbers(params, kind, zeta, max_magnitude=None)
        rec["n1"] = _guarded(numbers.n1, raw_ok)
        rec["n2"] = _guarded(numbers.n2, raw_ok)
        rec["share1"], rec["share2"] = shares_of(numbers.n1, numbers.n2)
    if observable in ("q2002", "all"):
        numbers = noon_photon_numbers(params, kind, zeta, max_magnitude=None)
        if observable == "q2002":
            rec["n1"] = _guarded(numbers.n1, raw_ok)
            rec["n2"] = _guarded(numbers.n2, raw_ok)
        try:
            rec["q2002"] = q_noon(params, kind, zeta)
        except DecayedFieldError as exc:
            notes.append(str(exc))
            rec["q2002"] = math.nan
    return rec, notes


def sample_curve(
    params: EffectiveParams,
    kind: Kind,
    observable: str,
    zetas: np.ndarray,
    *,
    max_magnitude: float | None = GROWTH_GUARD_MAX,
) -> ObservableCurve:
    """Sample one observable over a strictly increasing distance grid.

    Every grid point is evaluated independently of the others (the result
    does not depend on evaluation order), and per-point failures turn into
    NaN entries flagged in ``gaps`` instead of aborting the sweep.
    """
    if observable not in CURVE_COLUMNS:
        raise ValueError(
            f"unknown observable {observable!r}; choose from {sorted(CURVE_COLUMNS)}"
        )
    grid = np.asarray(zetas, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("zeta grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0:
        raise ValueError("zeta grid must be finite and non-negative")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("zeta grid must be strictly increasing")

    values: list[dict[str, float]] = []
    gaps: list[tuple[int, str]] = []
    for index, z in enumerate(grid):
        rec, notes = _eval_point(params, kind, float(z), observable, max_magnitude)
        values.append(rec)
        for note in notes:
            gaps.append((index, note))
    return ObservableCurve(observable=observable, zetas=grid, values=values, gaps=gaps)
