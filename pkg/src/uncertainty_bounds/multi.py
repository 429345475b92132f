"""Variance-sum bounds for ``n >= 2`` observables.

Deviation vectors ``x_j = a_j (A_j - <A_j>)|psi>`` with ``a_j`` in
{+1, -1, +i, -i} are fed to the n-vector refinement of the triangle
inequality.  The state-only form uses ``F = d(sum a_j A_j)`` and
``G = |sum x_j / dA_j|``; the orthogonal form projects both onto a companion
state ``zeta_perp``.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .bounds2 import EPS_VAR, ORTHO_TOL, RADICAND_TOL
from .errors import (
    DegenerateVariance,
    DimensionMismatch,
    NotOrthogonal,
    NumericalError,
    TooFewVectors,
)
from .geometry import n_vector_bounds
from .hilbert import (
    COEFFICIENTS,
    _check_coefficient,
    _deviation,
    as_observable,
    as_state,
    orthogonality_check,
)

VARIANTS = ("symmetric", "min-both")


@dataclass(frozen=True)
class MultiObsSpec:
    observables: tuple
    coefficients: tuple

    def __post_init__(self):
        obs = tuple(as_observable(o) for o in self.observables)
        if len(obs) < 2:
            raise TooFewVectors("need at least two observables")
        dims = {o.dim for o in obs}
        if len(dims) != 1:
            raise DimensionMismatch(f"observables have differing dimensions {sorted(dims)}")
        coeffs = tuple(_check_coefficient(c) for c in self.coefficients)
        if len(coeffs) != len(obs):
            raise DimensionMismatch(
                f"{len(coeffs)} coefficients for {len(obs)} observables"
            )
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n(self):
        return len(self.observables)

    @property
    def dim(self):
        return self.observables[0].dim

    def combination(self):
        return sum(c * o.matrix for c, o in zip(self.coefficients, self.observables))


@dataclass(frozen=True)
class MultiMoments:
    stds: tuple
    combined_dev: float
    g_param: float
    cross_sum: float

    @property
    def sum(self):
        return float(sum(s * s for s in self.stds))


@dataclass(frozen=True)
class MultiBoundResult:
    lower: float
    upper: float
    used_orthogonal: bool
    f_perp: float | None = None
    g_perp: float | None = None
    variant: str = "symmetric"


def _deviations(spec, psi):
    amps = psi.amplitudes
    devs = [_deviation(o.matrix, amps) for o in spec.observables]
    stds = [float(np.linalg.norm(d)) for d in devs]
    return devs, stds


def _prepare(spec, psi, eps_var):
    psi = as_state(psi)
    if spec.dim != psi.dim:
        raise DimensionMismatch(f"observables act on dim {spec.dim}, state has dim {psi.dim}")
    devs, stds = _deviations(spec, psi)
    if min(stds) <= eps_var:
        raise DegenerateVariance(f"smallest standard deviation {min(stds):.3e} <= {eps_var:g}")
    return psi, devs, stds


def multi_moments(spec, psi, eps_var=EPS_VAR):
    psi, devs, stds = _prepare(spec, psi, eps_var)
    n = spec.n
    a = spec.coefficients
    radicand = complex(n)
    for i, j in itertools.permutations(range(n), 2):
        radicand += np.conj(a[i]) * a[j] * np.vdot(devs[i], devs[j]) / (stds[i] * stds[j])
    if abs(radicand.imag) > RADICAND_TOL:
        raise NumericalError(f"G radicand has imaginary part {radicand.imag:.3e}")
    r = radicand.real
    if r < -RADICAND_TOL or r > n * n + RADICAND_TOL:
        raise NumericalError(f"G radicand {r!r} outside [0, {n * n}]")
    # same quantity as sqrt(radicand), taken as a vector norm to avoid sqrt(roundoff)
    g = float(np.linalg.norm(sum(c * d / s for c, d, s in zip(a, devs, stds))))
    combined_dev = float(np.linalg.norm(sum(c * d for c, d in zip(a, devs))))
    total = sum(stds)
    return MultiMoments(
        stds=tuple(stds),
        combined_dev=combined_dev,
        g_param=g,
        cross_sum=total * total - sum(s * s for s in stds),
    )


def multi_bounds(spec, psi, eps_var=EPS_VAR):
    """State-only bounds ``L = [F + (n-G) min dA]^2 / n``, ``U = [F + (n-G) max dA]^2 - cross``."""
    mm = multi_moments(spec, psi, eps_var)
    lower, upper = n_vector_bounds(mm.stds, mm.combined_dev, spec.n - mm.g_param)
    return MultiBoundResult(lower=lower, upper=upper, used_orthogonal=False)


def multi_bounds_orthogonal(spec, psi, zeta_perp, variant="symmetric", eps_var=EPS_VAR):
    """Bounds with ``F_perp = |<zeta_perp|sum a_j A_j|psi>|`` and
    ``G_perp = |<zeta_perp|sum a_j A_j/dA_j|psi>|``.

    ``variant="symmetric"`` uses ``max dA`` in the upper bound (the sound form);
    ``"min-both"`` uses ``min dA`` in both bounds and is only for comparison.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    psi, devs, stds = _prepare(spec, psi, eps_var)
    zeta_perp = as_state(zeta_perp)
    if zeta_perp.dim != psi.dim:
        raise DimensionMismatch("companion state dimension differs from psi")
    overlap = orthogonality_check(psi, zeta_perp)
    if overlap > ORTHO_TOL:
        raise NotOrthogonal(f"|<zeta|zeta_perp>| = {overlap:.3e} exceeds {ORTHO_TOL}")
    bra = zeta_perp.amplitudes
    amps = psi.amplitudes
    f_perp = 0j
    g_perp = 0j
    for c, o, s in zip(spec.coefficients, spec.observables, stds):
        elem = np.vdot(bra, o.matrix @ amps)
        f_perp += c * elem
        g_perp += c * elem / s
    f_perp, g_perp = float(abs(f_perp)), float(abs(g_perp))
    xi = spec.n - g_perp
    lower, upper = n_vector_bounds(stds, f_perp, xi)
    if variant == "min-both":
        total = sum(stds)
        upper = (f_perp + xi * min(stds)) ** 2 - (total * total - sum(s * s for s in stds))
    return MultiBoundResult(
        lower=lower,
        upper=upper,
        used_orthogonal=True,
        f_perp=f_perp,
        g_perp=g_perp,
        variant=variant,
    )


@dataclass(frozen=True)
class SearchResult:
    spec: MultiObsSpec
    result: MultiBoundResult
    objective: str
    evaluated: int


def coefficient_assignments(n):
    """All assignments with the first coefficient fixed to +1, in lexicographic order."""
    for tail in itertools.product(COEFFICIENTS, repeat=n - 1):
        yield (1,) + tail


def tightest_coefficients(observables, psi, zeta_perp=None, objective="lower",
                          variant="symmetric", eps_var=EPS_VAR):
    """Exhaustive search over ``4**(n-1)`` coefficient assignments.

    A common unit factor on every coefficient leaves all bounds unchanged, so
    the first one is pinned to ``+1``.  ``objective="lower"`` maximizes the
    lower bound, ``"upper"`` minimizes the upper bound.  Ties keep the earliest
    assignment in the (1, i, -1, -i) lexicographic order.
    """
    if objective not in ("lower", "upper"):
        raise ValueError("objective must be 'lower' or 'upper'")
    observables = tuple(as_observable(o) for o in observables)
    if len(observables) > 8:
        raise ValueError("exhaustive search is limited to n <= 8 observables")
    best = None
    count = 0
    for coeffs in coefficient_assignments(len(observables)):
        spec = MultiObsSpec(observables, coeffs)
        if zeta_perp is None:
            res = multi_bounds(spec, psi, eps_var)
        else:
            res = multi_bounds_orthogonal(spec, psi, zeta_perp, variant, eps_var)
        count += 1
        score = res.lower if objective == "lower" else -res.upper
        if best is None or score > best[0]:
            best = (score, spec, res)
    return SearchResult(spec=best[1], result=best[2], objective=objective, evaluated=count)
