"""Two-observable bounds on the variance sum ``dA^2 + dB^2``.

Four families, each with a ``+`` and ``-`` branch:

1. covariance-sensitive, state only (deviation vectors ``dA``, ``+-dB``)
2. covariance-sensitive, projected on an orthogonal companion state
3. commutator-sensitive, state only (``dA``, ``+-i dB``)
4. commutator-sensitive, projected on an orthogonal companion state

plus the baselines they are compared against (Robertson, Schroedinger,
Maccone-Pati and the covariance-based reverse relation).
"""

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .errors import (
    DegenerateVariance,
    EmptyInput,
    NotOrthogonal,
    NumericalError,
    SingularDenominator,
)
from .geometry import two_vector_bounds
from .hilbert import (
    as_observable,
    as_state,
    gram_schmidt_orthogonalize,
    matrix_element,
    moments,
    normalize,
    orthogonality_check,
    _check_dims,
    _deviation,
)

EPS_VAR = 1e-6
ORTHO_TOL = 1e-10
RADICAND_TOL = 1e-10
SINGULAR_TOL = 1e-9
SIGNS = (1, -1)


@dataclass(frozen=True)
class BoundPairSet:
    family: int
    lower_plus: float
    lower_minus: float
    upper_plus: float
    upper_minus: float
    scalars: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    @property
    def lower(self):
        return max(self.lower_plus, self.lower_minus)

    @property
    def upper(self):
        return min(self.upper_plus, self.upper_minus)

    def lower_for(self, sign):
        return self.lower_plus if sign > 0 else self.lower_minus

    def upper_for(self, sign):
        return self.upper_plus if sign > 0 else self.upper_minus

    def slack(self, exact_sum):
        """Signed margin of the tightest branches around ``exact_sum``."""
        return min(exact_sum - self.lower, self.upper - exact_sum)


@dataclass(frozen=True)
class CombinedBound:
    lower: float
    upper: float
    lower_source: str
    upper_source: str


@dataclass(frozen=True)
class BaselineBounds:
    robertson_product: float
    schrodinger_product: float
    maccone_pati_plus: float | None
    maccone_pati_minus: float | None
    reverse_cov_upper: float | None


def _sign_label(sign):
    return "+" if sign > 0 else "-"


def _prepare(a, b, psi):
    a, b, psi = as_observable(a), as_observable(b), as_state(psi)
    _check_dims(psi, a, b)
    return a, b, psi


def _require_spread(m, eps_var):
    if not (m.std_a > eps_var and m.std_b > eps_var):
        raise DegenerateVariance(
            f"standard deviations ({m.std_a:.3e}, {m.std_b:.3e}) must exceed {eps_var:g}"
        )


def _clip_radicand(value, upper=4.0):
    if value < -RADICAND_TOL or value > upper + RADICAND_TOL:
        raise NumericalError(f"radicand {value!r} outside [0, {upper}] beyond roundoff")
    return min(max(value, 0.0), upper)


def _require_orthogonal(psi, psi_perp):
    overlap = orthogonality_check(psi, psi_perp)
    if overlap > ORTHO_TOL:
        raise NotOrthogonal(f"|<psi|psi_perp>| = {overlap:.3e} exceeds {ORTHO_TOL}")
    return overlap


def _pair_set(family, m, terms, names):
    # terms: {sign: (norm_like, gap)}
    values = {}
    scalars = {}
    for sign in SIGNS:
        head, gap = terms[sign]
        values[sign] = two_vector_bounds(m.std_a, m.std_b, head, gap)
        suffix = "plus" if sign > 0 else "minus"
        scalars[f"{names[0]}_{suffix}"] = float(head)
        scalars[f"{names[1]}_{suffix}"] = float(gap)
    return BoundPairSet(
        family=family,
        lower_plus=values[1][0],
        lower_minus=values[-1][0],
        upper_plus=values[1][1],
        upper_minus=values[-1][1],
        scalars=MappingProxyType(scalars),
    )


def family1(a, b, psi, eps_var=EPS_VAR):
    """Covariance family: ``G+- = 2 - sqrt(2 +- 2 Cov/(dA dB))`` with head ``d(A +- B)``."""
    a, b, psi = _prepare(a, b, psi)
    m = moments(a, b, psi)
    _require_spread(m, eps_var)
    r = m.cov / (m.std_a * m.std_b)
    terms = {}
    for s in SIGNS:
        _clip_radicand(2.0 + 2.0 * s * r)
        # sqrt(2 +- 2r) evaluated as |dA/sA +- dB/sB|, accurate near r = -+1
        terms[s] = (m.dev_sum(s), 2.0 - m.unit_sum(s))
    return _pair_set(1, m, terms, ("dev", "g"))


def family3(a, b, psi, eps_var=EPS_VAR):
    """Commutator family: ``nu+- = 2 - sqrt(2 +- i<[A,B]>/(dA dB))`` with head ``mu+- = d(A +- iB)``."""
    a, b, psi = _prepare(a, b, psi)
    m = moments(a, b, psi)
    _require_spread(m, eps_var)
    r = (1j * m.comm).real / (m.std_a * m.std_b)
    terms = {}
    for s in SIGNS:
        _clip_radicand(2.0 + s * r)
        terms[s] = (m.dev_isum(s), 2.0 - m.unit_isum(s))
    return _pair_set(3, m, terms, ("mu", "nu"))


def _projected(family, a, b, psi, psi_perp, unit, eps_var):
    a, b, psi = _prepare(a, b, psi)
    if psi_perp is None:
        psi_perp = construct_orthogonal(a, b, psi, "auto", eps_var=eps_var)
    psi_perp = as_state(psi_perp)
    _check_dims(psi, psi_perp)
    _require_orthogonal(psi, psi_perp)
    m = moments(a, b, psi)
    _require_spread(m, eps_var)
    proj_a = matrix_element(psi_perp, a, psi)
    proj_b = matrix_element(psi_perp, b, psi)
    terms = {}
    for s in SIGNS:
        c = s * unit
        head = abs(proj_a + c * proj_b)
        gap = 2.0 - abs(proj_a / m.std_a + c * proj_b / m.std_b)
        terms[s] = (head, gap)
    names = ("j", "k") if family == 2 else ("lambda", "chi")
    return _pair_set(family, m, terms, names)


def family2(a, b, psi, psi_perp=None, eps_var=EPS_VAR):
    """Covariance family projected on ``psi_perp``.

    ``J+- = |<psi_perp|A +- B|psi>|`` replaces ``d(A +- B)`` and
    ``K+- = 2 - |<psi_perp|A/dA +- B/dB|psi>|`` replaces ``G+-``.  When
    ``psi_perp`` is omitted it is built with ``construct_orthogonal(..., "auto")``;
    a supplied state is used as-is and must already be orthogonal.
    """
    return _projected(2, a, b, psi, psi_perp, 1.0, eps_var)


def family4(a, b, psi, psi_perp=None, eps_var=EPS_VAR):
    """Commutator family projected on ``psi_perp`` (``Lambda+-``, ``chi+-`` with ``+-iB``)."""
    return _projected(4, a, b, psi, psi_perp, 1j, eps_var)


FAMILIES = {1: family1, 2: family2, 3: family3, 4: family4}


def evaluate_families(a, b, psi, families=(1, 2, 3, 4), psi_perp=None, eps_var=EPS_VAR):
    out = []
    for f in families:
        if f in (2, 4):
            out.append(FAMILIES[f](a, b, psi, psi_perp, eps_var=eps_var))
        else:
            out.append(FAMILIES[f](a, b, psi, eps_var=eps_var))
    return out


def combined(sets):
    """Tightest lower (max) and upper (min) over every family and branch.

    Ties go to the lowest family index, then to the ``+`` branch.
    """
    sets = sorted(sets, key=lambda s: s.family)
    if not sets:
        raise EmptyInput("combined() needs at least one BoundPairSet")
    best_lower = best_upper = None
    for bps in sets:
        for sign in SIGNS:
            label = f"{bps.family}{_sign_label(sign)}"
            lo, hi = bps.lower_for(sign), bps.upper_for(sign)
            if best_lower is None or lo > best_lower[0]:
                best_lower = (lo, label)
            if best_upper is None or hi < best_upper[0]:
                best_upper = (hi, label)
    return CombinedBound(best_lower[0], best_upper[0], best_lower[1], best_upper[1])


def robertson(a, b, psi):
    a, b, psi = _prepare(a, b, psi)
    comm = moments(a, b, psi).comm
    return abs(0.5 * comm) ** 2


def schrodinger(a, b, psi):
    a, b, psi = _prepare(a, b, psi)
    m = moments(a, b, psi)
    return abs(0.5 * m.comm) ** 2 + m.cov**2


def maccone_pati(a, b, psi, psi_perp):
    """Both branches of ``+-i<[A,B]> + |<psi|A +- iB|psi_perp>|^2``."""
    a, b, psi = _prepare(a, b, psi)
    psi_perp = as_state(psi_perp)
    _check_dims(psi, psi_perp)
    _require_orthogonal(psi, psi_perp)
    m = moments(a, b, psi)
    out = []
    for s in SIGNS:
        proj = matrix_element(psi, a.matrix + s * 1j * b.matrix, psi_perp)
        out.append(float((s * 1j * m.comm).real + abs(proj) ** 2))
    return tuple(out)


def reverse_cov(a, b, psi, eps_var=EPS_VAR):
    """Covariance-based reverse bound ``2 d(A-B)^2 / (1 - Cov/(dA dB)) - 2 dA dB``."""
    a, b, psi = _prepare(a, b, psi)
    m = moments(a, b, psi)
    _require_spread(m, eps_var)
    # 1 - Cov/(dA dB) = |dA/sA - dB/sB|^2 / 2, without cancellation near saturation
    denom = 0.5 * m.unit_sum_minus**2
    if denom <= SINGULAR_TOL:
        raise SingularDenominator(f"1 - Cov/(dA dB) = {denom:.3e} (correlation saturated)")
    return float(2.0 * m.dev_sum_minus**2 / denom - 2.0 * m.std_a * m.std_b)


def baselines(a, b, psi, psi_perp=None, eps_var=EPS_VAR):
    """All baseline quantities; undefined entries are ``None``."""
    mp = (None, None) if psi_perp is None else maccone_pati(a, b, psi, psi_perp)
    try:
        rev = reverse_cov(a, b, psi, eps_var=eps_var)
    except (DegenerateVariance, SingularDenominator):
        rev = None
    return BaselineBounds(
        robertson_product=robertson(a, b, psi),
        schrodinger_product=schrodinger(a, b, psi),
        maccone_pati_plus=mp[0],
        maccone_pati_minus=mp[1],
        reverse_cov_upper=rev,
    )


ORTHOGONAL_MODES = ("auto", "opA", "opB", "sumPlus", "sumMinus")


def construct_orthogonal(a, b, psi, mode="auto", eps_var=EPS_VAR):
    """Companion state ``psi_perp ~ (O - <O>)|psi>``.

    ``mode`` picks ``O``: ``opA``/``opB`` use ``A``/``B``, ``sumPlus``/``sumMinus``
    use ``A + B``/``A - B``.  ``auto`` uses ``B`` when ``psi`` is an eigenstate of
    ``A``, ``A`` when it is an eigenstate of ``B`` and ``A + B`` otherwise
    (``sumMinus`` is the alternative for that last case).
    """
    a, b, psi = _prepare(a, b, psi)
    if mode not in ORTHOGONAL_MODES:
        raise ValueError(f"mode must be one of {ORTHOGONAL_MODES}, got {mode!r}")
    if mode == "auto":
        m = moments(a, b, psi)
        if m.std_a < eps_var:
            mode = "opB"
        elif m.std_b < eps_var:
            mode = "opA"
        else:
            mode = "sumPlus"
    op = {
        "opA": a.matrix,
        "opB": b.matrix,
        "sumPlus": a.matrix + b.matrix,
        "sumMinus": a.matrix - b.matrix,
    }[mode]
    dev = _deviation(op, psi.amplitudes)
    if np.linalg.norm(dev) <= ORTHO_TOL:
        raise DegenerateVariance(f"operator for mode {mode!r} has zero deviation on psi")
    # the deviation is orthogonal analytically; one projection pass removes roundoff
    return gram_schmidt_orthogonalize(normalize(dev), psi)
