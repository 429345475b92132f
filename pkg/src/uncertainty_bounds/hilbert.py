"""Pure states, Hermitian observables and the moments every bound consumes.

All second moments are computed from deviation vectors
``(M - <M>) |psi>`` rather than from ``<M^2> - <M>^2``: the Gram entries of
those vectors satisfy Cauchy-Schwarz to machine precision, which keeps the
square-root radicands downstream inside their admissible ranges.

Inner products are conjugate-linear in the first argument (``np.vdot``).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NumericalError,
    ParallelStates,
)

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
VARIANCE_FLOOR = -1e-14
PARALLEL_TOL = 1e-10

#: Admissible unit coefficients, in canonical (tie-break) order.
COEFFICIENTS = (1, 1j, -1, -1j)


def _as_vector(values, what="amplitudes"):
    vec = np.array(values, dtype=complex)
    if vec.ndim == 2 and 1 in vec.shape:
        vec = vec.reshape(-1)
    if vec.ndim != 1:
        raise DimensionMismatch(f"{what} must be one-dimensional, got shape {vec.shape}")
    return vec


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector. Construction rejects (never repairs) bad norms."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_vector(self.amplitudes)
        if amps.size < 2:
            raise DimensionMismatch("a state needs dimension >= 2")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm is {norm!r}, expected 1 within {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self):
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"PureState(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix; entries within ``HERMITIAN_TOL`` of Hermitian are symmetrized."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"observable must be a square matrix, got shape {mat.shape}")
        asym = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if asym > HERMITIAN_TOL:
            raise NotHermitian(f"max |M - M^dagger| = {asym:.3e} exceeds {HERMITIAN_TOL}")
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __add__(self, other):
        return Observable(self.matrix + as_observable(other).matrix)

    def __sub__(self, other):
        return Observable(self.matrix - as_observable(other).matrix)

    def __repr__(self):
        return f"Observable(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DeviationVector:
    components: np.ndarray
    coefficient: complex

    @property
    def norm(self):
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True)
class TwoObsMoments:
    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    std_a: float
    std_b: float
    cov: float
    comm: complex
    dev_sum_plus: float
    dev_sum_minus: float
    dev_isum_plus: float
    dev_isum_minus: float
    # angular distances |dA/sA +- dB/sB| and |dA/sA +- i dB/sB| (nan if a spread is 0)
    unit_sum_plus: float = float("nan")
    unit_sum_minus: float = float("nan")
    unit_isum_plus: float = float("nan")
    unit_isum_minus: float = float("nan")

    @property
    def sum(self):
        return self.var_a + self.var_b

    def dev_sum(self, sign):
        return self.dev_sum_plus if sign > 0 else self.dev_sum_minus

    def dev_isum(self, sign):
        return self.dev_isum_plus if sign > 0 else self.dev_isum_minus

    def unit_sum(self, sign):
        return self.unit_sum_plus if sign > 0 else self.unit_sum_minus

    def unit_isum(self, sign):
        return self.unit_isum_plus if sign > 0 else self.unit_isum_minus


def as_state(psi):
    return psi if isinstance(psi, PureState) else PureState(psi)


def as_observable(obs):
    return obs if isinstance(obs, Observable) else Observable(obs)


def normalize(amplitudes):
    """Return the normalized ``PureState`` along ``amplitudes``."""
    vec = _as_vector(amplitudes)
    norm = np.linalg.norm(vec)
    if norm <= PARALLEL_TOL:
        raise NotNormalized("cannot normalize a zero vector")
    return PureState(vec / norm)


def _check_dims(psi, *ops):
    for op in ops:
        if op.dim != psi.dim:
            raise DimensionMismatch(f"operator dim {op.dim} != state dim {psi.dim}")


def _check_coefficient(coeff):
    for c in COEFFICIENTS:
        if coeff == c:
            return complex(c)
    raise ValueError(f"coefficient must be one of +1, -1, +i, -i; got {coeff!r}")


def fidelity(a, b):
    """|<a|b>|; the phase-blind comparison used for states throughout."""
    a, b = as_state(a), as_state(b)
    _check_dims(a, b)
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def expectation(obs, psi):
    obs, psi = as_observable(obs), as_state(psi)
    _check_dims(psi, obs)
    return complex(np.vdot(psi.amplitudes, obs.matrix @ psi.amplitudes))


def matrix_element(bra, op, ket):
    """<bra|op|ket> for an arbitrary (not necessarily Hermitian) square matrix."""
    bra, ket = as_state(bra), as_state(ket)
    mat = np.asarray(op.matrix if isinstance(op, Observable) else op, dtype=complex)
    if mat.shape != (ket.dim, ket.dim) or bra.dim != ket.dim:
        raise DimensionMismatch("matrix element dimensions disagree")
    return complex(np.vdot(bra.amplitudes, mat @ ket.amplitudes))


def _deviation(mat, amps):
    image = mat @ amps
    return image - np.vdot(amps, image) * amps


def deviation_vector(obs, psi, coeff=1):
    """``coeff * (M - <M>) |psi>`` for a coefficient in {+1, -1, +i, -i}."""
    obs, psi = as_observable(obs), as_state(psi)
    _check_dims(psi, obs)
    c = _check_coefficient(coeff)
    return DeviationVector(c * _deviation(obs.matrix, psi.amplitudes), c)


def operator_deviation_norm(op, psi):
    """Norm of ``(M - <M>)|psi>`` for any square matrix ``M``.

    For Hermitian ``M`` this is the standard deviation; for ``A + cB`` with a
    unit coefficient ``c`` it is the "deviation" of the non-Hermitian combination.
    """
    psi = as_state(psi)
    mat = np.asarray(op.matrix if isinstance(op, Observable) else op, dtype=complex)
    if mat.shape != (psi.dim, psi.dim):
        raise DimensionMismatch(f"operator shape {mat.shape} does not act on dim {psi.dim}")
    return float(np.linalg.norm(_deviation(mat, psi.amplitudes)))


def _clamp_variance(value):
    if value < 0.0:
        if value < VARIANCE_FLOOR:
            raise NumericalError(f"variance {value!r} below roundoff floor {VARIANCE_FLOOR}")
        return 0.0
    return value


def variance(obs, psi):
    obs, psi = as_observable(obs), as_state(psi)
    _check_dims(psi, obs)
    dev = _deviation(obs.matrix, psi.amplitudes)
    return _clamp_variance(float(np.vdot(dev, dev).real))


def std(obs, psi):
    return float(np.sqrt(variance(obs, psi)))


def covariance(a, b, psi):
    """Symmetrized covariance ``1/2 <AB + BA> - <A><B>``, i.e. Re<dA|dB>."""
    a, b, psi = as_observable(a), as_observable(b), as_state(psi)
    _check_dims(psi, a, b)
    da = _deviation(a.matrix, psi.amplitudes)
    db = _deviation(b.matrix, psi.amplitudes)
    return float(np.vdot(da, db).real)


def commutator_expectation(a, b, psi):
    """``<[A, B]>``, purely imaginary for Hermitian inputs (= 2i Im<dA|dB>)."""
    a, b, psi = as_observable(a), as_observable(b), as_state(psi)
    _check_dims(psi, a, b)
    da = _deviation(a.matrix, psi.amplitudes)
    db = _deviation(b.matrix, psi.amplitudes)
    return complex(0.0, 2.0 * np.vdot(da, db).imag)


def non_hermitian_deviation_norm(a, b, psi, sign=1):
    """Deviation of ``A + i*sign*B``, the norm of ``(A +- iB - <A +- iB>)|psi>``."""
    a, b, psi = as_observable(a), as_observable(b), as_state(psi)
    _check_dims(psi, a, b)
    s = 1 if sign > 0 else -1
    return operator_deviation_norm(a.matrix + s * 1j * b.matrix, psi)


def moments(a, b, psi):
    """All scalar moments of the pair ``(A, B)`` in ``psi``."""
    a, b, psi = as_observable(a), as_observable(b), as_state(psi)
    _check_dims(psi, a, b)
    amps = psi.amplitudes
    image_a, image_b = a.matrix @ amps, b.matrix @ amps
    mean_a = np.vdot(amps, image_a).real
    mean_b = np.vdot(amps, image_b).real
    da = image_a - mean_a * amps
    db = image_b - mean_b * amps
    var_a = _clamp_variance(float(np.vdot(da, da).real))
    var_b = _clamp_variance(float(np.vdot(db, db).real))
    gram = np.vdot(da, db)
    std_a, std_b = float(np.sqrt(var_a)), float(np.sqrt(var_b))
    units = {}
    if std_a > 0.0 and std_b > 0.0:
        # normalizing by the vector norms keeps |u| = 1 exactly, so near-antiparallel
        # pairs give a tiny norm instead of sqrt(roundoff)
        ua, ub = da / np.linalg.norm(da), db / np.linalg.norm(db)
        units = dict(
            unit_sum_plus=float(np.linalg.norm(ua + ub)),
            unit_sum_minus=float(np.linalg.norm(ua - ub)),
            unit_isum_plus=float(np.linalg.norm(ua + 1j * ub)),
            unit_isum_minus=float(np.linalg.norm(ua - 1j * ub)),
        )
    return TwoObsMoments(
        mean_a=float(mean_a),
        mean_b=float(mean_b),
        var_a=var_a,
        var_b=var_b,
        std_a=std_a,
        std_b=std_b,
        cov=float(gram.real),
        comm=complex(0.0, 2.0 * gram.imag),
        dev_sum_plus=float(np.linalg.norm(da + db)),
        dev_sum_minus=float(np.linalg.norm(da - db)),
        dev_isum_plus=float(np.linalg.norm(da + 1j * db)),
        dev_isum_minus=float(np.linalg.norm(da - 1j * db)),
        **units,
    )


def orthogonality_check(psi, psi_perp):
    """Overlap magnitude ``|<psi|psi_perp>|`` (0 for an orthogonal pair)."""
    return fidelity(psi, psi_perp)


def gram_schmidt_orthogonalize(psi_perp, psi):
    """Remove the ``psi`` component from ``psi_perp`` and renormalize."""
    psi_perp, psi = as_state(psi_perp), as_state(psi)
    _check_dims(psi, psi_perp)
    u, v = psi.amplitudes, psi_perp.amplitudes
    residual = v - np.vdot(u, v) * u
    # second pass keeps the overlap at roundoff level even for nearly parallel input
    residual = residual - np.vdot(u, residual) * u
    norm = np.linalg.norm(residual)
    if norm <= PARALLEL_TOL:
        raise ParallelStates(f"companion state is parallel to psi (residual norm {norm:.2e})")
    return PureState(residual / norm)
