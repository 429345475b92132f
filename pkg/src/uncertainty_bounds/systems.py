"""The three worked example systems and their closed-form moments.

* ``number_quadrature``: ``A = a^dagger a``, ``B = (a + a^dagger)/2`` on a truncated
  Fock space, ``psi = cos t|0> + sin t e^{ip}|1>``.
* ``spin1``: ``A = J_x``, ``B = J_y`` for spin 1 in the basis (|-1>, |0>, |1>),
  ``psi = cos t|-1> + sin t e^{ip}|1>``.
* ``su11``: ``A = K_x``, ``B = K_y`` on two truncated modes, product basis
  indexed ``n1 * cutoff + n2`` (``n1`` slowest),
  ``psi = cos t|00> + sin t e^{ip}|11>``.

Each comes with a hand-specified reference companion state.  The
companions of ``spin1`` and ``su11`` are orthogonal to ``psi`` only when
``e^{2ip} = 1``; they are built verbatim and never repaired here.

``analytic_moments`` evaluates the reference closed forms verbatim.
Several of them disagree with the operators they describe (conjugated
phases, flipped signs).  ``REDERIVED`` holds closed forms re-derived by hand
from the ladder actions; ``matrix_vs_analytic`` uses them to tell a reference
erratum apart from a genuine matrix bug.  The matrix value is authoritative.
"""

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .errors import CutoffTooSmall
from .hilbert import (
    Observable,
    PureState,
    commutator_expectation,
    matrix_element,
    moments,
)

SYSTEMS = ("number_quadrature", "spin1", "su11")
DEFAULT_CUTOFF = {"number_quadrature": 8, "su11": 4}
MIN_CUTOFF = 4
FIELDS = ("var_a", "var_b", "sum", "cov", "comm", "proj_a", "proj_b")


def annihilation(levels):
    """Truncated ``a`` with ``a|n> = sqrt(n)|n-1>`` on levels ``0..levels-1``."""
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), 1).astype(complex)


def spin1_operators():
    """(J_x, J_y, J_z) for spin 1 in the (|-1>, |0>, |1>) basis, hbar = 1.

    Phase convention: ``J+|-1> = sqrt2 |0>`` and ``J+|0> = -sqrt2 |1>``.  This
    is the standard representation with the sign of ``|1>`` flipped; it is the
    convention under which the closed-form variances and covariance of the
    spin-1 example hold.
    """
    raising = np.zeros((3, 3), dtype=complex)
    raising[1, 0] = np.sqrt(2.0)
    raising[2, 1] = -np.sqrt(2.0)
    lowering = raising.conj().T
    jx = 0.5 * (raising + lowering)
    jy = (raising - lowering) / 2j
    jz = np.diag([-1.0, 0.0, 1.0]).astype(complex)
    return jx, jy, jz


def su11_operators(levels):
    """(K_x, K_y, K_z) on two modes truncated to ``levels`` each."""
    a = annihilation(levels)
    eye = np.eye(levels)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    pair_up = a1.conj().T @ a2.conj().T
    pair_down = a1 @ a2
    kx = 0.5 * (pair_up + pair_down)
    ky = (pair_up - pair_down) / 2j
    n_total = a1.conj().T @ a1 + a2.conj().T @ a2
    kz = 0.5 * (n_total + np.eye(levels * levels))
    return kx, ky, kz


@dataclass(frozen=True, eq=False)
class ExampleSystem:
    name: str
    A: Observable
    B: Observable
    cutoff: int | None = None
    extra: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    @property
    def dim(self):
        return self.A.dim

    def operator(self, label):
        """Look up ``"A"``, ``"B"`` or a named extra (e.g. ``"Jz"``)."""
        if label == "A":
            return self.A
        if label == "B":
            return self.B
        try:
            return self.extra[label]
        except KeyError:
            names = ["A", "B", *self.extra]
            raise KeyError(f"{self.name} has no operator {label!r}; known: {names}") from None

    def state_pair(self, theta, phi):
        """``(psi, psi_perp)`` at the given angles (radians)."""
        c, s = np.cos(theta), np.sin(theta)
        ph = np.exp(1j * phi)
        psi = np.zeros(self.dim, dtype=complex)
        perp = np.zeros(self.dim, dtype=complex)
        if self.name == "number_quadrature":
            psi[0], psi[1] = c, s * ph
            perp[0], perp[1] = s, -c * ph
        elif self.name == "spin1":
            psi[0], psi[2] = c, s * ph
            perp[:] = np.sqrt(3.0) / 2.0 * np.array([s, 1.0 / np.sqrt(3.0), -c / ph])
        else:
            n = self.cutoff
            psi[0], psi[n + 1] = c, s * ph
            perp[0], perp[n + 1], perp[2 * n + 2] = s, -c / ph, 1.0 / np.sqrt(3.0)
            perp *= np.sqrt(3.0) / 2.0
        return PureState(psi), PureState(perp)


def build(name, cutoff=None):
    if name not in SYSTEMS:
        raise ValueError(f"unknown system {name!r}; choose from {SYSTEMS}")
    if name == "spin1":
        jx, jy, jz = spin1_operators()
        return ExampleSystem(
            name,
            Observable(jx),
            Observable(jy),
            None,
            MappingProxyType({"Jx": Observable(jx), "Jy": Observable(jy), "Jz": Observable(jz)}),
        )
    levels = DEFAULT_CUTOFF[name] if cutoff is None else int(cutoff)
    if levels < MIN_CUTOFF:
        raise CutoffTooSmall(f"{name} needs cutoff >= {MIN_CUTOFF}, got {levels}")
    if name == "number_quadrature":
        a = annihilation(levels)
        ad = a.conj().T
        ops = {
            "n": Observable(ad @ a),
            "x": Observable(0.5 * (a + ad)),
            "p": Observable((a - ad) / 2j),
        }
        return ExampleSystem(name, ops["n"], ops["x"], levels, MappingProxyType(ops))
    kx, ky, kz = su11_operators(levels)
    ops = {"Kx": Observable(kx), "Ky": Observable(ky), "Kz": Observable(kz)}
    return ExampleSystem(name, ops["Kx"], ops["Ky"], levels, MappingProxyType(ops))


@dataclass(frozen=True)
class AnalyticMoments:
    var_a: float
    var_b: float
    sum: float
    cov: float
    comm: complex
    proj_a: complex
    proj_b: complex


def _closed_form_number_quadrature(t, p):
    c, s = np.cos(t), np.sin(t)
    return AnalyticMoments(
        var_a=c**2 * s**2,
        var_b=0.25 * (s**2 * (3 - 4 * c**2 * np.cos(p) ** 2) + c**2),
        sum=0.25 * (c**2 + 3 * s**2 + np.sin(2 * t) ** 2 * np.sin(p) ** 2),
        cov=np.sin(4 * t) * np.cos(p) / 8,
        comm=-1j * c * s * np.sin(p),
        proj_a=complex(-c * s),
        proj_b=-0.5 * (np.cos(2 * t) * np.cos(p) + 1j * np.sin(p)),
    )


def _closed_form_spin1(t, p):
    c, s = np.cos(t), np.sin(t)
    r8 = 2.0 * np.sqrt(2.0)
    return AnalyticMoments(
        var_a=0.5 * (1 - np.sin(2 * t) * np.cos(p)),
        var_b=0.5 * (1 + np.sin(2 * t) * np.cos(p)),
        sum=1.0,
        cov=s * c * np.sin(p),
        comm=-1j * np.cos(2 * t),
        proj_a=(c + np.exp(-1j * p) * s) / r8,
        proj_b=-1j * (c - np.exp(-1j * p) * s) / r8,
    )


def _closed_form_su11(t, p):
    c, s = np.cos(t), np.sin(t)
    r3 = np.sqrt(3.0)
    return AnalyticMoments(
        var_a=(11 - 2 * np.sin(2 * t) ** 2 * np.cos(2 * p) - 8 * np.cos(2 * t) + np.cos(4 * t)) / 16,
        var_b=s**2 * (1 - c**2 * np.sin(p) ** 2) + 0.25,
        sum=(11 - 8 * np.cos(2 * t) + np.cos(4 * t)) / 8,
        cov=-(c**2) * s**2 * np.sin(p) * np.cos(p),
        comm=0.5j * (np.cos(2 * t) - 2),
        proj_a=0.25 * np.exp(-1j * p) * (s * (r3 * s + 2) - r3 * np.exp(2j * p) * c**2),
        proj_b=-0.25j * np.exp(-1j * p) * (s * (r3 * s - 2) + r3 * np.exp(2j * p) * c**2),
    )


_CLOSED_FORMS = {
    "number_quadrature": _closed_form_number_quadrature,
    "spin1": _closed_form_spin1,
    "su11": _closed_form_su11,
}


def analytic_moments(name, theta, phi):
    """Reference closed forms, evaluated verbatim (errata included)."""
    if name not in _CLOSED_FORMS:
        raise ValueError(f"unknown system {name!r}")
    return _CLOSED_FORMS[name](theta, phi)


def _rederived_number_quadrature(t, p):
    return {"proj_b": -0.5 * (np.cos(2 * t) * np.cos(p) - 1j * np.sin(p))}


def _rederived_spin1(t, p):
    c, s = np.cos(t), np.sin(t)
    r8 = 2.0 * np.sqrt(2.0)
    return {
        "proj_a": (c - s * np.exp(1j * p)) / r8,
        "proj_b": -1j * (c + s * np.exp(1j * p)) / r8,
    }


def _rederived_su11(t, p):
    c, s = np.cos(t), np.sin(t)
    r3 = np.sqrt(3.0)
    return {
        "cov": c**2 * s**2 * np.sin(p) * np.cos(p),
        "proj_a": 0.25 * np.exp(1j * p) * (s * (r3 * s + 2) - r3 * c**2),
        "proj_b": -0.25j * np.exp(1j * p) * (2 * s - r3),
    }


#: Hand re-derivations for the reference closed forms that disagree with the operators.
REDERIVED = MappingProxyType({
    "number_quadrature": _rederived_number_quadrature,
    "spin1": _rederived_spin1,
    "su11": _rederived_su11,
})


def matrix_moments(system, theta, phi):
    """Every ``AnalyticMoments`` field computed numerically on ``system``."""
    psi, perp = system.state_pair(theta, phi)
    m = moments(system.A, system.B, psi)
    return AnalyticMoments(
        var_a=m.var_a,
        var_b=m.var_b,
        sum=m.sum,
        cov=m.cov,
        comm=commutator_expectation(system.A, system.B, psi),
        proj_a=matrix_element(perp, system.A, psi),
        proj_b=matrix_element(perp, system.B, psi),
    )


@dataclass(frozen=True)
class FieldDiscrepancy:
    max_deviation: float
    max_deviation_rederived: float | None
    status: str  # "match", "erratum" or "mismatch"
    worst_point: tuple


@dataclass(frozen=True)
class DiscrepancyReport:
    system: str
    points: int
    tolerance: float
    fields: MappingProxyType

    @property
    def errata(self):
        return [k for k, v in self.fields.items() if v.status == "erratum"]

    @property
    def mismatches(self):
        return [k for k, v in self.fields.items() if v.status == "mismatch"]

    @property
    def max_deviation(self):
        """Largest deviation among fields that agree with the reference closed form."""
        devs = [v.max_deviation for v in self.fields.values() if v.status == "match"]
        return max(devs) if devs else 0.0

    def as_dict(self):
        return {
            "system": self.system,
            "points": self.points,
            "tolerance": self.tolerance,
            "fields": {
                k: {
                    "max_deviation": v.max_deviation,
                    "max_deviation_rederived": v.max_deviation_rederived,
                    "status": v.status,
                    "worst_point": list(v.worst_point),
                }
                for k, v in self.fields.items()
            },
        }


def matrix_vs_analytic(name, theta, phi, cutoff=None, tol=1e-10):
    """Compare matrix moments with the closed forms over the grid ``theta x phi``.

    A field whose reference form deviates by more than ``tol`` somewhere is
    classified ``"erratum"`` when the hand re-derivation agrees with the
    matrices within ``tol`` everywhere, and ``"mismatch"`` otherwise.
    """
    system = build(name, cutoff)
    thetas = np.atleast_1d(np.asarray(theta, dtype=float))
    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    worst = {f: (0.0, (float(thetas[0]), float(phis[0]))) for f in FIELDS}
    worst_re = {}
    for t in thetas:
        for p in phis:
            got = matrix_moments(system, t, p)
            reference = analytic_moments(name, t, p)
            rederived = REDERIVED[name](t, p)
            for f in FIELDS:
                dev = abs(getattr(got, f) - getattr(reference, f))
                if dev > worst[f][0]:
                    worst[f] = (float(dev), (float(t), float(p)))
                if f in rederived:
                    worst_re[f] = max(worst_re.get(f, 0.0), float(abs(getattr(got, f) - rederived[f])))
    fields = {}
    for f in FIELDS:
        dev, point = worst[f]
        re_dev = worst_re.get(f)
        if dev <= tol:
            status = "match"
        elif re_dev is not None and re_dev <= tol:
            status = "erratum"
        else:
            status = "mismatch"
        fields[f] = FieldDiscrepancy(dev, re_dev, status, point)
    return DiscrepancyReport(name, thetas.size * phis.size, tol, MappingProxyType(fields))
