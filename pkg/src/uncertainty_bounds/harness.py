"""Randomized verification of every inequality in the package.

Each trial draws its own generator from ``SeedSequence([seed, trial])`` so a
report is a pure function of the config, any prefix of trials reproduces the
corresponding prefix of a longer run, and a counterexample can be replayed
from ``(seed, trial)`` alone.
"""

import hashlib
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds2, multi
from .errors import DegenerateVariance, SingularDenominator
from .geometry import kato_sandwich, maligranda_sandwich
from .hilbert import COEFFICIENTS, Observable, PureState, gram_schmidt_orthogonalize, moments

RNG_ALGORITHM = "numpy.random.PCG64 seeded by SeedSequence([seed, trial])"
MAX_COUNTEREXAMPLES = 100

CHECKS = (
    "maligranda_triangle",
    "maligranda_squared",
    "kato",
    "family1",
    "family2",
    "family3",
    "family4",
    "combined",
    "maccone_pati",
    "reverse_cov",
    "multi",
    "multi_orthogonal",
)


def random_state(dim, rng):
    """Complex standard-normal amplitudes, normalized."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(vec / np.linalg.norm(vec))


def random_hermitian(dim, rng):
    """``(G + G^dagger)/2`` with complex standard-normal ``G``."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable(0.5 * (g + g.conj().T))


def random_vector(dim, rng):
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def trial_rng(seed, trial):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 42
    trials: int = 10_000
    dims: tuple = (2, 6)
    n_observables: tuple = (2, 5)
    eps_var_reject: float = 1e-3
    slack_tolerance: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "n_observables", tuple(int(n) for n in self.n_observables))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        lo, hi = self.dims
        if not 2 <= lo <= hi <= 16:
            raise ValueError(f"dims must satisfy 2 <= lo <= hi <= 16, got {self.dims}")
        nlo, nhi = self.n_observables
        if not 2 <= nlo <= nhi <= 8:
            raise ValueError(f"n_observables must satisfy 2 <= lo <= hi <= 8, got {self.n_observables}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class CheckStats:
    trials: int = 0
    accepted: int = 0
    rejected: int = 0
    min_slack: float = math.inf
    slack_total: float = 0.0
    failures: int = 0

    @property
    def mean_slack(self):
        return self.slack_total / self.accepted if self.accepted else None

    def as_dict(self):
        return {
            "trials": self.trials,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "minSlack": None if self.accepted == 0 else self.min_slack,
            "meanSlack": self.mean_slack,
            "failures": self.failures,
        }


@dataclass
class FuzzReport:
    config: FuzzConfig
    per_check: dict = field(default_factory=lambda: {name: CheckStats() for name in CHECKS})
    counterexamples: list = field(default_factory=list)

    @property
    def total_failures(self):
        return sum(s.failures for s in self.per_check.values())

    def as_dict(self):
        cfg = asdict(self.config)
        return {
            "header": {
                "rng": RNG_ALGORITHM,
                "numpy": np.__version__,
                "config": {
                    "seed": cfg["seed"],
                    "trials": cfg["trials"],
                    "dims": list(cfg["dims"]),
                    "nObservables": list(cfg["n_observables"]),
                    "epsVarReject": cfg["eps_var_reject"],
                    "slackTolerance": cfg["slack_tolerance"],
                },
            },
            "perCheck": {name: stats.as_dict() for name, stats in self.per_check.items()},
            "counterexamples": self.counterexamples,
            "totalFailures": self.total_failures,
        }


def _digest(*arrays):
    h = hashlib.sha256()
    for arr in arrays:
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()[:16]


class _Recorder:
    def __init__(self, report, trial):
        self.report = report
        self.trial = trial
        self.tol = report.config.slack_tolerance

    def reject(self, name):
        stats = self.report.per_check[name]
        stats.trials += 1
        stats.rejected += 1

    def slack(self, name, value, *inputs):
        stats = self.report.per_check[name]
        stats.trials += 1
        stats.accepted += 1
        stats.slack_total += value
        stats.min_slack = min(stats.min_slack, value)
        if value < -self.tol:
            stats.failures += 1
            if len(self.report.counterexamples) < MAX_COUNTEREXAMPLES:
                self.report.counterexamples.append({
                    "check": name,
                    "trial": self.trial,
                    "digest": _digest(*inputs),
                    "slack": value,
                })


def _run_trial(report, trial):
    cfg = report.config
    rng = trial_rng(cfg.seed, trial)
    rec = _Recorder(report, trial)
    dim = int(rng.integers(cfg.dims[0], cfg.dims[1] + 1))

    # raw-vector geometry
    x1, x2 = random_vector(dim, rng), random_vector(dim, rng)
    mal = maligranda_sandwich(x1, x2)
    rec.slack("maligranda_triangle", min(mal.triangle_lower_slack, mal.triangle_upper_slack), x1, x2)
    rec.slack("maligranda_squared", min(mal.sandwich_lower_slack, mal.sandwich_upper_slack), x1, x2)
    k = int(rng.integers(2, 7))
    xs = [random_vector(dim, rng) for _ in range(k)]
    kato = kato_sandwich(xs)
    rec.slack("kato", kato.min_slack, *xs)

    # two observables
    a, b = random_hermitian(dim, rng), random_hermitian(dim, rng)
    psi = random_state(dim, rng)
    inputs = (a.matrix, b.matrix, psi.amplitudes)
    m = moments(a, b, psi)
    exact = m.sum
    two_obs = ("family1", "family2", "family3", "family4", "combined", "maccone_pati", "reverse_cov")
    if min(m.std_a, m.std_b) < cfg.eps_var_reject:
        for name in two_obs:
            rec.reject(name)
    else:
        perp = bounds2.construct_orthogonal(a, b, psi, "auto")
        sets = bounds2.evaluate_families(a, b, psi, psi_perp=perp)
        for bps in sets:
            rec.slack(f"family{bps.family}", bps.slack(exact), *inputs)
        comb = bounds2.combined(sets)
        rec.slack("combined", min(exact - comb.lower, comb.upper - exact, comb.upper - comb.lower), *inputs)
        mp = bounds2.maccone_pati(a, b, psi, perp)
        rec.slack("maccone_pati", exact - max(mp), *inputs)
        try:
            rec.slack("reverse_cov", bounds2.reverse_cov(a, b, psi) - exact, *inputs)
        except (DegenerateVariance, SingularDenominator):
            rec.reject("reverse_cov")

    # n observables
    n = int(rng.integers(cfg.n_observables[0], cfg.n_observables[1] + 1))
    observables = [random_hermitian(dim, rng) for _ in range(n)]
    coeffs = tuple(COEFFICIENTS[int(i)] for i in rng.integers(0, 4, size=n))
    zeta = random_state(dim, rng)
    zeta_perp = gram_schmidt_orthogonalize(random_state(dim, rng), zeta)
    spec = multi.MultiObsSpec(observables, coeffs)
    n_inputs = [o.matrix for o in observables] + [zeta.amplitudes]
    try:
        mm = multi.multi_moments(spec, zeta, cfg.eps_var_reject)
    except DegenerateVariance:
        rec.reject("multi")
        rec.reject("multi_orthogonal")
        return
    exact_n = mm.sum
    res = multi.multi_bounds(spec, zeta)
    rec.slack("multi", min(exact_n - res.lower, res.upper - exact_n), *n_inputs)
    res = multi.multi_bounds_orthogonal(spec, zeta, zeta_perp, variant="symmetric")
    rec.slack("multi_orthogonal", min(exact_n - res.lower, res.upper - exact_n), *n_inputs)


def run_fuzz(config=None):
    """Run every check for ``config.trials`` trials; failures are data, never exceptions."""
    config = config or FuzzConfig()
    report = FuzzReport(config)
    for trial in range(config.trials):
        _run_trial(report, trial)
    return report
