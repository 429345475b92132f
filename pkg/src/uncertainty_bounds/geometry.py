"""Refined triangle inequalities on complex Euclidean vectors.

Two-vector form (Maligranda)::

    max(|x1|,|x2|) (2 - D) >= |x1| + |x2| - |x1 + x2| >= min(|x1|,|x2|) (2 - D)

with the angular distance ``D = | x1/|x1| + x2/|x2| |``, and its squared
rearrangement ``F_L - 2|x1||x2| >= |x1|^2 + |x2|^2 >= F_R / 2``.

n-vector form (Kato et al.) replaces ``2 - D`` by ``xi = n - |sum x_j/|x_j||``.
Nothing here knows about quantum states; ``bounds2`` and ``multi`` feed the
deviation-vector norms into :func:`two_vector_bounds` / :func:`n_vector_bounds`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TooFewVectors, ZeroVector

ZERO_TOL = 1e-12


def _nonzero_norm(x, label="vector"):
    norm = float(np.linalg.norm(x))
    if not norm > ZERO_TOL:
        raise ZeroVector(f"{label} has norm {norm:.3e} <= {ZERO_TOL}")
    return norm


def _vec(x):
    return np.asarray(x, dtype=complex).reshape(-1)


def angular_distance(x1, x2):
    x1, x2 = _vec(x1), _vec(x2)
    n1 = _nonzero_norm(x1, "x1")
    n2 = _nonzero_norm(x2, "x2")
    return float(np.linalg.norm(x1 / n1 + x2 / n2))


def two_vector_bounds(norm1, norm2, norm_sum, gap):
    """Lower/upper bounds on ``norm1**2 + norm2**2`` from the squared sandwich.

    ``gap`` plays the role of ``2 - D``; callers may pass any quantity that
    bounds it from the correct side (the orthogonal-state families do).
    """
    lo, hi = min(norm1, norm2), max(norm1, norm2)
    lower = 0.5 * (norm_sum + gap * lo) ** 2
    upper = (norm_sum + gap * hi) ** 2 - 2.0 * norm1 * norm2
    return float(lower), float(upper)


def n_vector_bounds(norms, norm_sum, xi):
    """Lower/upper bounds on ``sum(norms**2)``; ``xi`` plays the role of ``n - |sum of units|``."""
    norms = np.asarray(norms, dtype=float)
    n = norms.size
    total = norms.sum()
    cross = total * total - float(np.dot(norms, norms))
    lower = (norm_sum + xi * norms.min()) ** 2 / n
    upper = (norm_sum + xi * norms.max()) ** 2 - cross
    return float(lower), float(upper)


@dataclass(frozen=True)
class MaligrandaReport:
    norm1: float
    norm2: float
    norm_sum: float
    angular_distance: float
    f_left: float
    f_right: float
    triangle_lower_slack: float
    triangle_upper_slack: float
    sandwich_lower_slack: float
    sandwich_upper_slack: float

    @property
    def min_slack(self):
        return min(
            self.triangle_lower_slack,
            self.triangle_upper_slack,
            self.sandwich_lower_slack,
            self.sandwich_upper_slack,
        )


def maligranda_sandwich(x1, x2):
    x1, x2 = _vec(x1), _vec(x2)
    n1 = _nonzero_norm(x1, "x1")
    n2 = _nonzero_norm(x2, "x2")
    d = float(np.linalg.norm(x1 / n1 + x2 / n2))
    s = float(np.linalg.norm(x1 + x2))
    lo, hi = min(n1, n2), max(n1, n2)
    f_right = (s + lo * (2.0 - d)) ** 2
    f_left = (s + hi * (2.0 - d)) ** 2
    defect = n1 + n2 - s
    squares = n1 * n1 + n2 * n2
    return MaligrandaReport(
        norm1=n1,
        norm2=n2,
        norm_sum=s,
        angular_distance=d,
        f_left=f_left,
        f_right=f_right,
        triangle_lower_slack=defect - lo * (2.0 - d),
        triangle_upper_slack=hi * (2.0 - d) - defect,
        sandwich_lower_slack=squares - 0.5 * f_right,
        sandwich_upper_slack=(f_left - 2.0 * n1 * n2) - squares,
    )


@dataclass(frozen=True)
class KatoReport:
    norms: tuple
    norm_sum: float
    xi: float
    upper: float
    lower: float
    cross_term_sum: float
    triangle_lower_slack: float
    triangle_upper_slack: float

    @property
    def sum_of_squares(self):
        return float(sum(n * n for n in self.norms))

    @property
    def lower_slack(self):
        return self.sum_of_squares - self.lower

    @property
    def upper_slack(self):
        return self.upper - self.sum_of_squares

    @property
    def min_slack(self):
        return min(
            self.lower_slack,
            self.upper_slack,
            self.triangle_lower_slack,
            self.triangle_upper_slack,
        )


def kato_sandwich(xs):
    vecs = [_vec(x) for x in xs]
    if len(vecs) < 2:
        raise TooFewVectors(f"need at least two vectors, got {len(vecs)}")
    norms = [_nonzero_norm(v, f"x[{k}]") for k, v in enumerate(vecs)]
    n = len(vecs)
    units = sum(v / nv for v, nv in zip(vecs, norms))
    xi = n - float(np.linalg.norm(units))
    s = float(np.linalg.norm(sum(vecs)))
    lower, upper = n_vector_bounds(norms, s, xi)
    total = sum(norms)
    cross = total * total - sum(v * v for v in norms)
    defect = total - s
    return KatoReport(
        norms=tuple(norms),
        norm_sum=s,
        xi=xi,
        upper=upper,
        lower=lower,
        cross_term_sum=cross,
        triangle_lower_slack=defect - min(norms) * xi,
        triangle_upper_slack=max(norms) * xi - defect,
    )
