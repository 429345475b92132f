import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HALF, KET0, KET1, PLUS, QUARTER, SX, SY, SZ, dims, random_setup, seeds
from uncertainty_bounds import bounds2
from uncertainty_bounds.bounds2 import (
    combined,
    construct_orthogonal,
    evaluate_families,
    family1,
    family2,
    family3,
    family4,
    maccone_pati,
    reverse_cov,
    robertson,
    schrodinger,
)
from uncertainty_bounds.errors import DegenerateVariance, NotOrthogonal, SingularDenominator
from uncertainty_bounds.geometry import maligranda_sandwich
from uncertainty_bounds.hilbert import (
    PureState,
    deviation_vector,
    fidelity,
    gram_schmidt_orthogonalize,
    moments,
    normalize,
    orthogonality_check,
)

TOL = 1e-9


def repaired_pair(system, theta, phi):
    psi, perp = system.state_pair(theta, phi)
    return psi, gram_schmidt_orthogonalize(perp, psi)


def brackets(bps, exact, tol=TOL):
    return bps.lower - tol <= exact <= bps.upper + tol


def random_companion(psi, rng):
    v = rng.standard_normal(psi.dim) + 1j * rng.standard_normal(psi.dim)
    return gram_schmidt_orthogonalize(normalize(v), psi)


# --- family 1 -----------------------------------------------------------------

def test_family1_identical_observables():
    bps = family1(SZ, SZ, PLUS)
    assert bps.lower_plus == pytest.approx(2.0, abs=1e-12)
    assert bps.upper_plus == pytest.approx(2.0, abs=1e-12)
    assert bps.scalars["g_plus"] == pytest.approx(0.0, abs=1e-12)
    assert bps.scalars["dev_plus"] == pytest.approx(2.0, abs=1e-12)


def test_family1_spin1_saturates(spin1):
    psi, _ = spin1.state_pair(QUARTER, HALF)
    bps = family1(spin1.A, spin1.B, psi)
    assert bps.lower_plus == pytest.approx(1.0, abs=1e-9)
    assert bps.lower_minus == pytest.approx(1.0, abs=1e-9)


def test_family1_number_quadrature(nq):
    psi, _ = nq.state_pair(QUARTER, HALF)
    assert brackets(family1(nq.A, nq.B, psi), 0.75)


def test_family1_degenerate():
    with pytest.raises(DegenerateVariance):
        family1(SZ, SX, KET0)


# --- family 2 -----------------------------------------------------------------

def test_family2_number_quadrature(nq):
    psi, perp = nq.state_pair(QUARTER, HALF)
    assert brackets(family2(nq.A, nq.B, psi, perp), 0.75)


def test_family2_rejects_overlap():
    psi = PureState(KET0)
    perp = PureState([0.1, np.sqrt(1 - 0.01)])
    with pytest.raises(NotOrthogonal):
        family2(SX, SY, psi, perp)


def test_family2_exact_eigenstate_is_degenerate():
    with pytest.raises(DegenerateVariance):
        family2(SZ, SX, KET0, KET1)


@pytest.mark.parametrize("eps", [1e-2, 1e-4])
def test_family2_near_eigenstate(eps):
    # psi close to the |0> eigenstate of A = sz, companion from (B - <B>) psi
    psi = normalize([1.0, eps * np.exp(0.3j)])
    perp = construct_orthogonal(SZ, SX, psi, "opB")
    exact = moments(SZ, SX, psi).sum
    assert brackets(family2(SZ, SX, psi, perp), exact)
    assert brackets(family4(SZ, SX, psi, perp), exact)


def test_family2_default_companion(nq):
    psi, _ = nq.state_pair(0.6, 0.9)
    exact = moments(nq.A, nq.B, psi).sum
    assert brackets(family2(nq.A, nq.B, psi), exact)


# --- family 3 -----------------------------------------------------------------

def test_family3_pauli_saturation():
    bps = family3(SX, SY, KET0)
    for v in (bps.lower_plus, bps.lower_minus, bps.upper_plus, bps.upper_minus):
        assert v == pytest.approx(2.0, abs=1e-12)
    sc = bps.scalars
    assert (sc["mu_plus"], sc["nu_plus"]) == pytest.approx((0.0, 2.0), abs=1e-12)
    assert (sc["mu_minus"], sc["nu_minus"]) == pytest.approx((2.0, 0.0), abs=1e-12)


def test_family3_number_quadrature(nq):
    psi, _ = nq.state_pair(QUARTER, HALF)
    bps = family3(nq.A, nq.B, psi)
    # hand values from dA = 1/2, dB = 1/sqrt 2, i<[A,B]> = 1/2
    nu = 2 - np.sqrt(2 + np.sqrt(2))
    lower = 0.5 * (np.sqrt(1.25) + nu * 0.5) ** 2
    upper = (np.sqrt(1.25) + nu * np.sqrt(0.5)) ** 2 - 2 * 0.5 * np.sqrt(0.5)
    assert bps.lower_plus == pytest.approx(lower, abs=1e-12)
    assert bps.upper_plus == pytest.approx(upper, abs=1e-12)
    assert bps.lower_plus == pytest.approx(0.7129, abs=5e-4)
    assert bps.upper_plus == pytest.approx(0.7950, abs=5e-4)


# --- family 4 -----------------------------------------------------------------

def test_family4_grid(nq):
    for theta in np.linspace(0.05, HALF - 0.05, 12):
        for phi in np.linspace(0, 2 * np.pi, 12, endpoint=False):
            psi, perp = nq.state_pair(theta, phi)
            exact = moments(nq.A, nq.B, psi).sum
            assert brackets(family4(nq.A, nq.B, psi, perp), exact)


@pytest.mark.parametrize("theta", [0.2, QUARTER, 1.0, 2.5])
def test_family4_spin1_saturation(spin1, theta):
    psi, perp = repaired_pair(spin1, theta, HALF)
    bps = family4(spin1.A, spin1.B, psi, perp)
    assert bps.lower_plus == pytest.approx(1.0, abs=1e-9)
    assert bps.lower_minus == pytest.approx(1.0, abs=1e-9)


def test_family4_rejects_builtin_companion(spin1):
    psi, perp = spin1.state_pair(QUARTER, 0.3)
    with pytest.raises(NotOrthogonal):
        family4(spin1.A, spin1.B, psi, perp)


# --- combined -----------------------------------------------------------------

def test_combined_single_set(nq):
    psi, _ = nq.state_pair(0.4, 0.2)
    bps = family1(nq.A, nq.B, psi)
    comb = combined([bps])
    assert comb.lower == bps.lower
    assert comb.upper == bps.upper


def test_combined_spin1(spin1):
    psi, perp = repaired_pair(spin1, QUARTER, HALF)
    comb = combined(evaluate_families(spin1.A, spin1.B, psi, psi_perp=perp))
    assert comb.lower == pytest.approx(1.0, abs=1e-9)
    assert comb.upper == pytest.approx(1.0, abs=1e-9)


def test_combined_number_quadrature(nq):
    psi, _ = nq.state_pair(QUARTER, HALF)
    comb = combined(evaluate_families(nq.A, nq.B, psi, families=(1, 3)))
    assert comb.lower == pytest.approx(0.7129, abs=5e-4)
    assert comb.lower_source == "3+"


def test_combined_tie_break_prefers_low_family_and_plus():
    sets = evaluate_families(SX, SY, KET0, families=(3, 1), psi_perp=KET1)
    comb = combined(sets)
    assert comb.lower == pytest.approx(2.0)
    assert comb.lower_source == "1+"


def test_combined_empty():
    with pytest.raises(ValueError):
        combined([])


# --- baselines ------------------------------------------------------------------

def test_robertson_schrodinger_commuting():
    diag = np.diag([1.0, 2.0])
    assert robertson(SZ, diag, KET0) == 0
    assert schrodinger(SZ, diag, KET0) == 0


def test_robertson_spin1(spin1):
    psi, _ = spin1.state_pair(np.pi / 8, 0.0)
    assert robertson(spin1.A, spin1.B, psi) == pytest.approx(0.125, abs=1e-14)


def test_schrodinger_spin1(spin1):
    t, p = np.pi / 8, QUARTER
    psi, _ = spin1.state_pair(t, p)
    cov = np.sin(t) * np.cos(t) * np.sin(p)
    assert schrodinger(spin1.A, spin1.B, psi) == pytest.approx(robertson(spin1.A, spin1.B, psi) + cov**2, abs=1e-14)


def test_maccone_pati_number_quadrature(nq):
    psi, perp = nq.state_pair(QUARTER, QUARTER)
    exact = moments(nq.A, nq.B, psi).sum
    assert max(maccone_pati(nq.A, nq.B, psi, perp)) <= exact + TOL


def test_maccone_pati_pauli():
    plus, minus = maccone_pati(SX, SY, KET0, KET1)
    # i<[sx, sy]> = -2<sz> = -2; |<0|sx + i sy|1>|^2 = 4
    assert plus == pytest.approx(2.0)
    assert minus == pytest.approx(2.0)
    assert max(plus, minus) == pytest.approx(moments(SX, SY, KET0).sum)


def test_maccone_pati_eigenstate_companion():
    psi = normalize([1.0, 1e-3])
    perp = construct_orthogonal(SZ, SX, psi, "opB")
    assert max(maccone_pati(SZ, SX, psi, perp)) <= moments(SZ, SX, psi).sum + TOL


def test_reverse_cov_singular():
    with pytest.raises(SingularDenominator):
        reverse_cov(SZ, SZ, PLUS)


def test_reverse_cov_examples(spin1, su11):
    psi, _ = spin1.state_pair(np.pi / 8, QUARTER)
    assert reverse_cov(spin1.A, spin1.B, psi) >= 1 - TOL
    psi, _ = su11.state_pair(np.pi / 3, 0.0)
    assert reverse_cov(su11.A, su11.B, psi) >= moments(su11.A, su11.B, psi).sum - TOL


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_reverse_cov_matches_direct_formula(seed, dim):
    (a, b), psi, _ = random_setup(seed, dim)
    v = psi.amplitudes
    ev = lambda m: np.vdot(v, m @ v).real
    va = ev(a.matrix @ a.matrix) - ev(a.matrix) ** 2
    vb = ev(b.matrix @ b.matrix) - ev(b.matrix) ** 2
    d = a.matrix - b.matrix
    vd = ev(d @ d) - ev(d) ** 2
    cov = 0.5 * ev(a.matrix @ b.matrix + b.matrix @ a.matrix) - ev(a.matrix) * ev(b.matrix)
    r = cov / np.sqrt(va * vb)
    ref = 2 * vd / (1 - r) - 2 * np.sqrt(va * vb)
    assert reverse_cov(a, b, psi) == pytest.approx(ref, rel=1e-8)


def test_baselines_bundle(nq):
    psi, perp = nq.state_pair(0.5, 0.5)
    bb = bounds2.baselines(nq.A, nq.B, psi, perp)
    assert bb.schrodinger_product >= bb.robertson_product
    assert bb.maccone_pati_plus is not None
    assert bounds2.baselines(SZ, SZ, PLUS).reverse_cov_upper is None


# --- companion construction ----------------------------------------------------

def test_construct_orthogonal_eigenstate_branch():
    perp = construct_orthogonal(SX, SZ, KET0, "auto")
    assert fidelity(perp, KET1) == pytest.approx(1.0, abs=1e-15)


def test_construct_orthogonal_sum_plus(nq):
    psi, _ = nq.state_pair(QUARTER, QUARTER)
    perp = construct_orthogonal(nq.A, nq.B, psi, "sumPlus")
    assert orthogonality_check(psi, perp) < 1e-12


def test_construct_orthogonal_joint_eigenstate():
    with pytest.raises(DegenerateVariance):
        construct_orthogonal(SZ, np.diag([2.0, 5.0]), KET0, "auto")


def test_construct_orthogonal_bad_mode():
    with pytest.raises(ValueError):
        construct_orthogonal(SX, SY, KET0, "nope")


# --- properties -------------------------------------------------------------------

def _spread_ok(a, b, psi):
    m = moments(a, b, psi)
    return min(m.std_a, m.std_b) > 1e-3


@settings(max_examples=150, deadline=None)
@given(seeds, dims)
def test_all_families_sound_with_random_companion(seed, dim):
    (a, b), psi, rng = random_setup(seed, dim)
    if not _spread_ok(a, b, psi):
        return
    perp = random_companion(psi, rng)
    exact = moments(a, b, psi).sum
    sets = evaluate_families(a, b, psi, psi_perp=perp)
    for bps in sets:
        assert bps.slack(exact) >= -TOL * max(1.0, exact)
    comb = combined(sets)
    assert comb.lower <= exact + TOL * max(1.0, exact) <= comb.upper + 2 * TOL * max(1.0, exact)
    assert max(maccone_pati(a, b, psi, perp)) <= exact + TOL * max(1.0, exact)


@settings(max_examples=80, deadline=None)
@given(seeds, dims, st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2 * np.pi))
def test_families_shift_and_phase_invariant(seed, dim, ca, cb, alpha):
    (a, b), psi, _ = random_setup(seed, dim)
    if not _spread_ok(a, b, psi):
        return
    base = [family1(a, b, psi), family3(a, b, psi)]
    moved_psi = np.exp(1j * alpha) * psi.amplitudes
    moved = [
        family1(a.matrix + ca * np.eye(dim), b.matrix + cb * np.eye(dim), moved_psi),
        family3(a.matrix + ca * np.eye(dim), b.matrix + cb * np.eye(dim), moved_psi),
    ]
    for x, y in zip(base, moved):
        assert (y.lower_plus, y.lower_minus, y.upper_plus, y.upper_minus) == pytest.approx(
            (x.lower_plus, x.lower_minus, x.upper_plus, x.upper_minus), rel=1e-8, abs=1e-10
        )


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_exchange_symmetry(seed, dim):
    (a, b), psi, _ = random_setup(seed, dim)
    if not _spread_ok(a, b, psi):
        return
    f1, g1 = family1(a, b, psi), family1(b, a, psi)
    assert (g1.lower_plus, g1.upper_minus) == pytest.approx((f1.lower_plus, f1.upper_minus), rel=1e-10)
    # swapping A and B turns A + iB into B + iA = i(A - iB): the branches trade places
    f3, g3 = family3(a, b, psi), family3(b, a, psi)
    assert (g3.lower_plus, g3.upper_plus) == pytest.approx((f3.lower_minus, f3.upper_minus), rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_family2_companion_along_sum(seed, dim):
    (a, b), psi, _ = random_setup(seed, dim)
    if not _spread_ok(a, b, psi):
        return
    perp = construct_orthogonal(a, b, psi, "sumPlus")
    f1, f2 = family1(a, b, psi), family2(a, b, psi, perp)
    # projecting on the direction of (A + B - <A + B>)psi recovers the full deviation norm
    assert f2.scalars["j_plus"] == pytest.approx(f1.scalars["dev_plus"], rel=1e-10)
    # |<u|w>| <= |w| so the projected gap is never smaller
    assert f2.scalars["k_plus"] >= f1.scalars["g_plus"] - 1e-12


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_families_match_raw_sandwich(seed, dim):
    (a, b), psi, _ = random_setup(seed, dim)
    if not _spread_ok(a, b, psi):
        return
    da = deviation_vector(a, psi).components
    db = deviation_vector(b, psi).components
    for bps, partner in ((family1(a, b, psi), db), (family3(a, b, psi), 1j * db)):
        rep = maligranda_sandwich(da, partner)
        assert bps.lower_plus == pytest.approx(0.5 * rep.f_right, abs=1e-12 * rep.f_right + 1e-12)
        upper = rep.f_left - 2 * rep.norm1 * rep.norm2
        assert bps.upper_plus == pytest.approx(upper, abs=1e-12 * rep.f_left + 1e-12)
