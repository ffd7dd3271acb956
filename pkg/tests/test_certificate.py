import math
import random
from fractions import Fraction

import numpy as np
import pytest

from nctorus.algebra import PhaseContext
from nctorus.certificate import (
    CertParams,
    Certificate,
    ConsistentWithTrace,
    DiophantineBudgetError,
    average_R,
    build_H_prime,
    build_H_second,
    choose_parameters,
    det_P,
    diophantine_N,
    family_generators,
    refute,
    satisfies_diophantine,
    verify,
    witness_vector,
)
from nctorus.states import (
    HermitianMatrix,
    StateCandidate,
    determinant_exact,
    eval_generator,
    gram,
    is_psd,
    quadratic_form,
    trace_state,
)


# -- diophantine ------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 10)])
def test_diophantine_minimal_and_divisible(ctx, d, eps):
    n = diophantine_N(ctx, 1, d, eps)
    assert n % math.factorial(d) == 0
    assert satisfies_diophantine(ctx.h, n, 1, d, eps)
    # minimality: no smaller multiple of d! satisfies the inequality
    fact = math.factorial(d)
    for k in range(1, n // fact):
        assert not satisfies_diophantine(ctx.h, fact * k, 1, d, eps)


def test_diophantine_scan_agrees_with_exact(ctx):
    for d, xi2, eps in [(2, 1, Fraction(1, 2)), (3, 2, Fraction(1, 2)), (4, 1, Fraction(1, 1))]:
        exact = diophantine_N(ctx, xi2, d, eps, method="auto")
        scanned = diophantine_N(ctx, xi2, d, eps, method="scan", budget=10**6)
        assert exact == scanned


def test_diophantine_budget_error(ctx):
    with pytest.raises(DiophantineBudgetError) as info:
        diophantine_N(ctx, 1, 3, Fraction(1, 10**6), budget=50)
    assert info.value.best_n is not None
    with pytest.raises(DiophantineBudgetError):
        diophantine_N(ctx, 1, 3, Fraction(1, 10**6), budget=50, method="scan")


def test_diophantine_rejects_bad_args(ctx):
    with pytest.raises(ValueError):
        diophantine_N(ctx, 1, 2, 0)
    with pytest.raises(ValueError):
        diophantine_N(ctx, 0, 2, Fraction(1, 2))


# -- restriction matrices ---------------------------------------------------

def test_build_H_prime_trivial_q():
    p = Fraction(1, 2)
    h = build_H_prime(p, {}, 4, 2, 100, exact=True)
    arr = h.to_numpy()
    expect = np.eye(5, dtype=complex)
    expect[0, 1:] = 0.5
    expect[1:, 0] = 0.5
    assert np.allclose(arr, expect)


def test_build_H_prime_root_of_unity_phase():
    q = {7: Fraction(1, 3)}
    h = build_H_prime(Fraction(1, 2), q, 2, 1, 7, exact=True)
    # d = 2, l = 1: off-diagonal phase e(1/2) = -1
    assert h.entry(1, 2) == h.entry(2, 1) == -Fraction(1, 3)
    assert h.is_hermitian()
    with pytest.raises(ValueError):
        build_H_prime(Fraction(1, 2), q, 2, 3, 7)


def test_build_H_second_trace_identity(ctx):
    params = CertParams(xi=(1, 1), d=3, N=math.factorial(3) * 4, epsilon=Fraction(1, 10))
    for l in range(1, 4):
        h = build_H_second(trace_state(), params, l, ctx, exact=True)
        arr = h.to_numpy(ctx)
        assert np.allclose(arr, np.eye(4))


def test_build_H_second_first_row(ctx):
    state = StateCandidate({1: 0.5})
    params = CertParams(xi=(1, 1), d=4, N=math.factorial(4) * 3, epsilon=Fraction(1, 10))
    h = build_H_second(state, params, 2, ctx)
    arr = h.to_numpy()
    assert np.allclose(arr[0, 1:], 0.5)
    assert np.allclose(arr[1:, 0], 0.5)
    assert np.allclose(np.diag(arr), 1.0)


def _q_map_from_state(state, d, n_val, xi2):
    return {j * n_val: eval_generator(state, (j * n_val * xi2, 0)) for j in range(1, d)}


def test_perturbation_bound(ctx):
    # states with nonzero q values on the difference orbits
    for d in (2, 3, 4, 5):
        for eps in (Fraction(1, 2), Fraction(1, 10)):
            n_val = diophantine_N(ctx, 1, d, eps)
            q_orbits = {j * n_val: Fraction(1, 2 + j) for j in range(1, d)}
            state = StateCandidate({1: Fraction(1, 2), **q_orbits})
            params = CertParams(xi=(1, 1), d=d, N=n_val, epsilon=eps)
            for l in range(1, d + 1):
                second = build_H_second(state, params, l, ctx).to_numpy()
                prime = build_H_prime(Fraction(1, 2),
                                      _q_map_from_state(state, d, n_val, 1),
                                      d, l, n_val).to_numpy()
                assert np.max(np.abs(second - prime)) < float(eps)


def test_error_budget_bound(ctx):
    for d in (2, 3, 4):
        eps = Fraction(1, 20)
        n_val = diophantine_N(ctx, 1, d, eps)
        q_orbits = {j * n_val: Fraction(1, 3 * j) for j in range(1, d)}
        p = Fraction(1, 2)
        state = StateCandidate({1: p, **q_orbits})
        params = CertParams(xi=(1, 1), d=d, N=n_val, epsilon=eps)
        mats = [build_H_second(state, params, l, ctx) for l in range(1, d + 1)]
        avg = average_R(mats).to_numpy()
        det_avg = np.linalg.det(avg).real
        bound = float(eps) * 2 * d * (d - 1) * math.factorial(d)
        assert abs(det_avg - float(det_P(p, d))) <= bound


# -- averaging and P_d ------------------------------------------------------

def test_average_cancellation_exact():
    rng = random.Random(3)
    for d in range(2, 13):
        q = {j * 10: Fraction(rng.randint(-8, 8), 8) for j in range(1, d)}
        mats = [build_H_prime(Fraction(1, 2), q, d, l, 10, exact=True) for l in range(1, d + 1)]
        avg = average_R(mats)
        for j in range(1, d + 1):
            for i in range(j + 1, d + 1):
                assert avg.entry(j, i).is_zero, (d, j, i)
        # and the result is exactly P_d
        pd = build_H_prime(Fraction(1, 2), {}, d, 1, 10, exact=True)
        for i in range(d + 1):
            for j in range(d + 1):
                assert avg.entry(i, j) == pd.entry(i, j)


def test_average_of_equal_matrices(ctx):
    h = gram(StateCandidate({1: 0.5}), [(0, 0), (1, 1)], ctx)
    avg = average_R([h, h, h])
    assert np.allclose(avg.to_numpy(), h.to_numpy())
    with pytest.raises(ValueError):
        average_R([])


def test_det_P_examples():
    assert det_P(0, 7) == 1
    assert det_P(Fraction(1, 2), 4) == 0
    assert det_P(1, 2) == -1
    assert det_P(0.5, 4) == 0.0


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 4), Fraction(-1, 4),
                               Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1)])
def test_det_P_matches_exact_elimination(p):
    for d in range(1, 11):
        pd = build_H_prime(p, {}, d, 1, 1, exact=True)
        det = determinant_exact(pd)
        assert det.im == 0
        assert det.re == det_P(p, d)


def test_convex_cone_of_psd_matrices():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = rng.integers(2, 6)
        mats = []
        for _ in range(3):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            mats.append(a @ a.conj().T)
        weights = rng.random(3)
        weights /= weights.sum()
        combo = sum(w * m for w, m in zip(weights, mats))
        assert is_psd(HermitianMatrix(combo), tol=1e-9).is_psd


# -- parameter selection ----------------------------------------------------

def test_choose_parameters_examples():
    d, eps = choose_parameters(1)
    assert d == 2 and det_P(1, 2) == -1 < 0
    assert choose_parameters(0.5)[0] == 5
    assert choose_parameters(0.2)[0] == 26
    assert choose_parameters(1.5)[0] == 1
    with pytest.raises(ValueError):
        choose_parameters(0)
    # margin rule: eps = (d p^2 - 1) / (4 d)
    d, eps = choose_parameters(Fraction(1, 2))
    assert eps == (5 * Fraction(1, 4) - 1) / 20 == Fraction(1, 80)


def test_witness_vector_examples():
    v = witness_vector(Fraction(1, 2), 5)
    assert [complex(x) for x in v] == [-2.5, 1, 1, 1, 1, 1]
    v2 = witness_vector(1, 2)
    pd = build_H_prime(1, {}, 2, 1, 1, exact=True)
    assert quadratic_form(pd, v2) == -2
    with pytest.raises(ValueError):
        witness_vector(Fraction(1, 2), 4)  # d p^2 = 1
    # global phase invariance of the value
    h = build_H_prime(Fraction(1, 2), {}, 5, 1, 1)
    base = quadratic_form(h, [complex(x) for x in witness_vector(Fraction(1, 2), 5)])
    rotated = [complex(x) * np.exp(0.7j) for x in witness_vector(Fraction(1, 2), 5)]
    assert abs(quadratic_form(h, rotated) - base) < 1e-12


# -- refute / verify --------------------------------------------------------

def test_refute_trace(ctx):
    result = refute(trace_state(), ctx)
    assert isinstance(result, ConsistentWithTrace)
    assert result.orbits_checked == ()
    listed = refute(StateCandidate({1: 0, 4: 0.0}), ctx)
    assert isinstance(listed, ConsistentWithTrace)
    assert listed.orbits_checked == (1, 4)


def test_refute_certificate_halves(ctx):
    state = StateCandidate({1: 0.5})
    cert = refute(state, ctx)
    assert isinstance(cert, Certificate)
    assert cert.params.d == 5
    assert cert.value < 0 and cert.avg_value < 0
    assert cert.avg_value == pytest.approx(-1.25, abs=1e-9)
    report = verify(state, cert, ctx)
    assert report.accepted and report.failed is None


def test_refute_short_form(ctx):
    state = StateCandidate({1: 1.5})
    cert = refute(state, ctx)
    assert cert.params.d == 1
    assert cert.generators[0] == (0, 0) and len(cert.generators) == 2
    # the restriction matrix is exactly the 2x2 minor [[1, p], [p, 1]]
    h = build_H_second(state, cert.params, 1, ctx).to_numpy()
    assert np.allclose(h, np.array([[1, 1.5], [1.5, 1]]))
    assert cert.value == pytest.approx(1 - 1.5**2, abs=1e-9)
    assert verify(state, cert, ctx).accepted


def test_refute_negative_orbit_value(ctx):
    state = StateCandidate({2: -0.5})
    cert = refute(state, ctx)
    assert cert.params.xi == (2, 2) and cert.params.d == 5
    assert verify(state, cert, ctx).accepted


def test_refute_picks_smallest_nonzero_orbit(ctx):
    state = StateCandidate({3: 0.0, 5: 0.5, 7: 0.9})
    cert = refute(state, ctx)
    assert cert.params.xi == (5, 5)
    assert verify(state, cert, ctx).accepted


def test_refute_genus_restriction():
    from nctorus.lattice import standard_form

    ctx4 = PhaseContext(sigma=standard_form(2))
    with pytest.raises(ValueError):
        refute(StateCandidate({1: 0.5}), ctx4)


def test_l_star_witnesses_non_positive_matrix(ctx):
    state = StateCandidate({1: 0.5})
    cert = refute(state, ctx)
    worst = build_H_second(state, cert.params, cert.l_star, ctx)
    verdict = is_psd(worst, tol=1e-9)
    assert not verdict.is_psd


def test_certificate_json_round_trip(ctx):
    state = StateCandidate({1: 0.9})
    cert = refute(state, ctx)
    blob = cert.to_json()
    for key in ("xi", "d", "N", "epsilon", "p", "l_star", "witness", "value",
                "avg_value", "generators"):
        assert key in blob
    back = Certificate.loads(cert.dumps())
    assert back.params == cert.params
    assert back.l_star == cert.l_star
    assert back.generators == cert.generators
    report = verify(state, back, ctx)
    assert report.accepted


def test_verify_rejects_tampering(ctx):
    state = StateCandidate({1: 0.5})
    cert = refute(state, ctx)

    bad_n = cert.to_json()
    bad_n["N"] += 1
    report = verify(state, Certificate.from_json(bad_n), ctx)
    assert not report.accepted and report.failed == "divisibility"

    bad_w = cert.to_json()
    bad_w["witness"] = [[0.0, 0.0] for _ in bad_w["witness"]]
    report = verify(state, Certificate.from_json(bad_w), ctx)
    assert not report.accepted and report.failed == "negativity"

    bad_g = cert.to_json()
    bad_g["generators"][1] = [9999, 1]
    report = verify(state, Certificate.from_json(bad_g), ctx)
    assert not report.accepted and report.failed == "generators"

    bad_l = cert.to_json()
    bad_l["l_star"] = cert.params.d + 5
    report = verify(state, Certificate.from_json(bad_l), ctx)
    assert not report.accepted and report.failed == "params"

    bad_eps = cert.to_json()
    bad_eps["epsilon"] = float(cert.params.epsilon) / 1e9
    report = verify(state, Certificate.from_json(bad_eps), ctx)
    assert not report.accepted and report.failed == "approximation"

    wrong_state = StateCandidate({1: 0.25})
    report = verify(wrong_state, cert, ctx)
    assert not report.accepted and report.failed == "params"


def test_verify_algebra_agreement_clause(ctx):
    state = StateCandidate({2: 0.5})
    cert = refute(state, ctx)
    report = verify(state, cert, ctx)
    clause = {c.name: c for c in report.clauses}["algebra-agreement"]
    assert clause.ok


def test_refute_other_h():
    ctx = PhaseContext(h=Fraction(5, 7))
    state = StateCandidate({1: 0.5})
    cert = refute(state, ctx)
    assert verify(state, cert, ctx).accepted


def test_refute_tiny_p_raises_budget_error(ctx):
    with pytest.raises(DiophantineBudgetError):
        refute(StateCandidate({1: Fraction(1, 10**6)}), ctx)


def test_refute_with_nonzero_q_orbits(ctx):
    # declare values on the difference orbits so the restrictions genuinely
    # carry perturbed q entries instead of collapsing to P_d
    base = refute(StateCandidate({1: 0.5}), ctx)
    n_val = base.params.N
    d = base.params.d
    q_decl = {j * n_val: Fraction((-1) ** j, 2 + j) for j in range(1, d)}
    state = StateCandidate({1: Fraction(1, 2), **q_decl})
    cert = refute(state, ctx)
    assert cert.params.N == n_val and cert.params.d == d
    # some matrix entry is genuinely nonzero off the P_d pattern
    mats = [build_H_second(state, cert.params, l, ctx).to_numpy() for l in range(1, d + 1)]
    assert max(abs(m[1, 2]) for m in mats) > 0.1
    # the eps rule keeps the witness value within half the ideal margin
    ideal = d * (1 - d * 0.25)
    assert cert.avg_value < ideal / 2 < 0
    assert verify(state, cert, ctx).accepted


def test_gram_matches_H_entry_formulas(ctx):
    # cross-module oracle: the Gram matrix on {(0,0)} u {Theta_j xi} equals
    # the entry formulas H[0,j] = p, H[j,i] = q_((i-j)N) e^(i (i-j) h N l xi2^2)
    import cmath

    from nctorus.circle import phase_angle

    d, l, xi2 = 4, 3, 2
    eps = Fraction(1, 10)
    n_val = diophantine_N(ctx, xi2, d, eps)
    q_orbits = {j * n_val * xi2: Fraction(1, j + 2) for j in range(1, d)}
    state = StateCandidate({xi2: Fraction(1, 2), **q_orbits})
    params = CertParams(xi=(xi2, xi2), d=d, N=n_val, epsilon=eps)

    built = build_H_second(state, params, l, ctx).to_numpy()
    manual = np.eye(d + 1, dtype=complex)
    p = float(eval_generator(state, (xi2, xi2)))
    manual[0, 1:] = p
    manual[1:, 0] = p
    for j in range(1, d + 1):
        for i in range(j + 1, d + 1):
            q = float(eval_generator(state, ((i - j) * n_val * xi2, 0)))
            phi = phase_angle(ctx.h, (i - j) * n_val * l * xi2 * xi2)
            manual[j, i] = q * cmath.exp(1j * phi)
            manual[i, j] = np.conj(manual[j, i])
    assert np.max(np.abs(built - manual)) < 1e-12

    # and gram() on the same generators is the same matrix
    from nctorus.states import gram as gram_fn

    direct = gram_fn(state, family_generators(params, l), ctx).to_numpy()
    assert np.max(np.abs(built - direct)) == 0.0
