import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tripath import kd
from tripath.errors import DegeneratePairError, UnknownPathError
from tripath.hilbert import inner, normalize, same_ray
from tripath.interferometer import INNER_PATHS, OUTER_PATHS, probabilities

from conftest import brute_force_min_inner_sum, random_unit_vectors


def test_pair_catalog():
    inner_pairs = {frozenset(p) for p in (("1", "P2"), ("2", "P1"), ("f", "3"), ("S1", "D2"), ("S2", "D1"))}
    outer_pairs = {frozenset(p) for p in (("1", "f"), ("1", "S2"), ("2", "f"), ("2", "S1"), ("S1", "S2"))}
    got_inner = {frozenset((p.a, p.b)) for p in kd.KD_PAIRS if p.kind == "inner"}
    got_outer = {frozenset((p.a, p.b)) for p in kd.KD_PAIRS if p.kind == "outer"}
    assert got_inner == inner_pairs
    assert got_outer == outer_pairs
    assert [p.kind for p in kd.KD_PAIRS] == ["inner"] * 5 + ["outer"] * 5


def test_profile_against_direct_formula(system, rng):
    # independent route: raw vectors and the textbook expression
    for v in random_unit_vectors(rng, 300):
        psi = normalize(v)
        profile = kd.kd_profile(psi, system)
        for pair, got in zip(kd.KD_PAIRS, profile.values):
            va = system.ray(pair.a).vector
            vb = system.ray(pair.b).vector
            w = psi.vector
            want = float((vb @ va) * (va @ w) * (w @ vb))
            assert got == pytest.approx(want, abs=1e-14)


def test_profile_value_lookup(system, named):
    p = kd.kd_profile(named["theta_3"].ray, system)
    assert p.value("S1", "S2") == p.value("S2", "S1")
    assert len(p.inner_values) == 5 and len(p.outer_values) == 5
    assert set(p.as_dict()) == {pair.label for pair in kd.KD_PAIRS}
    with pytest.raises(UnknownPathError):
        p.value("1", "2")


def test_profile_batch_matches_loop(system, rng):
    vectors = random_unit_vectors(rng, 500)
    batch = kd.profile_values_batch(vectors, system)
    assert batch.shape == (500, 10)
    for row, v in zip(batch[:50], vectors[:50]):
        profile = kd.kd_profile(normalize(v), system)
        assert np.allclose(row, profile.values, atol=1e-14)


def test_sign_flip_invariance(system, rng):
    for v in random_unit_vectors(rng, 50):
        a = kd.kd_profile(normalize(v), system).values
        b = kd.profile_values_batch(-v[None, :], system)[0]
        assert np.allclose(a, b, atol=1e-14)


def test_decompose_outer_rebuilds_probability(system, rng):
    for v in random_unit_vectors(rng, 300):
        psi = normalize(v)
        probs = probabilities(psi, system)
        for i in OUTER_PATHS:
            terms = kd.decompose_outer(psi, i, system)
            assert len(terms) == 3
            assert sum(t for _, t in terms) == pytest.approx(probs[i], abs=1e-12)
            # trajectory pair comes last
            assert terms[-1][0].kind == "inner"


def test_decompose_outer_rejects_inner(system):
    with pytest.raises(UnknownPathError):
        kd.decompose_outer(normalize([1, 1, 1]), "3", system)


def test_magnitude_relation(system, rng):
    # rho(a,b)^2 = <a|b>^2 P(a) P(b)
    for v in random_unit_vectors(rng, 300):
        psi = normalize(v)
        probs = probabilities(psi, system)
        profile = kd.kd_profile(psi, system)
        for pair, value in zip(kd.KD_PAIRS, profile.values):
            g = inner(system.ray(pair.a), system.ray(pair.b))
            assert value**2 == pytest.approx(g**2 * probs[pair.a] * probs[pair.b], abs=1e-14)


def test_path_state_profiles_nonnegative(system):
    for name in ("1", "2", "3", "S1", "D1", "f", "P1", "P2", "S2", "D2"):
        profile = kd.kd_profile(system.ray(name), system)
        assert min(profile.values) >= -1e-14, name


def test_n2_table(system, named):
    p = kd.kd_profile(named["N_2"].ray, system)
    assert p.value("1", "S2") == pytest.approx(6 / 11, abs=1e-12)
    assert p.value("S1", "S2") == pytest.approx(2 / 11, abs=1e-12)
    assert p.value("1", "f") == pytest.approx(3 / 11, abs=1e-12)
    assert p.value("2", "S1") == pytest.approx(1 / 11, abs=1e-12)
    assert p.value("2", "f") == pytest.approx(1 / 11, abs=1e-12)
    for pair in (("2", "P1"), ("S1", "D2"), ("f", "3")):
        assert p.value(*pair) == pytest.approx(-1 / 11, abs=1e-12)
    for pair in (("1", "P2"), ("S2", "D1")):
        assert p.value(*pair) == pytest.approx(0.0, abs=1e-12)


def test_n2_cancellation(system, named):
    # P(2) = 1/11 arrives as (+1/11) + (+1/11) + (-1/11)
    psi = named["N_2"].ray
    terms = dict()
    for pair, value in kd.decompose_outer(psi, "2", system):
        terms[frozenset((pair.a, pair.b))] = value
    assert terms[frozenset(("2", "f"))] == pytest.approx(1 / 11, abs=1e-12)
    assert terms[frozenset(("2", "S1"))] == pytest.approx(1 / 11, abs=1e-12)
    assert terms[frozenset(("2", "P1"))] == pytest.approx(-1 / 11, abs=1e-12)
    assert probabilities(psi, system)["2"] == pytest.approx(1 / 11, abs=1e-12)


def test_ns1_and_nf_tables(system, named):
    p = kd.kd_profile(named["N_S1"].ray, system)
    assert p.value("1", "f") == pytest.approx(2 / 5, abs=1e-12)
    assert p.value("2", "f") == pytest.approx(1 / 5, abs=1e-12)
    assert p.value("1", "S2") == pytest.approx(2 / 5, abs=1e-12)
    p = kd.kd_profile(named["N_f"].ray, system)
    for pair in (("S1", "S2"), ("2", "S1"), ("1", "S2")):
        assert p.value(*pair) == pytest.approx(1 / 3, abs=1e-12)


def test_theta_tables(system, named):
    cases = {
        "theta_D1": ({("2", "S1"): 1 / 3, ("1", "f"): 1 / 9, ("S1", "D2"): 1 / 3, ("1", "P2"): 2 / 9},
                     ("2", "f"), -1 / 9),
        "theta_3": ({("1", "S2"): 1 / 4, ("2", "S1"): 1 / 4, ("1", "P2"): 1 / 4, ("2", "P1"): 1 / 4},
                    ("S1", "S2"), -1 / 8),
        "theta_P1": ({("1", "f"): 1 / 5, ("S1", "S2"): 1 / 10, ("f", "3"): 2 / 5, ("S1", "D2"): 3 / 10},
                     ("1", "S2"), -1 / 10),
        "theta_P2": ({("2", "f"): 1 / 5, ("S1", "S2"): 1 / 10, ("f", "3"): 2 / 5, ("S2", "D1"): 3 / 10},
                     ("2", "S1"), -1 / 10),
        "theta_D2": ({("1", "S2"): 1 / 3, ("2", "f"): 1 / 9, ("S2", "D1"): 1 / 3, ("2", "P1"): 2 / 9},
                     ("1", "f"), -1 / 9),
    }
    for name, (positives, neg_pair, neg_value) in cases.items():
        p = kd.kd_profile(named[name].ray, system)
        for pair, want in positives.items():
            assert p.value(*pair) == pytest.approx(want, abs=1e-12), (name, pair)
        assert sum(positives.values()) == pytest.approx(1.0, abs=1e-12)
        assert p.value(*neg_pair) == pytest.approx(neg_value, abs=1e-12), name


def test_inequality_sums(system, named):
    want = {"N_f": 7 / 9, "N_1": 9 / 11, "N_2": 9 / 11, "N_S1": 4 / 5, "N_S2": 4 / 5}
    for name, w in want.items():
        assert kd.inequality_sum(named[name].ray, system) == pytest.approx(w, abs=1e-12)


def test_inequality_sum_equals_inner_probabilities(system, rng):
    for v in random_unit_vectors(rng, 100):
        psi = normalize(v)
        probs = probabilities(psi, system)
        want = sum(probs[k] for k in INNER_PATHS)
        assert kd.inequality_sum(psi, system) == pytest.approx(want, abs=1e-12)


def test_jacobi_against_library(rng):
    # hand-rolled Jacobi sweep vs the library solver
    for _ in range(100):
        m = rng.normal(size=(3, 3))
        m = m + m.T
        vals, vecs = kd.jacobi_eigh(m)
        ref_vals, _ = np.linalg.eigh(m)
        assert np.allclose(vals, ref_vals, atol=1e-10)
        assert np.allclose(vecs.T @ vecs, np.eye(3), atol=1e-12)
        assert np.allclose(m @ vecs, vecs @ np.diag(vals), atol=1e-10)
    with pytest.raises(ValueError):
        kd.jacobi_eigh(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_inequality_operator(system):
    m = kd.inequality_operator(system)
    assert np.allclose(m, m.T, atol=1e-15)
    # five rank-1 projectors in 3 dimensions: trace 5
    assert np.trace(m) == pytest.approx(5.0, abs=1e-12)


def test_max_violation_value(system):
    state, violation = kd.max_violation(system)
    assert violation == pytest.approx(math.sqrt(11 / 12) - 0.5, abs=1e-9)
    probs = probabilities(state, system)
    assert probs["1"] == pytest.approx(probs["2"], abs=1e-9)
    assert probs["1"] == pytest.approx(0.4676, abs=5e-4)
    assert probs["3"] == pytest.approx(0.0648, abs=5e-4)
    assert kd.inequality_sum(state, system) == pytest.approx(1.0 - violation, abs=1e-12)


def test_max_violation_matches_brute_force(system):
    # independent grid search, one zoom stage; slow-ish but well bounded
    grid_min = brute_force_min_inner_sum(system, n=1_000_000)
    _, violation = kd.max_violation(system)
    assert grid_min == pytest.approx(1.0 - violation, abs=1e-6)


def test_negative_bound_values(system):
    assert kd.kd_negative_bound("S1", "S2", system) == pytest.approx(1 / 8, abs=1e-15)
    g = 1 / math.sqrt(2)
    assert kd.kd_negative_bound("1", "S2", system) == pytest.approx(g * (1 - g) / 2, abs=1e-15)
    g = 1 / math.sqrt(3)
    assert kd.kd_negative_bound("1", "f", system) == pytest.approx(g * (1 - g) / 2, abs=1e-15)


def test_negative_bound_degenerate(system):
    with pytest.raises(DegeneratePairError):
        kd.kd_negative_bound("1", "3", system)  # orthogonal
    with pytest.raises(DegeneratePairError):
        kd.kd_negative_bound("f", "f", system)  # parallel


def test_scan_extrema_match_closed_forms(system):
    for pair in (("1", "f"), ("1", "S2"), ("2", "f"), ("2", "S1"), ("S1", "S2")):
        scan = kd.extremal_kd_on_circle(*pair, 100_000, system)
        g = abs(inner(system.ray(pair[0]), system.ray(pair[1])))
        assert scan.min_value == pytest.approx(-g * (1 - g) / 2, abs=1e-6), pair
        assert scan.max_value == pytest.approx(g * (1 + g) / 2, abs=1e-6), pair
        # extrema sit at orthogonal rays of the circle
        assert abs(inner(scan.min_state, scan.max_state)) < 1e-3


def test_scan_minimizer_is_theta3(system, named):
    scan = kd.extremal_kd_on_circle("S1", "S2", 200_000, system)
    assert same_ray(scan.min_state, named["theta_3"].ray, tol=1e-4)


def test_scan_rejects_degenerate_pairs(system):
    with pytest.raises(DegeneratePairError):
        kd.extremal_kd_on_circle("1", "3", 1000, system)
    with pytest.raises(ValueError):
        kd.extremal_kd_on_circle("1", "f", 2, system)


def test_profile_json_and_csv(system, named):
    profile = kd.kd_profile(named["N_1"].ray, system)
    doc = kd.profile_to_json(profile, "N_1")
    assert doc["name"] == "N_1"
    assert len(doc["values"]) == 10
    json.dumps(doc)  # serializable

    text = kd.profiles_to_csv([("N_1", profile)])
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 2
    assert rows[0] == ["state"] + [p.label for p in kd.KD_PAIRS]
    assert rows[1][0] == "N_1"
    assert float(rows[1][1]) == pytest.approx(profile.values[0])


unit_vec = st.lists(
    st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False), min_size=3, max_size=3
).filter(lambda v: sum(x * x for x in v) > 1e-6)


@settings(max_examples=60, deadline=None)
@given(unit_vec)
def test_outer_probability_identity(v):
    # summed outer probabilities = 2 * (outer KD sum) + inner KD sum,
    # because each outer pair feeds two decompositions and each inner one
    psi = normalize(v)
    profile = kd.kd_profile(psi)
    probs = probabilities(psi)
    lhs = sum(probs[i] for i in OUTER_PATHS)
    rhs = 2.0 * sum(profile.outer_values) + sum(profile.inner_values)
    assert lhs == pytest.approx(rhs, abs=1e-10)
