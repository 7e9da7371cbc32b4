from fractions import Fraction

import pytest

isogeny_descent = pytest.importorskip("isogeny_descent")


def brute_count(p, a, b):
    squares = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    return 1 + sum(squares.get((x ** 3 + a * x + b) % p, 0) for x in range(p))


@pytest.mark.parametrize("p,a,b", [(5, 1, 1), (7, 3, 2), (11, 1, 0), (13, 2, 5), (31, 4, 9)])
def test_count_matches_enumeration(p, a, b):
    assert isogeny_descent.count_points(p, a, b) == brute_count(p, a, b)
    assert isogeny_descent.frobenius_trace(p, a, b) == p + 1 - brute_count(p, a, b)


def test_extension_count_matches_trace_recurrence():
    p, a, b = 7, 3, 2
    t = isogeny_descent.frobenius_trace(p, a, b)
    t2 = isogeny_descent.trace_over_extension(t, p, 2)
    assert t2 == t * t - 2 * p
    assert isogeny_descent.count_points(p, a, b, k=2) == p * p + 1 - t2


def test_supersingular_curve_info():
    info = isogeny_descent.curve_info(11, 1, 0)
    assert info["count"] == 12
    assert info["supersingular"]
    a, ab = info["structure"]
    assert a * ab == 12 and ab % a == 0


def test_torsion_basis_field_degree():
    basis = isogeny_descent.torsion_basis(11, 1, 0, 3)
    assert basis["n"] == 3
    assert basis["field_degree"] == isogeny_descent.torsion_field_degree(11, 1, 0, 3)
    m = isogeny_descent.frobenius_matrix(11, 1, 0, 3, 2)
    assert m == [[(-11) % 3, 0], [0, (-11) % 3]]


def test_quaternion_example_closed_form():
    p, n = 11, 3
    r = isogeny_descent.quat_example(p, n)
    assert r["matches_closed_form"] and r["square_is_minus_p"] and r["subfields_distinct"]
    phi_j = r["phi_j"]
    assert Fraction(phi_j["j"]) == Fraction(1 - n * n, 1 + n * n)
    assert Fraction(phi_j["ij"]) == Fraction(-2 * n, 1 + n * n)
    assert Fraction(phi_j["1"]) == 0 and Fraction(phi_j["i"]) == 0


def test_conjugation_and_equivalences():
    p = 19
    assert isogeny_descent.conjugate(p, (1, 2, 0, 0), (0, 0, 1, 0)) == ("0", "0", "-3/5", "-4/5")
    assert isogeny_descent.quat_mul(p, (0, 1, 0, 0), (0, 1, 0, 0)) == ("-1", "0", "0", "0")
    assert isogeny_descent.equivalence_report(p, (1, 2, 0, 0))["all_equal"]
    rep = isogeny_descent.equivalence_report(p, (1, 0, 5, 0))
    assert rep["a"] and rep["all_equal"]


def test_isotypic_partition_and_tate():
    assert isogeny_descent.tate_isogenous(11, (1, 0), (1, 0))
    parts = isogeny_descent.isotypic_partition(13, [(1, 1), (1, 1), (2, 5)], 1)
    assert [0, 1] in parts


def test_check_phi_instance():
    inst = {
        "p": 11, "m": 2, "n": 6, "field_degree": 1,
        "A": {"a": 1, "b": 0}, "B": {"a": 1, "b": 0},
        "f": {"recipe": {"g": "i", "a": 1, "b": 6}},
        "A_tilde": [{"x": 9, "y": 1}], "B_tilde": [{"x": 9, "y": 1}],
    }
    assert isogeny_descent.check_phi(inst)["overall"]


def test_velu_two_isogeny():
    out = isogeny_descent.velu({"p": 13, "a": 1, "b": 0, "kernel_x": 0, "kernel_y": 0})
    assert out["degree"] == 2
    assert 1 in out["defined_over"]


def test_small_experiment_has_no_fatal_records():
    cfg = {"p_min": 5, "p_max": 11, "levels": [5], "extension_degrees": [2]}
    out = isogeny_descent.run_experiment("mink", cfg)
    assert out["exit_code"] == 0
    assert out["records"] and all(r["status"] != "fatal" for r in out["records"])
