"""The seven benchmark problems: values, bounds, thresholds, rotations."""

import math

import numpy as np
import pytest

from savlpso import ConfigError, available_functions, evaluate, get_problem, make_rotation
from savlpso.benchmarks import ROTATION_SEEDS

# Per-dimension leftover of the shifted schwefel sum at the optimum
# 420.9687·1: the catalog tabulates the optimum to four decimals, so the
# minimum value is this close to, but not exactly, zero.
SCHWEFEL_RESIDUAL_PER_DIM = 1.272783748618167e-05


def test_catalog_lists_seven_functions_and_their_long_names():
    names = available_functions()
    assert names[:7] == ("f1", "f2", "f3", "f4", "f5", "f6", "f7")
    assert set(names[7:]) == {
        "sphere",
        "rosenbrock",
        "rastrigin",
        "griewank",
        "schwefel",
        "rotated-griewank",
        "rotated-rastrigin",
    }


@pytest.mark.parametrize(
    "fid,limit,acceptance",
    [
        ("f1", 100.0, 0.01),
        ("f2", 100.0, 500.0),
        ("f3", 5.12, 50.0),
        ("f4", 600.0, 0.5),
        ("f5", 500.0, 7000.0),
        ("f6", 600.0, 5.0),
        ("f7", 5.12, 150.0),
    ],
)
def test_bounds_and_acceptance_thresholds(fid, limit, acceptance):
    p = get_problem(fid, 10)
    assert p.acceptance == acceptance
    assert np.array_equal(p.bounds.lower, np.full(10, -limit))
    assert np.array_equal(p.bounds.upper, np.full(10, limit))
    assert p.global_min_value == 0.0


def test_long_names_resolve():
    assert get_problem("sphere", 3).fid == 1
    assert get_problem("rotated-rastrigin", 3).fid == 7


def test_unknown_function_and_bad_dimension():
    with pytest.raises(ConfigError):
        get_problem("f9", 10)
    with pytest.raises(ConfigError):
        get_problem("f1", 0)


def test_sphere_values():
    p = get_problem("f1", 3)
    assert evaluate(p, np.zeros(3)) == 0.0
    assert evaluate(p, np.array([1.0, 2.0, 3.0])) == 14.0


def test_rosenbrock_values():
    p = get_problem("f2", 4)
    assert evaluate(p, np.ones(4)) == 0.0
    # at the origin each of the D-1 terms is 100·0 + 1
    assert evaluate(p, np.zeros(4)) == 3.0
    p2 = get_problem("f2", 2)
    assert evaluate(p2, np.array([-1.0, 1.0])) == 4.0


def test_rastrigin_values():
    p = get_problem("f3", 5)
    assert evaluate(p, np.zeros(5)) == 0.0
    assert evaluate(p, np.array([1.0, 0.0, 0.0, 0.0, 0.0])) == pytest.approx(1.0, abs=1e-10)
    # cos(2π·0.5) = -1 makes each half-integer coordinate worth 0.25 + 20
    assert evaluate(p, np.full(5, 0.5)) == pytest.approx(5 * 20.25, rel=1e-14)


def test_griewank_values():
    p = get_problem("f4", 3)
    assert evaluate(p, np.zeros(3)) == 0.0
    x = np.array([2.0, -3.0, 4.0])
    want = (
        1.0
        + (4.0 + 9.0 + 16.0) / 4000.0
        - math.cos(2.0) * math.cos(-3.0 / math.sqrt(2.0)) * math.cos(4.0 / math.sqrt(3.0))
    )
    assert evaluate(p, x) == pytest.approx(want, rel=1e-15)


def test_schwefel_values():
    p = get_problem("f5", 6)
    x = np.full(6, 420.9687)
    assert evaluate(p, x) == pytest.approx(6 * SCHWEFEL_RESIDUAL_PER_DIM, rel=1e-6)
    # the shifted form is bounded below by ~0 and positive elsewhere
    assert evaluate(p, np.zeros(6)) == pytest.approx(418.9829 * 6, rel=1e-12)


def test_rotated_variants_compose_rotation_then_base():
    rng = np.random.default_rng(99)
    for fid, base_fid in (("f6", "f4"), ("f7", "f3")):
        rotated = get_problem(fid, 8)
        base = get_problem(base_fid, 8)
        assert rotated.rotation_seed == ROTATION_SEEDS[fid]
        for _ in range(20):
            x = rng.uniform(-1, 1, 8) * rotated.bounds.upper
            z = rotated.rotation @ x
            assert evaluate(rotated, x) == pytest.approx(evaluate(base, z), rel=1e-12)


def test_rotation_matrix_is_orthogonal_and_deterministic():
    r1 = make_rotation(12, 601)
    r2 = make_rotation(12, 601)
    r3 = make_rotation(12, 602)
    assert np.array_equal(r1, r2)
    assert not np.array_equal(r1, r3)
    assert np.allclose(r1 @ r1.T, np.eye(12), atol=1e-12)
    assert abs(abs(np.linalg.det(r1)) - 1.0) < 1e-12


def test_rotation_preserves_norms():
    r = make_rotation(20, 701)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.normal(size=20)
        assert np.linalg.norm(r @ x) == pytest.approx(np.linalg.norm(x), rel=1e-12)


def test_unrotated_problems_carry_no_rotation():
    for fid in ("f1", "f2", "f3", "f4", "f5"):
        p = get_problem(fid, 4)
        assert p.rotation is None and p.rotation_seed is None


def test_evaluate_rejects_wrong_shape():
    p = get_problem("f1", 3)
    with pytest.raises(ConfigError):
        evaluate(p, np.zeros(4))
    with pytest.raises(ConfigError):
        evaluate(p, np.zeros((3, 1)))


def test_values_always_finite_inside_bounds():
    rng = np.random.default_rng(2718)
    for fid in available_functions():
        p = get_problem(fid, 7)
        for _ in range(50):
            x = rng.uniform(p.bounds.lower, p.bounds.upper)
            v = evaluate(p, x)
            assert math.isfinite(v)
            assert v >= 0.0
