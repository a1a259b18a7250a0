import itertools

import numpy as np
import pytest

from leonard_lab import _kernels
from leonard_lab._kernels import numba_enabled, screen_split_candidates
from leonard_lab.errors import InvalidParameterArray, NotTridiagonalizable
from leonard_lab.leonard import (
    SPLIT,
    LeonardPairMatrices,
    ParameterArray,
    dual_eigenbasis_form,
    primal_eigenbasis_form,
)
from leonard_lab.linalg import ExactMatrix
from leonard_lab.scalar import FieldSpec

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


def exact_screen(theta, theta_star, phi, p):
    """Reference: build the split pair exactly and test both eigenbasis shapes."""
    F = FieldSpec.prime(p)
    th = [F(x) for x in theta]
    ts = [F(x) for x in theta_star]
    n = len(theta)
    A = [[theta[i] if i == j else 1 if i == j + 1 else 0 for j in range(n)] for i in range(n)]
    A_star = [[theta_star[i] if i == j else phi[i] if j == i + 1 else 0 for j in range(n)] for i in range(n)]
    m = LeonardPairMatrices(SPLIT, ExactMatrix(F, A), ExactMatrix(F, A_star))
    try:
        dual_eigenbasis_form(m, ts)
        primal_eigenbasis_form(m, th)
    except NotTridiagonalizable:
        return False
    return True


def distinct(rng, p, n):
    return [int(x) for x in rng.choice(p, size=n, replace=False)]


@pytest.mark.parametrize("p,d", [(7, 2), (11, 3), (13, 3), (17, 4)])
def test_backends_agree_random(p, d):
    rng = np.random.default_rng(p * 10 + d)
    for _ in range(5):
        theta, theta_star = distinct(rng, p, d + 1), distinct(rng, p, d + 1)
        phis = rng.integers(1, p, size=(200, d))
        masks = [screen_split_candidates(theta, theta_star, phis, p, backend=b) for b in BACKENDS]
        for mask in masks[1:]:
            assert np.array_equal(mask, masks[0])


@pytest.mark.parametrize("backend", BACKENDS)
def test_matches_exact_check(backend):
    p, d = 7, 2
    theta, theta_star = [0, 1, 3], [2, 5, 6]
    phis = np.array(list(itertools.product(range(1, p), repeat=d)))
    mask = screen_split_candidates(theta, theta_star, phis, p, backend=backend)
    expected = [exact_screen(theta, theta_star, phi, p) for phi in phis.tolist()]
    assert mask.tolist() == expected
    assert any(expected)


def test_matches_exact_check_gf13_d3():
    p = 13
    theta = theta_star = [0, 1, 3, 2]
    rng = np.random.default_rng(3)
    phis = rng.integers(1, p, size=(150, 3))
    mask = screen_split_candidates(theta, theta_star, phis, p, backend="numpy")
    assert mask.tolist() == [exact_screen(theta, theta_star, phi, p) for phi in phis.tolist()]


def test_empty_batch():
    for b in BACKENDS:
        assert screen_split_candidates([0, 1], [0, 1], np.zeros((0, 1)), 5, backend=b).shape == (0,)


def test_env_flag(monkeypatch):
    monkeypatch.setenv("LEONARD_LAB_DISABLE_NUMBA", "1")
    assert not numba_enabled()
    monkeypatch.setenv("LEONARD_LAB_DISABLE_NUMBA", "0")
    assert numba_enabled() == _kernels.HAVE_NUMBA


def test_env_flag_routes_default(monkeypatch):
    calls = []
    real = _kernels._screen_numpy

    def spy(*args):
        calls.append(1)
        return real(*args)

    monkeypatch.setenv("LEONARD_LAB_DISABLE_NUMBA", "1")
    monkeypatch.setattr(_kernels, "_screen_numpy", spy)
    screen_split_candidates([0, 1], [0, 1], [[1], [2]], 5)
    assert calls


def test_unknown_backend():
    with pytest.raises(ValueError, match="unknown backend"):
        screen_split_candidates([0, 1], [0, 1], [[1]], 5, backend="cuda")


def test_modulus_bound():
    with pytest.raises(ValueError):
        screen_split_candidates([0, 1], [0, 1], [[1]], _kernels.MAX_MODULUS + 1)


def test_zero_split_never_passes():
    p = 11
    phis = np.array([[0, 3, 4], [3, 0, 4], [3, 4, 0]])
    for b in BACKENDS:
        assert not screen_split_candidates([0, 1, 2, 4], [3, 5, 7, 9], phis, p, backend=b).any()


def test_invalid_array_sanity():
    F = FieldSpec.prime(5)
    with pytest.raises(InvalidParameterArray):
        ParameterArray((F(0), F(1)), (F(0), F(1)), (F(0),), (F(1),)).validate()
