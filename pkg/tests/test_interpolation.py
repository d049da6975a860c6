from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from opbound.errors import (
    BadStripPoint,
    BothZero,
    DimensionMismatch,
    InvalidInput,
    KernelSingular,
    ModeMismatch,
    NonpositiveBound,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
    UnknownCase,
)
from opbound.generators import generate, ginibre, indefinite, posdef, sectorial_normal
from opbound.interpolation import (
    CASES,
    StripInstance,
    block_embed,
    conjugated_operator,
    conjugated_operator_polar,
    exponent_assembler,
    optimize_k,
    three_lines_bound,
    three_lines_kernel_bound,
    verify_bounded_similarity,
    verify_sandwich,
    verify_strip_bound,
)
from opbound.linalg import adjoint, inverse
from opbound.schatten import schatten_norm
from opbound.spectral import power_selfadjoint

PI = math.pi
STRIP = [complex(x, y) for x in np.linspace(0, 1, 5) for y in np.linspace(-2, 2, 5)]


def test_three_lines_examples():
    assert three_lines_bound(1, 1, 0.3 + 7j) == 1
    assert three_lines_bound(1, math.e, 0.5) == pytest.approx(math.exp(0.5), rel=1e-15)
    assert three_lines_bound(4, 9, 0.5) == pytest.approx(6, rel=1e-15)
    with pytest.raises(NonpositiveBound):
        three_lines_bound(0, 1, 0.5)
    with pytest.raises(BadStripPoint):
        three_lines_bound(1, 2, 1.2)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_three_lines_log_convex(C0, C1, a, b, t):
    x = t * a + (1 - t) * b
    lhs = math.log(three_lines_bound(C0, C1, x))
    rhs = t * math.log(three_lines_bound(C0, C1, a)) + (1 - t) * math.log(three_lines_bound(C0, C1, b))
    assert lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


@pytest.mark.parametrize("z", [0.5, 0.1 + 2j, 0.9 - 1j, 0.03])
def test_kernel_constant_boundaries(z):
    assert three_lines_kernel_bound(2.5, 2.5, z) == pytest.approx(2.5, rel=1e-6)


@pytest.mark.parametrize("z", [0.5, 0.25 + 1j, 0.8 - 3j])
def test_kernel_recovers_exponential(z):
    c = 5.0
    # |c**z| is c**0 on the left line and c on the right one
    b0 = lambda y: np.ones_like(y)
    b1 = lambda y: np.full_like(y, c)
    assert three_lines_kernel_bound(b0, b1, z) == pytest.approx(c ** complex(z).real, rel=1e-6)


def test_kernel_matches_three_lines():
    assert three_lines_kernel_bound(1, math.e, 0.5) == pytest.approx(math.exp(0.5), rel=1e-6)


@given(st.floats(0.05, 0.95), st.floats(-3, 3))
def test_kernel_bounded_by_suprema(x, v):
    b0 = lambda y: 1.0 + 0.5 * np.cos(y)
    b1 = lambda y: 3.0 + np.sin(2 * y)
    val = three_lines_kernel_bound(b0, b1, complex(x, v))
    assert val <= three_lines_bound(1.5, 4.0, x) * (1 + 1e-6)


def test_kernel_scalar_callable_and_errors():
    assert three_lines_kernel_bound(lambda y: 2.0, 2.0, 0.4) == pytest.approx(2.0, rel=1e-6)
    for x in (0.0, 1.0):
        with pytest.raises(KernelSingular):
            three_lines_kernel_bound(1, 1, x)
    with pytest.raises(NonpositiveBound):
        three_lines_kernel_bound(lambda y: np.cos(y), 1.0, 0.5)


def test_optimize_k_examples():
    k, m = optimize_k(0.25, 4 * PI**2)
    assert k == pytest.approx(4 * PI, rel=1e-15) and m == pytest.approx(2 * PI, rel=1e-15)
    assert optimize_k(0.25, PI**2)[1] == pytest.approx(PI, rel=1e-15)
    assert optimize_k(1, 1) == (1.0, 2.0)
    assert optimize_k(0, 3) == (math.inf, 0.0)
    assert optimize_k(3, 0) == (0.0, 0.0)
    with pytest.raises(BothZero):
        optimize_k(0, 0)
    with pytest.raises(InvalidInput):
        optimize_k(-1, 1)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_optimize_k_is_minimum(a, b):
    k, m = optimize_k(a, b)
    assert a * k + b / k == pytest.approx(m, rel=1e-12)
    for f in (0.9, 1.1):
        assert a * k * f + b / (k * f) >= m


def test_exponent_assembler_examples():
    for x in np.linspace(0, 1, 7):
        assert exponent_assembler("real-both-positive", x) == 1.0
    assert exponent_assembler("sectorial-real", 0.5, theta_total=PI) == pytest.approx(math.exp(PI / 2), rel=1e-15)
    assert exponent_assembler("strip-both-indefinite", 0.5, k=2 * PI) == pytest.approx(math.exp(PI), rel=1e-15)
    assert exponent_assembler("similarity-indefinite") == pytest.approx(math.exp(2 * PI))
    with pytest.raises(UnknownCase):
        exponent_assembler("no-such-case", 0.5)
    with pytest.raises(InvalidInput):
        exponent_assembler("strip-one-positive", 0.5)


def test_exponent_table_hand_expanded():
    assert len(CASES) == 10
    x, y, k, th = 0.3, -1.2, 1.7, 2.1
    z = complex(x, y)
    q = k * y * y + k * x * (1 - x)
    r = math.sqrt(x * (1 - x))
    expected = {
        "strip-both-indefinite": q + PI**2 / k,
        "strip-one-positive": q + PI**2 / (4 * k),
        "strip-both-positive": 0.0,
        "real-both-indefinite": 2 * PI * r,
        "real-one-positive": PI * r,
        "real-both-positive": 0.0,
        "sectorial-strip": q + th**2 / (4 * k),
        "sectorial-real": th * r,
        "similarity-indefinite": 2 * PI,
        "similarity-positive": 0.0,
    }
    for cid, e in expected.items():
        assert exponent_assembler(cid, z, k, th) == pytest.approx(math.exp(e), rel=1e-14)


def test_conjugated_operator_examples(rng):
    S = ginibre(3, rng, 2)
    T1, T2 = posdef(2, rng), indefinite(3, rng)
    for z in (0.3 + 1j, 0.0, 1.0):
        assert_allclose(conjugated_operator(S, np.eye(2), np.eye(3), z), S, atol=1e-14)
    assert_allclose(conjugated_operator(S, T1, T2, 0), S @ inverse(T1), atol=1e-12)
    assert_allclose(conjugated_operator(S, T1, T2, 1), inverse(T2) @ S, atol=1e-12)
    D = np.diag([1.0, 4.0])
    out = conjugated_operator(np.array([[0, 1], [1, 0]]), D, D, 0.5)
    assert_allclose(out, [[0, 0.5], [0.5, 0]], atol=1e-15)


@pytest.mark.parametrize("classes", [("posdef", "posdef"), ("indefinite", "posdef"), ("posdef", "indefinite"), ("indefinite", "indefinite")])
def test_polar_route_agrees(classes):
    r = np.random.default_rng(5)
    T1, T2 = generate(classes[0], 4, r), generate(classes[1], 3, r)
    S = ginibre(3, r, 4)
    for z in STRIP:
        a = conjugated_operator(S, T1, T2, z)
        b = conjugated_operator_polar(S, T1, T2, z)
        assert np.linalg.norm(a - b, 2) <= 1e-8 * np.linalg.norm(a, 2)


def test_polar_route_agrees_sectorial(rng):
    T1, T2, S = sectorial_normal(3, rng), sectorial_normal(4, rng), ginibre(4, rng, 3)
    for z in STRIP:
        a = conjugated_operator(S, T1, T2, z, mode="sectorial")
        b = conjugated_operator_polar(S, T1, T2, z, mode="sectorial")
        assert np.linalg.norm(a - b, 2) <= 1e-8 * np.linalg.norm(a, 2)


def test_adjoint_rearrangement_fails_for_indefinite_branch():
    # why the polar route multiplies in place for indefinite T2
    T = np.diag([-2.0, 3.0])
    P = power_selfadjoint(T, -0.4)
    assert np.abs(adjoint(P) - P).max() > 0.1
    Q = power_selfadjoint(np.diag([2.0, 3.0]), -0.4)
    assert_allclose(adjoint(Q), Q, atol=1e-15)


def test_conjugated_mode_errors(rng):
    with pytest.raises(ModeMismatch):
        conjugated_operator(np.eye(2), ginibre(2, rng), np.eye(2), 0.5)
    with pytest.raises(ModeMismatch):
        conjugated_operator(np.eye(2), np.eye(2), np.eye(2), 0.5, mode="weird")
    with pytest.raises(DimensionMismatch):
        conjugated_operator(np.eye(2), np.eye(3), np.eye(2), 0.5)


def test_similarity_examples(rng):
    S = ginibre(3, rng)
    rep = verify_bounded_similarity(S, np.eye(3))
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-13) and rep.constant_factor == 1
    D, Sd = np.diag([1.0, 2.0, 5.0]), np.diag([1 + 1j, -3.0, 0.5])
    rep = verify_bounded_similarity(Sd, D)
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-13) and rep.ok
    rep = verify_bounded_similarity(ginibre(2, rng), np.diag([1.0, -1.0]))
    assert rep.ok and rep.constant_factor == pytest.approx(math.exp(2 * PI))
    with pytest.raises(NotHermitian):
        verify_bounded_similarity(S, ginibre(3, rng))
    with pytest.raises(Singular):
        verify_bounded_similarity(S, np.diag([1.0, 0.0, 1.0]))


@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.sampled_from(["posdef", "indefinite", "hermitian"]))
def test_similarity_property(n, seed, cls):
    r = np.random.default_rng(seed)
    rep = verify_bounded_similarity(ginibre(n, r), generate(cls, n, r))
    assert rep.ok


def test_sandwich_examples(rng):
    S = ginibre(3, rng)
    rep = verify_sandwich(S, np.eye(3))
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-13)
    H = np.array([[1.0, 2.0 - 1j], [2.0 + 1j, -3.0]])
    rep = verify_sandwich(H, np.diag([1.0, 4.0]), p=1)
    assert rep.ok and rep.aux["adjoint"][0] <= 1e-12
    with pytest.raises(NotPositiveDefinite):
        verify_sandwich(S, np.diag([1.0, -1.0, 2.0]))


def test_sandwich_rank_one_sweep():
    E = np.array([[0.0, 1.0], [0.0, 0.0]])
    slack = []
    for t in np.logspace(0, 8, 17):
        rep = verify_sandwich(E, np.diag([1.0, t]))
        assert rep.ok
        slack.append(rep.slack)
    # LHS = t^-1/2 and RHS = t^-1/2 as well; the bound is attained along the sweep
    assert max(abs(s) for s in slack) < 1e-12


def test_strip_identity_case(rng):
    S = ginibre(3, rng)
    for z in STRIP:
        rep = verify_strip_bound(S, np.eye(3), np.eye(3), z)
        assert rep.lhs == pytest.approx(np.linalg.norm(S, 2), rel=1e-13)
        assert rep.rhs == pytest.approx(rep.lhs, rel=1e-13)
        assert rep.constant_factor == 1 and rep.ok


def test_strip_trace_norm_instance(rng):
    T = np.diag([1.0, 4.0])
    S = ginibre(2, rng)
    rep = verify_strip_bound(S, T, T, 0.5, p=1)
    R = np.diag([1.0, 0.5])
    assert rep.lhs == pytest.approx(schatten_norm(R @ S @ R, 1), rel=1e-13)
    expected = math.sqrt(schatten_norm(S @ inverse(T), 1) * schatten_norm(adjoint(S) @ inverse(T), 1))
    assert rep.rhs == pytest.approx(expected, rel=1e-13)
    assert rep.ok and rep.case == "real-both-positive"


def test_strip_sectorial_example(rng):
    w = cmath.exp(1j * PI / 6)
    T = np.diag([w, 2 * w])
    S = ginibre(2, rng)
    rep = verify_strip_bound(S, T, T, 0.5 + 1j, k=1, mode="sectorial")
    inst = StripInstance(S, T, T, mode="sectorial")
    assert inst.bip[0].theta == pytest.approx(PI / 6, abs=1e-6)
    N = inst.bip[0].N
    q = 1.0 + 0.25 + (PI / 3) ** 2 / 4
    assert rep.constant_factor == pytest.approx(N * N * math.exp(q), rel=1e-6)
    assert rep.ok and rep.aux["polar"][0] < 1e-8


def test_endpoint_exactness(rng):
    T1, T2 = posdef(4, rng), posdef(3, rng)
    S = ginibre(3, rng, 4)
    for y in np.linspace(-3, 3, 7):
        for p in (1, 2, 3, math.inf):
            rep = verify_strip_bound(S, T1, T2, complex(0, y), p=p, cross_check=False)
            assert rep.lhs == pytest.approx(schatten_norm(S @ inverse(T1), p), rel=1e-10)


@pytest.mark.parametrize("classes", [("indefinite", "indefinite"), ("posdef", "indefinite"), ("sectorial-normal", "sectorial-normal")])
def test_k_independence_on_real_axis(classes):
    r = np.random.default_rng(11)
    T1, T2 = generate(classes[0], 3, r), generate(classes[1], 3, r)
    mode = "sectorial" if classes[0].startswith("sectorial") else "selfadjoint"
    inst = StripInstance(ginibre(3, r), T1, T2, mode=mode)
    ks = np.logspace(-3, 4, 20001)
    for x in (0.1, 0.5, 0.8):
        closed = inst.constant(complex(x, 0), None)[0]
        grid = min(inst.constant(complex(x, 0), k)[0] for k in ks)
        assert grid == pytest.approx(closed, rel=1e-6)
        assert grid >= closed * (1 - 1e-12)


def test_log_convexity_probe(rng):
    T1, T2 = posdef(4, rng), posdef(4, rng)
    S = ginibre(4, rng)
    xs = np.linspace(0, 1, 33)
    for p in (1, 2, math.inf):
        vals = [schatten_norm(conjugated_operator(S, T1, T2, x), p) for x in xs]
        for x, v in zip(xs, vals):
            assert v <= vals[0] ** (1 - x) * vals[-1] ** x * (1 + 1e-9)


def test_case_selection_is_checked(rng):
    T_pd, T_ind = posdef(3, rng), indefinite(3, rng)
    S = ginibre(3, rng)
    assert StripInstance(S, T_pd, T_pd).case == "both-positive"
    assert StripInstance(S, T_pd, T_ind).case == "one-positive"
    assert StripInstance(S, T_ind, T_ind).case == "both-indefinite"
    assert StripInstance(S, T_pd, T_pd, case="both-indefinite").case == "both-indefinite"
    with pytest.raises(NotPositiveDefinite):
        StripInstance(S, T_pd, T_ind, case="both-positive")
    with pytest.raises(NotPositiveDefinite):
        StripInstance(S, T_ind, T_ind, case="one-positive")
    with pytest.raises(ModeMismatch):
        StripInstance(S, T_pd, T_pd, mode="sectorial", case="both-positive")
    with pytest.raises(ModeMismatch):
        StripInstance(S, sectorial_normal(3, rng), T_pd)
    with pytest.raises(InvalidInput):
        verify_strip_bound(S, T_pd, T_pd, 0.5, k=-1.0)


def test_rel_tol_scales_with_conditioning(rng):
    S = ginibre(2, rng)
    rep = verify_strip_bound(S, np.diag([1.0, 1e6]), np.eye(2), 0.5)
    assert rep.rel_tol == pytest.approx(1e-9 * 1e3)


@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
    st.sampled_from(["posdef", "indefinite", "hermitian"]),
    st.sampled_from(["posdef", "indefinite", "hermitian"]),
    st.sampled_from([None, 0.3, 3.0]),
)
def test_strip_property(n1, n2, seed, c1, c2, k):
    r = np.random.default_rng(seed)
    T1, T2 = generate(c1, n1, r), generate(c2, n2, r)
    inst = StripInstance(ginibre(n2, r, n1), T1, T2)
    assert all(rep.ok for rep in inst.evaluate(STRIP, [1, 2, 3, math.inf], k))


def test_block_embed_examples(rng):
    bS, bT = block_embed(np.zeros((2, 3)), posdef(3, rng), posdef(2, rng))
    assert bS.shape == (5, 5) and not bS.any()
    bS, bT = block_embed(np.array([[2.0]]), np.array([[1.0]]), np.array([[4.0]]))
    assert np.linalg.norm(bS @ inverse(bT), 2) == pytest.approx(2)
    with pytest.raises(DimensionMismatch):
        block_embed(np.zeros((3, 3)), np.eye(3), np.eye(2))


@pytest.mark.parametrize("classes", [("posdef", "posdef"), ("indefinite", "indefinite"), ("posdef", "indefinite")])
def test_block_embedding_agreement(classes):
    r = np.random.default_rng(2)
    T1, T2 = generate(classes[0], 3, r), generate(classes[1], 4, r)
    S = ginibre(4, r, 3)
    bS, bT = block_embed(S, T1, T2)
    for p in (1, 2, 3, math.inf):
        assert schatten_norm(bS @ inverse(bT), p) == pytest.approx(schatten_norm(S @ inverse(T1), p), rel=1e-12)
        assert schatten_norm(adjoint(bS) @ inverse(bT), p) == pytest.approx(
            schatten_norm(adjoint(S) @ inverse(T2), p), rel=1e-12
        )
    # the one-space menu is that of the embedded T, so compare on the weaker of the two
    case = "both-indefinite" if classes != ("posdef", "posdef") else "both-positive"
    two = StripInstance(S, T1, T2, case=case).evaluate(STRIP, [1, 2, math.inf])
    one = StripInstance(bS, bT, bT, case=case).evaluate(STRIP, [1, 2, math.inf])
    for a, b in zip(two, one):
        assert b.lhs == pytest.approx(a.lhs, rel=1e-10, abs=1e-300)
        assert b.rhs == pytest.approx(a.rhs, rel=1e-10)
