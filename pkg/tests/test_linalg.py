import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistalg.linalg import ModSolver, kernel_mod, modinv, smith_normal_form, xgcd


def test_xgcd_basic():
    g, x, y = xgcd(12, 18)
    assert g == 6 and 12 * x + 18 * y == 6
    assert xgcd(0, 0)[0] == 0
    g, x, y = xgcd(-4, 6)
    assert g == 2 and -4 * x + 6 * y == 2


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_xgcd_identity(a, b):
    g, x, y = xgcd(a, b)
    assert g == abs(__import__("math").gcd(a, b))
    assert x * a + y * b == g


def _check_snf(A):
    A = np.asarray(A)
    sf = smith_normal_form(A)
    U = np.asarray(sf.U, dtype=object)
    V = np.asarray(sf.V, dtype=object)
    Ui = np.asarray(sf.Ui, dtype=object)
    Vi = np.asarray(sf.Vi, dtype=object)
    D = U @ np.asarray(A, dtype=object) @ V
    # diagonal with the divisibility chain
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            expected = sf.d[i] if i == j and i < len(sf.d) else 0
            assert D[i, j] == expected
    nz = [d for d in sf.d if d]
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert np.array_equal(U @ Ui, np.eye(A.shape[0], dtype=object))
    assert np.array_equal(V @ Vi, np.eye(A.shape[1], dtype=object))


def test_snf_examples():
    _check_snf([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    _check_snf([[1]])
    _check_snf(np.zeros((3, 2), dtype=int))
    _check_snf([[2, 0], [0, 3]])  # chain fix-up: becomes diag(1, 6)
    sf = smith_normal_form([[2, 0], [0, 3]])
    assert sf.d == (1, 6)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.data(),
)
def test_snf_random(m, n, data):
    A = np.array(
        [[data.draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)]
    )
    _check_snf(A)


def test_mod_solver_z2_example():
    # f(s) + f(t) - f(st) = u(s, t) on Z_2 with u(1,1) = 1: no solution mod 2,
    # the classic order-4 witness mod 4.
    A = np.array([[2]])  # the single equation 2 f(1) = u(1,1)
    s = ModSolver(A)
    assert s.solve([1], 2) is None
    x = s.solve([2], 4)
    assert x is not None and (2 * x[0]) % 4 == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.data())
def test_mod_solver_roundtrip(m, data):
    rows, cols = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    A = np.array(
        [[data.draw(st.integers(-4, 4)) for _ in range(cols)] for _ in range(rows)]
    )
    x0 = np.array([data.draw(st.integers(0, m - 1)) for _ in range(cols)])
    b = (A @ x0) % m
    x = ModSolver(A).solve(b, m)
    assert x is not None
    assert np.array_equal((A @ x) % m, b)


def test_kernel_mod_covers_all_solutions():
    A = np.array([[2, 3]])
    m = 6
    G_L, mvec, _ = kernel_mod(A, m)
    gens = [np.asarray(G_L[:, j], dtype=int) for j in range(G_L.shape[1])]
    span = set()
    for c0 in range(m):
        for c1 in range(m):
            v = (c0 * gens[0] + c1 * gens[1]) % m
            span.add(tuple(int(t) for t in v))
    brute = {
        (x, y) for x in range(m) for y in range(m) if (2 * x + 3 * y) % m == 0
    }
    assert span == brute


def test_modinv():
    assert (7 * modinv(7, 30)) % 30 == 1
    with pytest.raises(ValueError):
        modinv(6, 30)
