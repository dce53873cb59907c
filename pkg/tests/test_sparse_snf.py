import random
from fractions import Fraction

from kj.rings import QQ, ZZ
from kj.snf import smith_normal_form
from kj.sparse import SparseMatrix, kernel_basis, rank, solve_in_image


def _mat(ring, rows):
    m = SparseMatrix(len(rows), len(rows[0]) if rows else 0, ring)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            m.set(i, j, ring.from_int(v))
    return m


def _dense(m):
    return [[int(m.get(i, j)) for j in range(m.cols)] for i in range(m.rows)]


def _det(rows):
    # fraction-free enough for the small unimodular checks here
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def test_snf_worked_example():
    d, u, v = smith_normal_form(_mat(ZZ, [[2, 4], [6, 8]]))
    assert [int(d.get(i, i)) for i in range(2)] == [2, 4]


def test_snf_identity_and_zero():
    d, _, _ = smith_normal_form(SparseMatrix.identity(3, ZZ))
    assert [int(d.get(i, i)) for i in range(3)] == [1, 1, 1]
    z = SparseMatrix.zero(2, 3, ZZ)
    d, u, v = smith_normal_form(z)
    assert d.is_zero()
    assert abs(_det(_dense(u))) == 1 and abs(_det(_dense(v))) == 1


def test_snf_randomized_properties():
    rng = random.Random(5)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = _mat(
            ZZ,
            [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)],
        )
        d, u, v = smith_normal_form(m)
        assert u * m * v == d
        diag = [int(d.get(i, i)) for i in range(min(rows, cols))]
        for i, j in d.data:
            assert i == j
        nz = [x for x in diag if x]
        assert all(x > 0 for x in nz)
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0
        assert abs(_det(_dense(u))) == 1
        assert abs(_det(_dense(v))) == 1


def test_kernel_and_solve():
    ident = SparseMatrix.identity(3, QQ)
    target = {0: Fraction(2), 2: Fraction(-1)}
    assert solve_in_image(ident, target) == target
    row = _mat(QQ, [[1, 1]])
    basis = kernel_basis(row)
    assert len(basis) == 1
    vec = basis[0]
    assert vec[1] / vec[0] == Fraction(-1)

    rng = random.Random(7)
    for _ in range(25):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = _mat(
            QQ,
            [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)],
        )
        r = rank(m)
        assert len(kernel_basis(m)) == cols - r
        # anything in the column span must solve exactly
        coeffs = {j: QQ.from_int(rng.randint(-3, 3)) for j in range(cols)}
        target = m.apply(coeffs)
        sol = solve_in_image(m, target)
        assert sol is not None
        assert m.apply(sol) == target


def test_solve_detects_non_membership():
    m = _mat(QQ, [[1, 0], [0, 0]])
    assert solve_in_image(m, {1: Fraction(1)}) is None


def test_matrix_json_roundtrippable_strings():
    m = _mat(QQ, [[1, 0], [0, -2]])
    payload = m.to_json()
    assert payload["rows"] == 2 and payload["cols"] == 2
    assert {(e["row"], e["col"], e["value"]) for e in payload["entries"]} == {
        (0, 0, "1"),
        (1, 1, "-2"),
    }
