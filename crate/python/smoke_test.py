"""Smoke test for the mpjacobi extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math

import mpjacobi


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def main():
    n = 60
    a = mpjacobi.generate(n, 500.0, mode="geo", seed=3)
    assert len(a) == n and all(len(r) == n for r in a)
    assert all(a[i][j] == a[j][i] for i in range(n) for j in range(n))

    ud = mpjacobi.UNIT_ROUNDOFF_BINARY64
    r = mpjacobi.solve_mixed(a)
    print(r)
    assert r.converged
    assert r.residual_ratio <= n * ud
    assert r.orthogonality_defect <= n * ud
    assert r.sweeps <= 5

    plain = mpjacobi.solve_unpreconditioned(a)
    assert plain.converged and plain.rotations > r.rotations
    for x, y in zip(sorted(r.eigenvalues), sorted(plain.eigenvalues)):
        assert abs(x - y) <= 1e-12

    cyc = mpjacobi.jacobi_cyclic([[2.0, 1.0], [1.0, 2.0]])
    assert sorted(round(x, 12) for x in cyc.eigenvalues) == [1.0, 3.0]
    cls = mpjacobi.jacobi_classical([[7.0]])
    assert cls.eigenvalues == [7.0] and cls.rotations == 0

    q, rr = mpjacobi.householder_qr(a)
    qr = matmul(q, rr)
    assert max(abs(qr[i][j] - a[i][j]) for i in range(n) for j in range(n)) <= 1e-13
    assert mpjacobi.orthogonality_defect(q) <= 4 * n * ud

    near = [[1.0 + 1e-6, 1e-7], [0.0, 1.0]]
    u, steps = mpjacobi.newton_schulz(near)
    assert steps == 2 and mpjacobi.orthogonality_defect(u) <= 1e-15
    u, _ = mpjacobi.polar_newton([[2.0, 0.0], [0.0, 0.5]])
    assert abs(u[0][0] - 1.0) <= 1e-14 and abs(u[1][1] - 1.0) <= 1e-14

    assert math.isclose(mpjacobi.fro_norm([[3.0, 4.0]]), 5.0)
    assert mpjacobi.off_norm([[1.0, 2.0], [2.0, 1.0]]) == math.sqrt(8.0)

    for bad in (lambda: mpjacobi.jacobi_cyclic([[1.0, 2.0], [3.0, 1.0]]),
                lambda: mpjacobi.generate(1, 10.0),
                lambda: mpjacobi.solve_mixed(a, backend="lapack")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    vt = transpose(r.eigenvectors)
    assert len(vt) == n
    print("smoke test passed")


if __name__ == "__main__":
    main()
