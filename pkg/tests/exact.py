"""Exact (sympy) reference computations, independent of the package's numerics."""
import itertools

import sympy as sp

HALF_ROOT3 = sp.sqrt(3) / 2


def s3_standard():
    """Generators (rotation by 2pi/3, reflection) of the 2-dim irrep of S3, exact."""
    r = sp.Matrix([[-sp.Rational(1, 2), -HALF_ROOT3], [HALF_ROOT3, -sp.Rational(1, 2)]])
    s = sp.Matrix([[1, 0], [0, -1]])
    return r, s


def s3_elements():
    r, s = s3_standard()
    return [r**k * s**e for e in range(2) for k in range(3)]


def kron(a, b):
    return sp.kronecker_product(a, b)


def unknown(n, name="a"):
    syms = sp.symbols(f"{name}0:{n * n}")
    return sp.Matrix(n, n, syms), syms


def solve_linear(constraints, syms):
    """Basis of solutions of the homogeneous linear matrix equations, as matrices in ``syms`` order."""
    eqs = []
    for c in constraints:
        eqs.extend(sp.expand(e) for e in c)
    A = sp.Matrix([[sp.diff(e, x) for x in syms] for e in eqs])
    return A.nullspace(simplify=True)


def as_square(vec):
    n = int(round(len(vec) ** 0.5))
    return sp.Matrix(n, n, list(vec))


def span_rank(mats):
    if not mats:
        return 0
    rows = sp.Matrix([[sp.nsimplify(sp.simplify(x)) for x in m] for m in mats])
    return rows.rank(simplify=True)


def x2_basis(gens_u, gens_pi, N):
    """X_2 for X = M_N, layout 'outer index = H_pi': (I (x) u) a (I (x) u)^* = a (pi (x) I_N)."""
    d = gens_pi[0].shape[0]
    a, syms = unknown(d * N)
    cons = []
    for u, p in zip(gens_u, gens_pi):
        W = kron(sp.eye(d), u)
        cons.append(W * a * W.H - a * kron(p, sp.eye(N)))
    return [as_square(v) for v in solve_linear(cons, syms)]


def twisted_fixed_basis(gens_u, gens_pi, N):
    d = gens_pi[0].shape[0]
    a, syms = unknown(d * N)
    cons = []
    for u, p in zip(gens_u, gens_pi):
        W = kron(p, u)
        cons.append(W * a * W.H - a)
    return [as_square(v) for v in solve_linear(cons, syms)]


def center_dim(basis):
    """Dimension of the center of the algebra spanned by ``basis``."""
    cs = sp.symbols(f"c0:{len(basis)}")
    z = sum((c * b for c, b in zip(cs, basis)), sp.zeros(*basis[0].shape))
    cons = [z * b - b * z for b in basis]
    return len(solve_linear(cons, cs))


def product_rank(left, right):
    return span_rank([sp.simplify(x * y) for x, y in itertools.product(left, right)])
