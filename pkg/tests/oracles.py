"""Closed-form curvature tensors used as independent references in the tests."""

import numpy as np


def constant_curvature(g, K):
    """R_ijkl = K (g_il g_jk - g_ik g_jl), so R(x,y,y,x) = K on orthonormal pairs."""
    g = np.asarray(g, dtype=float)
    return K * (np.einsum("il,jk->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g))


def product_curvature(blocks):
    """Curvature of a product of constant-curvature factors at an orthonormal point.

    ``blocks`` is a list of ``(dim, K)``; the tensor lives on the identity metric.
    """
    n = sum(d for d, _ in blocks)
    R = np.zeros((n, n, n, n))
    start = 0
    for d, K in blocks:
        sl = slice(start, start + d)
        R[sl, sl, sl, sl] = constant_curvature(np.eye(d), K)
        start += d
    return R


def brute_jacobi(R, x):
    """Jacobi operator on the identity metric by assembling R(e_j, x, x, e_w) entry by entry."""
    n = len(x)
    x = np.asarray(x, dtype=float) / np.linalg.norm(x)
    A = np.zeros((n, n))
    for w in range(n):
        for j in range(n):
            A[w, j] = sum(R[j, a, b, w] * x[a] * x[b] for a in range(n) for b in range(n))
    return A


def symbolic_ricci_data(metric_fn, n, point):
    """Exact Christoffels, Ricci, scalar, nabla Ric and ds at ``point`` via sympy.

    ``metric_fn(xs)`` returns a sympy Matrix. Conventions: Gamma[k][i][j] =
    Gamma^k_ij, R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + ..., Ric_jk = R^i_ijk.
    """
    import sympy as sp

    xs = sp.symbols(f"x0:{n}")
    g = metric_fn(xs)
    ginv = g.inv()
    gam = [[[sp.simplify(sum(ginv[k, m] * (sp.diff(g[j, m], xs[i]) + sp.diff(g[i, m], xs[j])
                                            - sp.diff(g[i, j], xs[m])) for m in range(n)) / 2)
             for j in range(n)] for i in range(n)] for k in range(n)]

    def riem_up(l, i, j, k):
        expr = sp.diff(gam[l][j][k], xs[i]) - sp.diff(gam[l][i][k], xs[j])
        expr += sum(gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k] for m in range(n))
        return expr

    ric = sp.Matrix(n, n, lambda j, k: sp.simplify(sum(riem_up(i, i, j, k) for i in range(n))))
    s = sp.simplify(sum(ginv[j, k] * ric[j, k] for j in range(n) for k in range(n)))
    nab = [[[sp.diff(ric[j, k], xs[i])
             - sum(gam[m][i][j] * ric[m, k] + gam[m][i][k] * ric[j, m] for m in range(n))
             for k in range(n)] for j in range(n)] for i in range(n)]
    subs = dict(zip(xs, [sp.nsimplify(v) for v in point]))
    ev = lambda e: float(sp.N(e.subs(subs), 30))
    return {
        "g": np.array([[ev(g[i, j]) for j in range(n)] for i in range(n)]),
        "gamma": np.array([[[ev(gam[k][i][j]) for j in range(n)] for i in range(n)] for k in range(n)]),
        "ric": np.array([[ev(ric[i, j]) for j in range(n)] for i in range(n)]),
        "s": ev(s),
        "ds": np.array([ev(sp.diff(s, x)) for x in xs]),
        "nabla_ric": np.array([[[ev(nab[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)]),
    }


def codazzi_from(data):
    nab, ds, g = data["nabla_ric"], data["ds"], data["g"]
    n = len(ds)
    lhs = nab - nab.transpose(1, 0, 2)
    rhs = (np.einsum("i,jk->ijk", ds, g) - np.einsum("j,ik->ijk", ds, g)) / (2.0 * (n - 1))
    return float(np.abs(lhs - rhs).max())


def conformal_catalog():
    """One field per conformal-factor profile (n = 4), plus the x_1^2 factor."""
    from lcflab.metric_lab import Conformal

    return [
        Conformal(4, "linear", [0.3, -0.2, 0.1, 0.4]),
        Conformal(4, "quadratic", [1, 0, 0, 0]),
        Conformal(4, "quadratic", [0.5, -0.3, 0.2, 0.1]),
        Conformal(4, "gaussian", [1, 1]),
    ]
