"""Pointwise curvature algebra on a single tangent space.

Everything here works on plain numpy arrays in a coordinate basis:

* a point metric ``g`` is a symmetric positive definite ``(n, n)`` array,
* a Ricci tensor is a symmetric ``(n, n)`` array,
* a curvature tensor ``R`` is an ``(n, n, n, n)`` array of type (0, 4),
* a self-adjoint operator is an ``(n, n)`` array acting on column vectors.

Sign conventions: ``R(x, y, z, u) = g(R(x, y)z, u)`` with
``R(X, Y) = [D_X, D_Y] - D_[X, Y]``, and the Ricci tensor is the contraction
``Ric(y, z) = sum_a R(e_a, y, z, e_a)`` over a g-orthonormal basis. With these
choices the round unit sphere has sectional curvature +1 and the conformally
flat synthesis below contracts back to its input.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

SYM_TOL = 1e-9
CLUSTER_TOL = 1e-7
MAX_DIM = 16


class TensorError(ValueError):
    """Invalid input to a pointwise tensor operation."""


# --------------------------------------------------------------------------
# validation helpers
# --------------------------------------------------------------------------

def check_metric(g, tol: float = SYM_TOL) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise TensorError(f"metric must be square, got shape {g.shape}")
    n = g.shape[0]
    if n < 2 or n > MAX_DIM:
        raise TensorError(f"metric dimension {n} outside 2..{MAX_DIM}")
    scale = max(1.0, float(np.abs(g).max()))
    if np.abs(g - g.T).max() > tol * scale:
        raise TensorError("metric is not symmetric")
    for k in range(1, n + 1):
        if np.linalg.det(g[:k, :k]) <= tol * scale**k:
            raise TensorError("metric is not positive definite")
    return g


def _check_symmetric(a, n: int, name: str, tol: float = SYM_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (n, n):
        raise TensorError(f"{name} has shape {a.shape}, expected {(n, n)}")
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > tol * scale:
        raise TensorError(f"{name} is not symmetric")
    return a


def _check_riemann(R, n: int) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (n,) * 4:
        raise TensorError(f"curvature tensor has shape {R.shape}, expected {(n,) * 4}")
    return R


def symmetry_violations(R) -> dict[str, float]:
    """Max absolute violation of each algebraic curvature identity."""
    R = np.asarray(R, dtype=float)
    bianchi = R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)
    return {
        "antisym_first_pair": float(np.abs(R + R.transpose(1, 0, 2, 3)).max()),
        "antisym_second_pair": float(np.abs(R + R.transpose(0, 1, 3, 2)).max()),
        "pair_exchange": float(np.abs(R - R.transpose(2, 3, 0, 1)).max()),
        "first_bianchi": float(np.abs(bianchi).max()),
    }


# --------------------------------------------------------------------------
# curvature synthesis and contraction
# --------------------------------------------------------------------------

def _kulkarni_nomizu(h, k) -> np.ndarray:
    # (h o k)_ijkl = h_jk k_il - h_ik k_jl + k_jk h_il - k_ik h_jl
    a = np.einsum("jk,il->ijkl", h, k) - np.einsum("ik,jl->ijkl", h, k)
    return a + np.einsum("jk,il->ijkl", k, h) - np.einsum("ik,jl->ijkl", k, h)


def lcf_curvature_from_ricci(ric, s, g) -> np.ndarray:
    """Build the Weyl-free curvature tensor with prescribed Ricci data.

    This is the curvature of a locally conformally flat metric expressed
    through its Ricci tensor ``ric`` and scalar curvature ``s``::

        R = -s/((n-1)(n-2)) * (g (x) g)/2 + 1/(n-2) * (Ric (x) g)

    where ``(x)`` is the Kulkarni-Nomizu product. ``s`` may be ``None``, in
    which case the g-trace of ``ric`` is used. In dimension 3 the tensor is
    still returned but a warning is issued, since vanishing Weyl tensor is not
    the conformal flatness criterion there.
    """
    g = check_metric(g)
    n = g.shape[0]
    ric = _check_symmetric(ric, n, "Ricci tensor")
    if n < 3:
        raise TensorError("curvature synthesis needs dim >= 3")
    trace = float(np.einsum("ij,ij->", np.linalg.inv(g), ric))
    if s is None:
        s = trace
    elif abs(s - trace) > 1e-9 * max(1.0, abs(trace)):
        raise TensorError(f"scalar curvature {s} inconsistent with trace {trace}")
    if n == 3:
        warnings.warn("dim 3: vanishing Weyl tensor is not an lcf criterion", stacklevel=2)
    gg = _kulkarni_nomizu(g, g) / 2.0
    return -s / ((n - 1) * (n - 2)) * gg + _kulkarni_nomizu(ric, g) / (n - 2)


def ricci_contract(R, g) -> tuple[np.ndarray, float]:
    """Ricci tensor ``Ric_jk = g^il R_ijkl`` and scalar curvature ``s``."""
    g = check_metric(g)
    n = g.shape[0]
    R = _check_riemann(R, n)
    ginv = np.linalg.inv(g)
    ric = np.einsum("il,ijkl->jk", ginv, R)
    ric = (ric + ric.T) / 2.0
    return ric, float(np.einsum("jk,jk->", ginv, ric))


def weyl_tensor(R, g) -> np.ndarray:
    g = check_metric(g)
    n = g.shape[0]
    if n < 4:
        raise TensorError("Weyl tensor requires dim >= 4")
    R = _check_riemann(R, n)
    ric, s = ricci_contract(R, g)
    return R - lcf_curvature_from_ricci(ric, s, g)


def tensor_norm(T, g) -> float:
    """g-norm of a (0, 4) tensor, ``sqrt(T_ijkl T^ijkl)``."""
    ginv = np.linalg.inv(check_metric(g))
    up = np.einsum("ia,jb,kc,ld,abcd->ijkl", ginv, ginv, ginv, ginv, T)
    return float(np.sqrt(max(0.0, np.einsum("ijkl,ijkl->", up, T))))


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------

def jacobi_operator(R, x, g) -> np.ndarray:
    """Matrix of ``y -> R(y, x)x`` for the g-unit vector along ``x``.

    The returned ``A`` satisfies ``g(Ay, w) = R(y, x, x, w)``.
    """
    g = check_metric(g)
    n = g.shape[0]
    R = _check_riemann(R, n)
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise TensorError(f"vector has shape {x.shape}, expected {(n,)}")
    norm2 = float(x @ g @ x)
    if norm2 <= 1e-24:
        raise TensorError("Jacobi operator of the zero vector")
    x = x / np.sqrt(norm2)
    m = np.einsum("jabw,a,b->jw", R, x, x)
    m = (m + m.T) / 2.0
    return np.linalg.solve(g, m)


def ricci_operator(ric, g) -> np.ndarray:
    """The operator rho with ``g(rho x, y) = Ric(x, y)``."""
    g = check_metric(g)
    ric = _check_symmetric(ric, g.shape[0], "Ricci tensor")
    return np.linalg.solve(g, ric)


def sectional(R, x, y, g) -> float:
    g = check_metric(g)
    R = _check_riemann(R, g.shape[0])
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    denom = (x @ g @ x) * (y @ g @ y) - (x @ g @ y) ** 2
    if denom < 1e-12:
        raise TensorError("degenerate plane")
    return float(np.einsum("ijkl,i,j,k,l->", R, x, y, y, x) / denom)


# --------------------------------------------------------------------------
# symmetric eigensolver
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    lo: float
    hi: float
    multiplicity: int

    @property
    def center(self) -> float:
        return (self.lo + self.hi) / 2.0


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, their clusters, and g-orthonormal eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    clusters: tuple[Cluster, ...]
    eigenvectors: np.ndarray | None = field(default=None, compare=False)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(c.multiplicity for c in self.clusters)

    @property
    def distinct(self) -> int:
        return len(self.clusters)


def jacobi_rotation_eigh(a, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Sweeps the strict upper triangle row by row until the off-diagonal
    Frobenius norm drops below ``tol * ||a||_F``. Returns the (unsorted)
    diagonal and the accumulated orthogonal matrix whose columns are the
    eigenvectors.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) <= 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise TensorError("Jacobi sweeps did not converge")
    return np.diag(a).copy(), v


def cluster_values(values, tol: float = CLUSTER_TOL) -> tuple[Cluster, ...]:
    """Group ascending values whose consecutive gaps are below ``tol``."""
    values = list(values)
    if not values:
        return ()
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            clusters.append(Cluster(float(values[start]), float(values[i - 1]), i - start))
            start = i
    return tuple(clusters)


def sym_eigen(a, g=None, cluster_tol: float = CLUSTER_TOL) -> Spectrum:
    """Spectrum of an operator self-adjoint with respect to ``g``.

    ``g`` defaults to the identity. The operator is congruence-transformed to
    a symmetric matrix through the Cholesky factor of ``g``, diagonalized by
    cyclic Jacobi rotations, and the eigenvectors are mapped back so that they
    are g-orthonormal. Ties in the ascending sort keep input index order.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    g = np.eye(n) if g is None else check_metric(g)
    if a.shape != (n, n):
        raise TensorError(f"operator has shape {a.shape}, expected {(n, n)}")
    ga = g @ a
    scale = max(1.0, float(np.abs(ga).max()))
    if np.abs(ga - ga.T).max() > 1e-8 * scale:
        raise TensorError("operator is not self-adjoint with respect to g")
    low = np.linalg.cholesky(g)
    # b = L^T A L^{-T} is symmetric when gA is
    b = low.T @ a @ np.linalg.inv(low.T)
    b = (b + b.T) / 2.0
    w, v = jacobi_rotation_eigh(b)
    order = np.argsort(w, kind="stable")
    w = w[order]
    vecs = np.linalg.solve(low.T, v[:, order])
    return Spectrum(w, cluster_values(w, cluster_tol), vecs)


def project_curvature(T) -> np.ndarray:
    """Project a 4-tensor onto the algebraic curvature tensors.

    Antisymmetrizes both index pairs, symmetrizes under pair exchange and
    removes the totally antisymmetric part that the first Bianchi identity
    forbids.
    """
    T = np.asarray(T, dtype=float)
    T = (T - T.transpose(1, 0, 2, 3)) / 2.0
    T = (T - T.transpose(0, 1, 3, 2)) / 2.0
    T = (T + T.transpose(2, 3, 0, 1)) / 2.0
    return T - (T + T.transpose(1, 2, 0, 3) + T.transpose(2, 0, 1, 3)) / 3.0


def random_curvature_tensor(rng: np.random.Generator, n: int) -> np.ndarray:
    return project_curvature(rng.standard_normal((n, n, n, n)))


def random_metric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Well-conditioned random positive definite matrix."""
    a = rng.standard_normal((n, n))
    return a @ a.T / n + np.eye(n)
