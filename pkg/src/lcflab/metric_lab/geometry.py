"""Finite-difference curvature of catalog metrics.

Metric derivatives come from fourth-order central stencils with step
``h = FD_STEP * (1 + |p|)``. First and second derivatives of the metric are
taken directly from the metric values (no nested differencing), which keeps
the curvature accurate to roughly 1e-9; the covariant derivative of Ricci
differentiates those curvature values once more with the same stencil.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import tensor_core as tc
from .fields import GuardError, MetricField

FD_STEP = 1e-3

_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
# integer stencil weights (divided by 12 afterwards) keep constant data exactly stationary
_W1 = np.array([1.0, -8.0, 8.0, -1.0])
_W2 = np.array([-1.0, 16.0, 16.0, -1.0])
_W2_CENTER = -30.0


def fd_step(p) -> float:
    return FD_STEP * (1.0 + float(np.linalg.norm(p)))


def _guard(field: MetricField, p, margin: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (field.dim,):
        raise ValueError(f"point has shape {p.shape}, expected {(field.dim,)}")
    if not field.inside(p, margin):
        raise GuardError(f"point {p.tolist()} (stencil radius {margin:.3g}) outside chart guard")
    return p


def metric_jets(field: MetricField, p, h: float | None = None, with_second: bool = True):
    """Metric, first and (optionally) second coordinate derivatives at ``p``.

    Returns ``(g, dg, ddg)`` with ``dg[k, i, j] = d_k g_ij`` and
    ``ddg[k, l, i, j] = d_k d_l g_ij``; ``ddg`` is ``None`` when
    ``with_second`` is false.
    """
    n = field.dim
    if h is None:
        h = fd_step(p)
    p = _guard(field, p, (2.0 * np.sqrt(2.0) if with_second else 2.0) * h)
    eye = np.eye(n) * h
    axis_pts = p + _OFFSETS[:, None, None] * eye[None, :, :]  # (4, n, n)
    chunks = [p[None, :], axis_pts.reshape(-1, n)]
    if with_second:
        mixed = (
            p
            + _OFFSETS[:, None, None, None, None] * eye[None, None, :, None, :]
            + _OFFSETS[None, :, None, None, None] * eye[None, None, None, :, :]
        )  # (4, 4, n, n, n): offsets a, b along axes k, l
        chunks.append(mixed.reshape(-1, n))
    values = field.metric(np.concatenate(chunks))
    g0 = values[0]
    g_axis = values[1 : 1 + 4 * n].reshape(4, n, n, n)
    dg = np.einsum("o,okij->kij", _W1, g_axis) / (12.0 * h)
    if not with_second:
        return g0, dg, None
    g_mixed = values[1 + 4 * n :].reshape(4, 4, n, n, n, n)
    ddg = np.einsum("a,b,abklij->klij", _W1, _W1, g_mixed) / (144.0 * h * h)
    pure = (np.einsum("o,okij->kij", _W2, g_axis) + _W2_CENTER * g0) / (12.0 * h * h)
    idx = np.arange(n)
    ddg[idx, idx] = pure
    return g0, dg, ddg


def _gamma_from_jets(g, dg):
    ginv = np.linalg.inv(g)
    # lower[m, i, j] = 1/2 (d_i g_jm + d_j g_im - d_m g_ij)
    lower = 0.5 * (dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg)
    gamma = np.einsum("km,mij->kij", ginv, lower)
    return ginv, lower, (gamma + gamma.transpose(0, 2, 1)) / 2.0


def christoffel(field: MetricField, p, h: float | None = None) -> np.ndarray:
    """Christoffel symbols ``gamma[k, i, j] = Gamma^k_ij`` at ``p``."""
    g, dg, _ = metric_jets(field, p, h, with_second=False)
    return _gamma_from_jets(g, dg)[2]


def _riemann_from_jets(g, dg, ddg):
    ginv, lower, gamma = _gamma_from_jets(g, dg)
    dginv = -np.einsum("ka,lab,bm->lkm", ginv, dg, ginv)
    dlower = 0.5 * (
        ddg.transpose(0, 3, 1, 2) + ddg.transpose(0, 3, 2, 1) - ddg
    )  # dlower[l, m, i, j] = d_l lower[m, i, j]
    dgamma = np.einsum("lkm,mij->lkij", dginv, lower) + np.einsum("km,lmij->lkij", ginv, dlower)
    # R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    up = (
        np.einsum("iljk->lijk", dgamma)
        - np.einsum("jlik->lijk", dgamma)
        + np.einsum("lim,mjk->lijk", gamma, gamma)
        - np.einsum("ljm,mik->lijk", gamma, gamma)
    )
    R = np.einsum("mijk,ml->ijkl", up, g)
    return gamma, R


def riemann_at(field: MetricField, p, h: float | None = None) -> np.ndarray:
    """Type (0, 4) curvature tensor ``R_ijkl = g(R(d_i, d_j) d_k, d_l)``."""
    g, dg, ddg = metric_jets(field, p, h)
    return _riemann_from_jets(g, dg, ddg)[1]


def ricci_at(field: MetricField, p, h: float | None = None):
    """``(g, Ric, s)`` at ``p``."""
    g, dg, ddg = metric_jets(field, p, h)
    ric, s = tc.ricci_contract(_riemann_from_jets(g, dg, ddg)[1], g)
    return g, ric, s


@dataclass
class RicciJet:
    g: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    d_ricci: np.ndarray  # d_ricci[i, j, k] = d_i Ric_jk
    d_scalar: np.ndarray
    nabla_ricci: np.ndarray  # nabla_ricci[i, j, k] = (nabla_i Ric)_jk


def ricci_jet(field: MetricField, p, h: float | None = None) -> RicciJet:
    n = field.dim
    if h is None:
        h = fd_step(p)
    p = _guard(field, p, 2.0 * h + 2.0 * np.sqrt(2.0) * fd_step(np.linalg.norm(p) + 2.0 * h))
    g, dg, ddg = metric_jets(field, p, h)
    gamma, R = _riemann_from_jets(g, dg, ddg)
    ric, s = tc.ricci_contract(R, g)
    ric_axis = np.empty((4, n, n, n))
    s_axis = np.empty((4, n))
    for o, off in enumerate(_OFFSETS):
        for k in range(n):
            q = p.copy()
            q[k] += off * h
            _, r_q, s_q = ricci_at(field, q)
            ric_axis[o, k] = r_q
            s_axis[o, k] = s_q
    d_ric = np.einsum("o,okij->kij", _W1, ric_axis) / (12.0 * h)
    d_s = _W1 @ s_axis / (12.0 * h)
    nabla = d_ric - np.einsum("mij,mk->ijk", gamma, ric) - np.einsum("mik,jm->ijk", gamma, ric)
    nabla = (nabla + nabla.transpose(0, 2, 1)) / 2.0
    return RicciJet(g, gamma, R, ric, s, d_ric, d_s, nabla)


def nabla_ricci(field: MetricField, p, h: float | None = None) -> np.ndarray:
    """``(nabla_i Ric)_jk`` in coordinates, as an ``(n, n, n)`` array."""
    return ricci_jet(field, p, h).nabla_ricci


def codazzi_residual(field: MetricField, p, h: float | None = None) -> float:
    """Max violation of the conformally-flat Codazzi identity at ``p``.

    Checks ``(nabla_x Ric)(y, z) - (nabla_y Ric)(x, z)
    = (x(s) g(y, z) - y(s) g(x, z)) / (2(n-1))`` on coordinate directions.
    """
    jet = ricci_jet(field, p, h)
    n = field.dim
    lhs = jet.nabla_ricci - jet.nabla_ricci.transpose(1, 0, 2)
    rhs = (
        np.einsum("i,jk->ijk", jet.d_scalar, jet.g) - np.einsum("j,ik->ijk", jet.d_scalar, jet.g)
    ) / (2.0 * (n - 1))
    return float(np.abs(lhs - rhs).max())


def weyl_norm_at(field: MetricField, p) -> float:
    g, dg, ddg = metric_jets(field, p)
    R = _riemann_from_jets(g, dg, ddg)[1]
    return tc.tensor_norm(tc.weyl_tensor(R, g), g)


def ricci_spectrum(field: MetricField, p, cluster_tol: float = 1e-6) -> tc.Spectrum:
    g, ric, _ = ricci_at(field, p)
    return tc.sym_eigen(tc.ricci_operator(ric, g), g, cluster_tol)


# --------------------------------------------------------------------------
# orthonormal frames and connection coefficients
# --------------------------------------------------------------------------

class FrameError(ValueError):
    pass


class CoordinateFrame:
    """Normalized coordinate frame ``E_i = d_i / sqrt(g_ii)`` of a diagonal chart.

    ``vectors(p)`` returns an ``(n, n)`` array whose column ``i`` holds the
    coordinate components of ``E_i``.
    """

    def __init__(self, field: MetricField):
        self.field = field

    def vectors_batch(self, points) -> np.ndarray:
        g = self.field.metric(points)
        diag = np.diagonal(g, axis1=-2, axis2=-1)
        off = g - diag[..., :, None] * np.eye(self.field.dim)
        if np.abs(off).max(initial=0.0) > 1e-12:
            raise FrameError("coordinate frame needs a diagonal metric")
        return np.eye(self.field.dim) / np.sqrt(diag)[..., None, :]

    def vectors(self, p) -> np.ndarray:
        return self.vectors_batch(np.asarray(p, dtype=float)[None, :])[0]


def connection_coefficients(field: MetricField, frame, p, h: float | None = None) -> np.ndarray:
    """``omega[i, j, k] = g(nabla_{E_i} E_j, E_k)`` at ``p``."""
    n = field.dim
    if h is None:
        h = fd_step(p)
    p = _guard(field, p, 2.0 * h)
    g = field.metric(p[None, :])[0]
    gamma = christoffel(field, p)
    e = frame.vectors(p)
    pts = p + _OFFSETS[:, None, None] * (np.eye(n) * h)[None, :, :]
    e_axis = frame.vectors_batch(pts.reshape(-1, n)).reshape(4, n, n, n)
    de = np.einsum("o,obaj->baj", _W1, e_axis) / (12.0 * h)  # de[b, a, j] = d_b E_j^a
    # (nabla_{E_i} E_j)^a = E_i^b (d_b E_j^a + Gamma^a_bc E_j^c)
    cov = np.einsum("bi,baj->ija", e, de) + np.einsum("bi,abc,cj->ija", e, gamma, e)
    return np.einsum("ija,ad,dk->ijk", cov, g, e)


def _cluster_labels(values, tol: float, separation: float):
    order = np.argsort(values, kind="stable")
    labels = np.empty(len(values), dtype=int)
    label = 0
    labels[order[0]] = 0
    for a, b in zip(order[:-1], order[1:]):
        gap = values[b] - values[a]
        if gap > separation:
            label += 1
        elif gap >= tol:
            raise FrameError(f"ambiguous eigenvalue gap {gap:.3g} between {tol} and {separation}")
        labels[b] = label
    return labels


@dataclass
class FrameReport:
    eigenvalues: list[float]
    clusters: list[int]
    offdiag_ricci: float
    codazzi_frame: float  # (r_k - r_l) w_ik^l - (r_i - r_l) w_ki^l
    codazzi_diagonal: float  # (r_k - r_l) w_kk^l
    autoparallel: float | None  # w_ij^k for i, j in one class, k in another
    three_class_ratio: float | None  # needs three distinct classes
    eigenframe_sum: float | None  # sum_{j not in I(i)} R_ijji / (r_i - r_j)

    def max_residual(self) -> float:
        vals = [self.codazzi_frame, self.codazzi_diagonal, self.autoparallel,
                self.three_class_ratio, self.eigenframe_sum]
        return max(v for v in vals if v is not None)


def frame_connection_check(
    field: MetricField, p, frame=None, tol: float = 1e-6, separation: float = 1e-3
) -> FrameReport:
    """Connection-coefficient identities of a constant-Ricci conformally flat metric.

    The frame must diagonalize the Ricci tensor at ``p``. Ricci eigenvalues
    closer than ``tol`` share a class, ones further apart than ``separation``
    are distinct, and anything in between raises :class:`FrameError`.
    """
    frame = frame or CoordinateFrame(field)
    g, dg, ddg = metric_jets(field, p)
    R = _riemann_from_jets(g, dg, ddg)[1]
    ric, _ = tc.ricci_contract(R, g)
    e = frame.vectors(p)
    ric_f = e.T @ ric @ e
    offdiag = float(np.abs(ric_f - np.diag(np.diag(ric_f))).max())
    if offdiag > separation:
        raise FrameError(f"frame does not diagonalize Ricci (off-diagonal {offdiag:.3g})")
    r = np.diag(ric_f).copy()
    labels = _cluster_labels(r, tol, separation)
    n = field.dim
    w = connection_coefficients(field, frame, p)
    dr = r[:, None] - r[None, :]  # dr[k, l] = r_k - r_l
    eq_frame = np.einsum("kl,ikl->ikl", dr, w) - np.einsum("il,kil->ikl", dr, w)
    eq_diag = dr * np.einsum("kkl->kl", w)
    same = labels[:, None] == labels[None, :]

    autoparallel = None
    ratio = None
    esum = None
    if labels.max() >= 1:
        mask = same[:, :, None] & (labels[None, None, :] != labels[:, None, None])
        autoparallel = float(np.abs(w[mask]).max())
        Rf = np.einsum("ijkl,ia,jb,kc,ld->abcd", R, e, e, e, e)
        sums = []
        for i in range(n):
            js = [j for j in range(n) if labels[j] != labels[i]]
            sums.append(sum(Rf[i, j, j, i] / (r[i] - r[j]) for j in js))
        esum = float(np.max(np.abs(sums)))
    if labels.max() >= 2:
        vals = []
        for i in range(n):
            for m in range(n):
                for k in range(n):
                    if len({labels[i], labels[m], labels[k]}) == 3:
                        vals.append(w[i, m, k] - (r[i] - r[k]) / (r[m] - r[k]) * w[m, i, k])
        ratio = float(np.max(np.abs(vals)))
    return FrameReport(
        eigenvalues=r.tolist(),
        clusters=labels.tolist(),
        offdiag_ricci=offdiag,
        codazzi_frame=float(np.abs(eq_frame).max()),
        codazzi_diagonal=float(np.abs(eq_diag).max()),
        autoparallel=autoparallel,
        three_class_ratio=ratio,
        eigenframe_sum=esum,
    )
