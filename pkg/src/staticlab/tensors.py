"""Small dense multilinear algebra for the pointwise curvature identities.

Kulkarni-Nomizu products, assembly of the static-spacetime curvature tensor
in a Lorentz orthonormal frame, the coercivity gap of the Lorentzian
mean-curvature operator, and the pseudo-Jacobi / Newton inequalities used by
the gradient estimate.  Dimensions stay tiny (n <= 8), so everything is
plain dense numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import StaticModel, curvature_sample

__all__ = [
    "SymForm",
    "Curv4Tensor",
    "GradHessPoint",
    "kulkarni_nomizu",
    "static_riemann",
    "coercivity_gap",
    "pseudo_jacobi_gap",
    "pseudo_jacobi_gap_batch",
    "project_a_tracefree",
    "project_a_tracefree_batch",
    "newton_gap",
    "sample_gradhess_batch",
]


@dataclass(frozen=True)
class SymForm:
    """Dense symmetric bilinear form on R^n, n <= 8."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("SymForm needs a square array")
        if a.shape[0] > 8:
            raise ValueError("SymForm is limited to n <= 8")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > 1e-12 * scale:
            raise ValueError("SymForm entries are not symmetric within 1e-12")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Curv4Tensor:
    """(0,4) curvature-type tensor in an orthonormal frame.

    ``eps`` holds the frame signature (+1 spatial, -1 timelike) used when
    contracting to the Ricci tensor.
    """

    entries: np.ndarray
    eps: np.ndarray = None

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", a)
        n = a.shape[0]
        if a.shape != (n, n, n, n):
            raise ValueError("Curv4Tensor needs an (n,n,n,n) array")
        eps = np.ones(n) if self.eps is None else np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def symmetry_residual(self) -> float:
        """Max violation of the pair symmetries and the first Bianchi sum."""
        r = self.entries
        res = max(
            float(np.max(np.abs(r + r.transpose(1, 0, 2, 3)))),
            float(np.max(np.abs(r + r.transpose(0, 1, 3, 2)))),
            float(np.max(np.abs(r - r.transpose(2, 3, 0, 1)))),
        )
        bianchi = r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)
        return max(res, float(np.max(np.abs(bianchi))))

    def ricci(self) -> np.ndarray:
        """Ric(X,Y) = sum_a eps_a Riem(e_a, X, e_a, Y)."""
        return np.einsum("a,axay->xy", self.eps, self.entries)


def kulkarni_nomizu(alpha: SymForm, beta: SymForm) -> Curv4Tensor:
    """Kulkarni-Nomizu product of two symmetric bilinear forms.

    (a @ b)(X1,X2,X3,X4) = a(X1,X3) b(X2,X4) + a(X2,X4) b(X1,X3)
                         - a(X1,X4) b(X2,X3) - a(X2,X3) b(X1,X4)
    """
    if alpha.n != beta.n:
        raise ValueError("Kulkarni-Nomizu product needs matching dimensions")
    a = alpha.entries
    b = beta.entries
    t = (
        np.einsum("ik,jl->ijkl", a, b)
        + np.einsum("jl,ik->ijkl", a, b)
        - np.einsum("il,jk->ijkl", a, b)
        - np.einsum("jk,il->ijkl", a, b)
    )
    return Curv4Tensor(t)


def static_riemann(model: StaticModel, s) -> Curv4Tensor:
    """Curvature tensor of the model at s in the Lorentz orthonormal frame.

    Frame: e_1 radial, e_2..e_m tangential, e_{m+1} = dt/h.  The base block is
    the radial space form with sectional curvatures (K_rad, K_tan); the time
    correction is (h Hess h) KN-multiplied with dt (x) dt.
    """
    m = model.m
    n = m + 1
    cs = curvature_sample(model, s)
    h, _, _ = model.warp.evaluate(s)

    riem = np.zeros((n, n, n, n))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            k = cs.K_rad if (i == 0 or j == 0) else cs.K_tan
            riem[i, j, i, j] += k
            riem[i, j, j, i] -= k

    hess = np.zeros((n, n))
    hess[0, 0] = cs.hessh_rr
    for i in range(1, m):
        hess[i, i] = cs.hessh_tt
    dt2 = np.zeros((n, n))
    dt2[m, m] = 1.0 / (h * h)
    correction = kulkarni_nomizu(SymForm(h * hess), SymForm(dt2))

    eps = np.ones(n)
    eps[m] = -1.0
    return Curv4Tensor(riem + correction.entries, eps=eps)


def coercivity_gap(x, y) -> float:
    """<X/sqrt(1-|X|^2) - Y/sqrt(1-|Y|^2), X - Y>, nonnegative for |X|,|Y| < 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(np.dot(x, x))
    ny = float(np.dot(y, y))
    if nx >= 1.0 or ny >= 1.0:
        raise ValueError("coercivity_gap needs |X| < 1 and |Y| < 1")
    fx = x / np.sqrt(1.0 - nx)
    fy = y / np.sqrt(1.0 - ny)
    return float(np.dot(fx - fy, x - y))


def coercivity_gap_batch(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised coercivity gaps for row-stacked point pairs."""
    nx = np.sum(xs * xs, axis=1)
    ny = np.sum(ys * ys, axis=1)
    if np.any(nx >= 1.0) or np.any(ny >= 1.0):
        raise ValueError("coercivity_gap needs |X| < 1 and |Y| < 1")
    fx = xs / np.sqrt(1.0 - nx)[:, None]
    fy = ys / np.sqrt(1.0 - ny)[:, None]
    return np.sum((fx - fy) * (xs - ys), axis=1)


@dataclass(frozen=True)
class GradHessPoint:
    """Pointwise gradient/Hessian state for the pseudo-Jacobi inequality.

    Derived data: Theta = 1/sqrt(1-|u|^2), a_up = id + Theta^2 u(x)u,
    a_down = id - u(x)u (mutually inverse), B = a_up . hess.
    """

    m: int
    u_vec: np.ndarray
    hess_u: SymForm
    alpha: float

    def __post_init__(self):
        u = np.asarray(self.u_vec, dtype=float)
        object.__setattr__(self, "u_vec", u)
        if u.shape != (self.m,) or self.hess_u.n != self.m:
            raise ValueError("GradHessPoint dimension mismatch")
        if np.dot(u, u) >= 1.0:
            raise ValueError("GradHessPoint needs |u| < 1")
        if not 0.0 < self.alpha <= 1.0 / (self.m - 1):
            raise ValueError("alpha must lie in (0, 1/(m-1)]")
        if np.max(np.abs(self.a_up @ self.a_down - np.eye(self.m))) > 1e-10:
            raise ValueError("a_up and a_down failed to invert each other")

    @property
    def theta(self) -> float:
        return 1.0 / np.sqrt(1.0 - float(np.dot(self.u_vec, self.u_vec)))

    @property
    def a_up(self) -> np.ndarray:
        th2 = self.theta**2
        return np.eye(self.m) + th2 * np.outer(self.u_vec, self.u_vec)

    @property
    def a_down(self) -> np.ndarray:
        return np.eye(self.m) - np.outer(self.u_vec, self.u_vec)

    @property
    def b_op(self) -> np.ndarray:
        return self.a_up @ self.hess_u.entries


def project_a_tracefree(u_vec, hess_raw) -> SymForm:
    """Remove the a-trace along the identity so that a^{ij} h_{ij} = 0.

    Subtracts (tr_a h / tr_a id) * id, which keeps symmetry and lands the
    maximality constraint exactly (up to roundoff).
    """
    u = np.asarray(u_vec, dtype=float)
    h = np.asarray(hess_raw, dtype=float)
    h = 0.5 * (h + h.T)
    th2 = 1.0 / (1.0 - float(np.dot(u, u)))
    a_up = np.eye(u.size) + th2 * np.outer(u, u)
    c = np.sum(a_up * h) / np.trace(a_up)
    return SymForm(h - c * np.eye(u.size))


def project_a_tracefree_batch(us: np.ndarray, hs: np.ndarray) -> np.ndarray:
    th2 = 1.0 / (1.0 - np.sum(us * us, axis=1))
    eye = np.eye(us.shape[1])
    a_up = eye[None, :, :] + th2[:, None, None] * np.einsum("ni,nj->nij", us, us)
    hs = 0.5 * (hs + np.swapaxes(hs, 1, 2))
    c = np.einsum("nij,nij->n", a_up, hs) / np.einsum("nii->n", a_up)
    return hs - c[:, None, None] * eye[None, :, :]


def pseudo_jacobi_gap(pt: GradHessPoint) -> float:
    """trace(B^2) - (alpha+1) Theta^2 a_down(B u, B u), guaranteed >= 0.

    The input Hessian must be a-trace-free (the maximality constraint); a
    violation beyond 1e-10 raises.
    """
    b = pt.b_op
    if abs(np.trace(b)) > 1e-10 * max(1.0, float(np.max(np.abs(b)))):
        raise ValueError("pseudo_jacobi_gap: hessian is not a-trace-free")
    bu = b @ pt.u_vec
    second = float(bu @ pt.a_down @ bu)
    return float(np.sum(b * b.T)) - (pt.alpha + 1.0) * pt.theta**2 * second


def pseudo_jacobi_gap_batch(us: np.ndarray, hs: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorised pseudo-Jacobi gaps; ``hs`` must already be a-trace-free."""
    n, m = us.shape
    th2 = 1.0 / (1.0 - np.sum(us * us, axis=1))
    eye = np.eye(m)
    a_up = eye[None, :, :] + th2[:, None, None] * np.einsum("ni,nj->nij", us, us)
    a_dn = eye[None, :, :] - np.einsum("ni,nj->nij", us, us)
    b = np.einsum("nik,nkj->nij", a_up, hs)
    tr_b2 = np.einsum("nij,nji->n", b, b)
    bu = np.einsum("nij,nj->ni", b, us)
    second = np.einsum("ni,nij,nj->n", bu, a_dn, bu)
    return tr_b2 - (alpha + 1.0) * th2 * second


def newton_gap(lambdas) -> float:
    """(m-1) sum_{i>=2} lambda_i^2 - lambda_1^2 for a trace-free spectrum.

    lambda_1 is the entry of largest square; the zero-sum constraint is
    enforced to 1e-10.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))
    scale = max(1.0, float(np.max(np.abs(lam))))
    if abs(np.sum(lam)) > 1e-10 * scale:
        raise ValueError("newton_gap: eigenvalues must sum to zero")
    order = np.lexsort((-lam, -lam**2))
    lam = lam[order]
    m = lam.size
    return float((m - 1) * np.sum(lam[1:] ** 2) - lam[0] ** 2)


def sample_gradhess_batch(seed: int, count: int, m: int):
    """Seeded sampler for the pseudo-Jacobi property sweep.

    Gradients are rejected to |u| <= 0.99 (staying clear of the null cone),
    raw Hessian entries are uniform in [-5, 5], and the result is projected
    a-trace-free.  Returns (us, hessians).
    """
    rng = np.random.default_rng(seed)
    us = np.empty((count, m))
    filled = 0
    while filled < count:
        block = rng.uniform(-1.0, 1.0, size=(2 * (count - filled) + 16, m))
        ok = block[np.sum(block * block, axis=1) <= 0.99**2]
        take = min(ok.shape[0], count - filled)
        us[filled : filled + take] = ok[:take]
        filled += take
    raw = rng.uniform(-5.0, 5.0, size=(count, m, m))
    hs = project_a_tracefree_batch(us, raw)
    return us, hs
