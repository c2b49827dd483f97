"""Convex solvers for best trigonometric approximation on a grid.

The unknown polynomial is parametrized by ``θ = [a0, a_1..a_n, b_1..b_n]`` so
that its samples are ``Φ θ`` with ``Φ = [1, cos kx, sin kx]``. On a uniform
grid and for ``2n + 1 <= N`` these columns are orthogonal, which makes the
projection onto T(n) cheap and exact.

Every solve returns a certified lower bound next to the achieved value. For
an exponent ``p`` and any ``g`` orthogonal to T(n), Hölder's inequality gives

    <f, g> = <f - t, g> <= |f - t|_p |g|_p'     for every t in T(n),

so ``<f, g> / |g|_p'`` bounds the best error from below. The certificate
``g`` is built from the residual of the computed minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize, nnls



def design_matrix(points: np.ndarray, n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    phase = np.multiply.outer(points, k)
    return np.hstack([np.ones((points.size, 1)), np.cos(phase), np.sin(phase)])


def _column_scale(n: int) -> np.ndarray:
    # Φᵀ Φ = N · diag(1, 1/2, ..., 1/2) on a uniform grid.
    return np.concatenate([[1.0], np.full(2 * n, 2.0)])


def project_out(phi: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Remove the T(n) component of ``g`` (orthogonal projection on the grid)."""
    n = (phi.shape[1] - 1) // 2
    coef = (phi.T @ g) / g.shape[-1] * _column_scale(n)
    return g - phi @ coef


def stable_norms(r: np.ndarray, ps: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Return ``(|r|_p for each p, normalized moments m_p, peak M)``."""
    peak = float(np.max(np.abs(r)))
    if peak == 0.0:
        return np.zeros(ps.shape), np.zeros(ps.shape), 0.0
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(r) / peak)
    moments = np.mean(np.exp(np.multiply.outer(ps, logs)), axis=-1)
    return peak * moments ** (1.0 / ps), moments, peak


def dual_norm(g: np.ndarray, p: float) -> float:
    if p == 1.0:
        return float(np.max(np.abs(g)))
    q = p / (p - 1.0)
    return float(stable_norms(g, np.array([q]))[0][0])


def certified_lower_bound(f: np.ndarray, phi: np.ndarray, g0: np.ndarray, p: float) -> float:
    """Hölder lower bound from the projected certificate ``g0``."""
    g = project_out(phi, g0)
    denom = dual_norm(g, p)
    if denom == 0.0:
        return 0.0
    return max(0.0, float(np.mean(f * g)) / denom)


def residual_certificate(r: np.ndarray, p: float) -> np.ndarray:
    peak = float(np.max(np.abs(r)))
    if peak == 0.0:
        return np.zeros_like(r)
    if p == 1.0:
        return np.sign(r)
    return np.sign(r) * (np.abs(r) / peak) ** (p - 1.0)


@dataclass
class LpSolution:
    theta: np.ndarray
    value: float
    lower: float
    status: str
    iterations: int


def _lp_objective(theta, f, phi, p):
    r = f - phi @ theta
    peak = float(np.max(np.abs(r)))
    if peak == 0.0:
        return -745.0, np.zeros_like(theta)
    a = np.abs(r) / peak
    ap = a ** (p - 1.0)
    moment = float(np.mean(ap * a))
    value = math.log(peak) + math.log(moment) / p
    grad = -(phi.T @ (ap * np.sign(r))) / (r.size * peak * moment)
    return value, grad


def solve_lp(f: np.ndarray, phi: np.ndarray, p: float, theta0: np.ndarray | None = None, rel_tol: float = 1e-9, max_iter: int = 5000) -> LpSolution:
    """Minimize ``|f - Φθ|_p`` for ``1 <= p < inf``."""
    n = (phi.shape[1] - 1) // 2
    N = f.size
    l2 = (phi.T @ f) / N * _column_scale(n)
    if p == 2.0:
        theta = l2
        r = f - phi @ theta
        value = float(stable_norms(r, np.array([2.0]))[0][0])
        lower = certified_lower_bound(f, phi, r, 2.0) if value > 0 else 0.0
        return LpSolution(theta, value, min(lower, value), "exact", 0)
    if p == 1.0:
        return _solve_l1(f, phi)
    theta = l2 if theta0 is None else np.asarray(theta0, dtype=float)
    r = f - phi @ theta
    if np.max(np.abs(r)) <= 1e-14 * max(1.0, np.max(np.abs(f))):
        return LpSolution(theta, float(stable_norms(r, np.array([p]))[0][0]), 0.0, "exact", 0)
    res = minimize(
        _lp_objective,
        theta,
        args=(f, phi, p),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-15},
    )
    theta = res.x
    r = f - phi @ theta
    value = float(stable_norms(r, np.array([p]))[0][0])
    lower = min(certified_lower_bound(f, phi, residual_certificate(r, p), p), value)
    return LpSolution(theta, value, lower, _status(value, lower, rel_tol, res.success), int(res.nit))


def _status(value: float, lower: float, rel_tol: float, ok: bool) -> str:
    gap = value - lower
    if gap <= max(1e-6 * value, 1e-14):
        return "converged"
    tag = "gap" if ok else "stopped"
    return f"{tag}:{gap / value:.2e}" if value > 0 else tag


def _solve_l1(f: np.ndarray, phi: np.ndarray) -> LpSolution:
    N, m = phi.shape
    eye = np.eye(N)
    a_ub = np.block([[phi, -eye], [-phi, -eye]])
    b_ub = np.concatenate([f, -f])
    cost = np.concatenate([np.zeros(m), np.full(N, 1.0 / N)])
    bounds = [(None, None)] * m + [(0, None)] * N
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        theta = (phi.T @ f) / N * _column_scale((m - 1) // 2)
        r = f - phi @ theta
        value = float(np.mean(np.abs(r)))
        return LpSolution(theta, value, 0.0, f"stopped:{res.message}", 0)
    theta = res.x[:m]
    r = f - phi @ theta
    value = float(np.mean(np.abs(r)))
    marg = res.ineqlin.marginals
    g0 = marg[N:] - marg[:N]
    if float(np.mean(f * g0)) < 0:
        g0 = -g0
    lower = certified_lower_bound(f, phi, g0, 1.0)
    fallback = certified_lower_bound(f, phi, np.sign(r), 1.0)
    lower = min(max(lower, fallback), value)
    return LpSolution(theta, value, lower, _status(value, lower, 1e-9, True), int(getattr(res, "nit", 0)))


def gls_objective(theta, f, phi, ps, log_psi):
    """Ratios ``|f - Φθ|_p / ψ(p)`` and their gradients (rows)."""
    r = f - phi @ theta
    norms, moments, peak = stable_norms(r, ps)
    scale = np.exp(-log_psi)
    if peak == 0.0:
        return np.zeros(ps.shape), np.zeros((ps.size, theta.size))
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(r) / peak)
    weights = np.exp(np.multiply.outer(ps - 1.0, np.maximum(logs, -745.0))) * np.sign(r)
    factor = moments ** ((1.0 - ps) / ps)
    grads = -(weights @ phi) / r.size * factor[:, None]
    return norms * scale, grads * scale[:, None]


def solve_gls(
    f: np.ndarray,
    phi: np.ndarray,
    ps: np.ndarray,
    log_psi: np.ndarray,
    starts: list[np.ndarray] | None = None,
    method: str = "slsqp",
    max_iter: int = 500,
    patience: int = 50,
    improve_tol: float = 1e-7,
) -> tuple[np.ndarray, float, str]:
    """Minimize ``max_p |f - Φθ|_p / ψ(p)``; return ``(θ, value, status)``.

    ``slsqp`` solves the epigraph form ``min t`` subject to every ratio being
    at most ``t``. ``subgradient`` follows the subgradient of the active
    exponent with Polyak-type steps and stops when the best value improved by
    less than ``improve_tol`` over ``patience`` iterations. The best of the
    supplied starting points seeds either method, and the better of the
    seed and the result is returned.
    """
    n = (phi.shape[1] - 1) // 2
    l2 = (phi.T @ f) / f.size * _column_scale(n)
    candidates = [l2] + list(starts or [])
    values = [float(np.max(gls_objective(c, f, phi, ps, log_psi)[0])) for c in candidates]
    best = int(np.argmin(values))
    theta0, value0 = candidates[best], values[best]
    if value0 <= 1e-13 * max(1.0, float(np.max(np.abs(f)))):
        return theta0, value0, "exact"
    if method == "slsqp":
        theta, value, status = _slsqp(f, phi, ps, log_psi, theta0, value0, max_iter)
    elif method == "subgradient":
        theta, value, status = _subgradient(f, phi, ps, log_psi, theta0, value0, max_iter * 20, patience, improve_tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    if value > value0:
        return theta0, value0, status + "|seed-kept"
    return theta, value, status


def _slsqp(f, phi, ps, log_psi, theta0, value0, max_iter):
    # Work with f scaled to unit objective so the tolerances are relative.
    scale = value0
    fs = f / scale

    def cons(z):
        vals, _ = gls_objective(z[:-1], fs, phi, ps, log_psi)
        return z[-1] - vals

    def cons_jac(z):
        _, grads = gls_objective(z[:-1], fs, phi, ps, log_psi)
        return np.hstack([-grads, np.ones((ps.size, 1))])

    z0 = np.concatenate([theta0 / scale, [1.0]])
    res = minimize(
        lambda z: z[-1],
        z0,
        jac=lambda z: np.concatenate([np.zeros(z.size - 1), [1.0]]),
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        method="SLSQP",
        options={"maxiter": max_iter, "ftol": 1e-12},
    )
    theta = res.x[:-1] * scale
    value = float(np.max(gls_objective(theta, f, phi, ps, log_psi)[0]))
    return theta, value, "slsqp-ok" if res.success else f"slsqp:{res.message}"


def _subgradient(f, phi, ps, log_psi, theta0, value0, max_iter, patience, improve_tol):
    theta = theta0.copy()
    best_theta, best = theta0.copy(), value0
    history = [best]
    step = 0.1 * value0
    for it in range(max_iter):
        vals, grads = gls_objective(theta, f, phi, ps, log_psi)
        j = int(np.argmax(vals))
        g = grads[j]
        gnorm = float(np.linalg.norm(g))
        if gnorm == 0.0:
            break
        theta = theta - step / math.sqrt(it + 1.0) * g / gnorm
        current = float(np.max(gls_objective(theta, f, phi, ps, log_psi)[0]))
        if current < best:
            best, best_theta = current, theta.copy()
        history.append(best)
        if len(history) > patience and history[-patience - 1] - best < improve_tol * value0:
            return best_theta, best, f"subgradient-stalled@{it}"
    return best_theta, best, "subgradient-maxiter"


def minimax_certificate(f: np.ndarray, phi: np.ndarray, theta: np.ndarray, ps: np.ndarray, log_psi: np.ndarray) -> float:
    """Certified lower bound on ``min_θ max_p |f - Φθ|_p / ψ(p)``.

    With ``h_p = sign(r)|r|^(p-1) / |r|_p^(p-1)`` (so ``|h_p|_p' = 1``) and
    weights ``u_p >= 0`` summing to one, ``g = Σ u_p h_p / ψ(p)`` has dual
    grand Lebesgue cost at most one. Only the sum needs to be orthogonal to
    T(n): after projecting ``g`` the removed part ``Pg`` is charged to the
    cheapest single exponent, giving

        <f, g - Pg> / (1 + min_p ψ(p) |Pg|_p')  <=  min_θ max_p ratio.

    The weights come from a nonnegative least-squares fit that makes the
    weighted gradients of the nearly active ratios cancel.
    """
    r = f - phi @ theta
    peak = float(np.max(np.abs(r)))
    if peak == 0.0:
        return 0.0
    n = (phi.shape[1] - 1) // 2
    norms, moments, _ = stable_norms(r, ps)
    ratios = norms * np.exp(-log_psi)
    top = float(np.max(ratios))
    with np.errstate(divide="ignore"):
        logs = np.maximum(np.log(np.abs(r) / peak), -745.0)
    best = 0.0
    for band in (1e-1, 1e-2, 1e-3, 1e-4, 1e-6):
        active = np.flatnonzero(ratios >= top * (1.0 - band))
        h = np.exp(np.multiply.outer(ps[active] - 1.0, logs)) * np.sign(r)
        h /= (moments[active] ** ((ps[active] - 1.0) / ps[active]))[:, None]
        h *= np.exp(-log_psi[active])[:, None]
        coef = (h @ phi) / r.size * _column_scale(n)
        rho = 1e3 * max(1.0, float(np.max(np.abs(coef))))
        a = np.vstack([coef.T, np.full((1, active.size), rho)])
        b = np.concatenate([np.zeros(coef.shape[1]), [rho]])
        try:
            u, _ = nnls(a, b, maxiter=50 * active.size + 100)
        except RuntimeError:
            continue
        if u.sum() <= 0:
            continue
        u = u / u.sum()
        g = u @ h
        pg = phi @ ((phi.T @ g) / r.size * _column_scale(n))
        g_perp = g - pg
        if np.max(np.abs(pg)) == 0.0:
            penalty = 0.0
        else:
            duals = np.array([dual_norm(pg, p) for p in ps])
            penalty = float(np.min(np.exp(log_psi) * duals))
        bound = float(np.mean(f * g_perp)) / (1.0 + penalty)
        best = max(best, bound)
    return best
