"""Holomorphic functional calculus on matrices.

``calc_contour`` is the Riesz-Dunford integral ``(1/2 pi i) \\oint h(l) (l - T)^{-1} dl``
by the trapezoid rule on circles. ``calc_triangular`` is an independent route
through the Schur form (block Parlett recurrence) used to cross-check it, and
``calc_normal`` handles normal matrices by unitary diagonalization.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
import scipy.linalg as sla

from ..errors import (
    ClusterTooLarge,
    NoValidContour,
    NotNormal,
    SingularityHit,
    SingularResolvent,
)
from ..linalg import (
    _unordered_schur,
    as_matrix,
    dagger,
    eigenvalues,
    fro,
    normality_residual,
    reorder_schur,
    spectral_norm,
)
from ..ordering import OrderingTag
from .contour import DEFAULT_NODES, Contour, auto_contour
from .expr import HoloFunction

GRAZE_RTOL = 1e-6
CLUSTER_RTOL = 1e-7
MAX_TAYLOR_CLUSTER = 8
SINGULAR_RTOL = 1e-8
NORMAL_RTOL = 1e-8
CHUNK = 32

Kernel = Callable[[np.ndarray], np.ndarray]


def contour_for(t, h: HoloFunction, nodes: int = DEFAULT_NODES, extra_points=()) -> Contour:
    """Automatic contour about ``sigma(T)`` (plus ``extra_points``) for ``h``."""
    t = as_matrix(t)
    pts = np.concatenate([eigenvalues(t), np.asarray(extra_points, dtype=np.complex128)])
    c = np.mean(pts)
    extent = spectral_norm(t - c * np.eye(t.shape[0]))
    try:
        return auto_contour(pts, h, nodes, extent=extent)
    except NoValidContour:
        return auto_contour(pts, h, nodes)


def resolvent_kernel(t: np.ndarray) -> Kernel:
    n = t.shape[0]
    eye = np.eye(n, dtype=np.complex128)

    def kernel(lams: np.ndarray) -> np.ndarray:
        shifted = lams[:, None, None] * eye - t
        try:
            return np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))
        except np.linalg.LinAlgError as exc:
            raise SingularResolvent(
                "a quadrature node makes (lambda - T) singular; perturb the radius"
            ) from exc

    return kernel


def quadrature(
    contour: Contour, h: HoloFunction, kernel: Kernel, n: int, workers: int = 1
) -> np.ndarray:
    """``sum_circles (1/M) sum_k h(l_k) (l_k - c) K(l_k)`` accumulated in node order.

    Kernel evaluations are chunked with a fixed chunk size and may run on
    ``workers`` threads; the reduction order never depends on ``workers``.
    """
    jobs = []
    for circle in contour.circles:
        lams = circle.points()
        weights = h(lams) * (lams - circle.center) / circle.nodes
        for s in range(0, lams.size, CHUNK):
            jobs.append((lams[s : s + CHUNK], weights[s : s + CHUNK]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda job: kernel(job[0]), jobs))
    else:
        blocks = [kernel(lams) for lams, _ in jobs]
    acc = np.zeros((n, n), dtype=np.complex128)
    for (_, w), block in zip(jobs, blocks):
        for k in range(w.size):
            acc += w[k] * block[k]
    return acc


def _check_grazing(contour: Contour, eigs: np.ndarray) -> None:
    for circle in contour.circles:
        gap = np.min(np.abs(circle.points()[:, None] - eigs[None, :]))
        if gap < GRAZE_RTOL * circle.radius:
            raise SingularResolvent(
                f"a node of the circle at {circle.center} grazes the spectrum "
                f"(gap {gap:.2e}); perturb the radius"
            )


def calc_contour(
    t,
    h: HoloFunction,
    contour: Contour | None = None,
    nodes: int = DEFAULT_NODES,
    workers: int = 1,
) -> np.ndarray:
    """``h(T)`` by trapezoid quadrature of the resolvent integral.

    Raises:
        NoValidContour: if ``contour`` does not wind once about ``sigma(T)``
            while avoiding the singularities of ``h``.
        SingularResolvent: if a node lies (numerically) on the spectrum.
    """
    t = as_matrix(t)
    eigs = eigenvalues(t)
    if contour is None:
        contour = contour_for(t, h, nodes)
    contour.validate(eigs, h)
    _check_grazing(contour, eigs)
    return quadrature(contour, h, resolvent_kernel(t), t.shape[0], workers)


def _clusters(values: np.ndarray, tol: float) -> list[int]:
    """Cluster id per value: transitive closure of ``|a - b| <= tol``."""
    n = values.size
    ids = [-1] * n
    nxt = 0
    for i in range(n):
        if ids[i] >= 0:
            continue
        ids[i] = nxt
        stack = [i]
        while stack:
            a = stack.pop()
            for b in range(n):
                if ids[b] < 0 and abs(values[a] - values[b]) <= tol:
                    ids[b] = nxt
                    stack.append(b)
        nxt += 1
    return ids


def _taylor_block(h: HoloFunction, block: np.ndarray, degree: int) -> np.ndarray:
    mu = complex(np.mean(np.diag(block)))
    coef = h.taylor(mu, degree)
    shifted = block - mu * np.eye(block.shape[0])
    out = coef[-1] * np.eye(block.shape[0], dtype=np.complex128)
    for c in coef[-2::-1]:
        out = out @ shifted + c * np.eye(block.shape[0])
    return out


def calc_triangular(t, h: HoloFunction, cluster_tol: float | None = None) -> np.ndarray:
    """``h(T)`` through the Schur form and the block Parlett recurrence.

    Eigenvalues closer than ``cluster_tol`` (default ``1e-7 * max(1, ||T||_F)``)
    are gathered into contiguous diagonal blocks and evaluated by a Taylor
    expansion about the block mean of degree ``size + 4``.

    Raises:
        SingularityHit: an eigenvalue sits on a singularity of ``h``.
        ClusterTooLarge: a cluster exceeds 8 eigenvalues and ``h`` is not a polynomial.
    """
    t = as_matrix(t)
    scale = max(1.0, fro(t))
    if cluster_tol is None:
        cluster_tol = CLUSTER_RTOL * scale
    U, R = _unordered_schur(t)
    diag = np.diag(R).copy()
    for lam in diag:
        if h.singularity_distance(lam) <= SINGULAR_RTOL * scale:
            raise SingularityHit(f"eigenvalue {lam} is a singularity of {h.source!r}")

    ids = _clusters(diag, cluster_tol)
    reps = diag.copy()

    def cluster_of(z: complex) -> int:
        return ids[int(np.argmin(np.abs(reps - z)))]

    by_cluster = OrderingTag.custom(
        lambda a, b, tol: (cluster_of(a) > cluster_of(b)) - (cluster_of(a) < cluster_of(b)),
        "cluster",
    )
    U, R = reorder_schur(U, R, by_cluster, 0.0)
    labels = [cluster_of(z) for z in np.diag(R)]
    starts = [0] + [k for k in range(1, len(labels)) if labels[k] != labels[k - 1]]
    bounds = list(zip(starts, starts[1:] + [len(labels)]))

    poly = h.polynomial
    F = np.zeros_like(R)
    for a, b in bounds:
        size = b - a
        if size == 1:
            F[a, a] = h(R[a, a])
            continue
        if poly is None and size > MAX_TAYLOR_CLUSTER:
            raise ClusterTooLarge(
                f"cluster of {size} eigenvalues near {R[a, a]} exceeds {MAX_TAYLOR_CLUSTER}"
            )
        degree = size + 4 if poly is None else max(size + 4, poly.size - 1)
        F[a:b, a:b] = _taylor_block(h, R[a:b, a:b], degree)

    nb = len(bounds)
    for d in range(1, nb):
        for i in range(nb - d):
            j = i + d
            (ia, ib), (ja, jb) = bounds[i], bounds[j]
            rhs = F[ia:ib, ia:ib] @ R[ia:ib, ja:jb] - R[ia:ib, ja:jb] @ F[ja:jb, ja:jb]
            mid = slice(ib, ja)
            rhs += F[ia:ib, mid] @ R[mid, ja:jb] - R[ia:ib, mid] @ F[mid, ja:jb]
            if ib - ia == 1 and jb - ja == 1:
                F[ia, ja] = rhs[0, 0] / (R[ia, ia] - R[ja, ja])
            else:
                F[ia:ib, ja:jb] = sla.solve_sylvester(R[ia:ib, ia:ib], -R[ja:jb, ja:jb], rhs)
    return U @ F @ dagger(U)


def calc_normal(n_matrix, h: HoloFunction) -> np.ndarray:
    """``h(N)`` for normal ``N`` by unitary diagonalization.

    Raises:
        NotNormal: if ``||N^*N - NN^*||_F > 1e-8 ||N||_F^2``.
        SingularityHit: an eigenvalue sits on a singularity of ``h``.
    """
    n_matrix = as_matrix(n_matrix)
    norm = fro(n_matrix)
    if normality_residual(n_matrix) > NORMAL_RTOL * norm**2:
        raise NotNormal("matrix is not normal")
    U, R = _unordered_schur(n_matrix)
    lam = np.diag(R)
    for z in lam:
        if h.singularity_distance(z) <= SINGULAR_RTOL * max(1.0, norm):
            raise SingularityHit(f"eigenvalue {z} is a singularity of {h.source!r}")
    return (U * h(lam)) @ dagger(U)
