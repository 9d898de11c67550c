"""Executable checks of the decomposition identities, with residuals and tolerances.

Every check returns a :class:`CheckResult` whose ``passed`` is exactly "every
residual is at most its tolerance". Residuals are relative (the normalization
is given next to each one) and tolerances are the defaults below multiplied by
``tol_scale``. Quantities that cannot meet a tight tolerance in floating point
for structural reasons, such as the raw eigenvalue radius of a rounded nilpotent
matrix, are reported under ``info`` and never decide the verdict.

The checks, in suite order:

``calculus_splitting``
    ``h(T) - h(N)`` is nilpotent and ``h`` pushes the Brown measure of ``T``
    forward to that of ``h(T)``; ``h(T)`` is computed twice, by contour
    quadrature and by the Schur route.
``multiplicative_form``
    ``T = N (I + N^{-1} Q)`` with ``N^{-1} Q`` nilpotent.
``inverse_identity``
    ``T^{-1} = N^{-1} - T^{-1} Q N^{-1}`` for ``T = N + Q``.
``commuting_product``
    ``AQ`` is nilpotent for commuting ``A``, nilpotent ``Q``, together with the
    operator-monotone inequality
    ``((AQ)^{*m} (AQ)^m)^{2/m} <= ||A||^4 (Q^{*m} Q^m)^{2/m}``.
``commuting_calculus``
    for commuting ``N`` and nilpotent ``Q``: ``h(N + Q)`` commutes with ``h(N)``
    and ``h(N + Q) - h(N) = AQ`` with ``A`` the contour integral of
    ``h(l) (l - T)^{-1} (l - N)^{-1}``.
``invariant_corner``
    for a ``T``-invariant ``p``: the block inverse formula, the spectrum as the
    union of the corner spectra, ``h(T)``-invariance of ``p`` and
    ``h(T) p = h(pTp)``.
``block_expectation``
    the block-diagonal expectation of an invariant flag preserves the spectrum,
    commutes with inversion and with ``h``.
``block_determinant``
    Fuglede-Kadison determinants of ``T - l`` and of its block-diagonal
    expectation agree, and so do the Brown measures.
"""

from __future__ import annotations

import hashlib
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decomp import Decomposition, decompose, multiplicative_form
from .errors import (
    InputError,
    NotCommuting,
    NotInvariant,
    NotNilpotent,
    SingularMatrix,
    UtformsError,
)
from .flags import (
    Flag,
    Projection,
    block_inverse,
    corner,
    embed,
    exp_onto_blocks,
    is_invariant,
)
from .generate import disk_points
from .holo.calculus import (
    calc_contour,
    calc_normal,
    calc_triangular,
    contour_for,
    quadrature,
    resolvent_kernel,
)
from .holo.contour import DEFAULT_NODES
from .holo.expr import HoloFunction, parse
from .io import dumps, finite_or_text, matrix_from_json, matrix_to_json
from .linalg import (
    as_matrix,
    cond_factor,
    eigenvalues,
    fro,
    inverse,
    match_multisets,
    singular_values,
    spectral_norm,
)
from .ordering import MODULUS, OrderingTag
from .tracial import brown_measure, fk_determinant, is_nilpotent, nilpotency_in_basis, pushforward

CHECK_ORDER = (
    "calculus_splitting",
    "multiplicative_form",
    "inverse_identity",
    "commuting_product",
    "commuting_calculus",
    "invariant_corner",
    "block_expectation",
    "block_determinant",
)

COMMUTE_RTOL = 1e-10
# fractional powers of computed Q^m lose relative accuracy beyond this size
LOEWNER_MAX_N = 16
FK_FLOOR = 1e-14


@dataclass
class CheckResult:
    """Outcome of one check.

    ``inputs`` holds the matrices the check ran on; they are serialized only for
    failed checks, so a failure can be replayed. ``outputs`` holds intermediate
    matrices for programmatic use and is never serialized.
    """

    name: str
    residuals: dict[str, float]
    tolerances: dict[str, float]
    details: str = ""
    info: dict[str, float] = field(default_factory=dict)
    skipped: bool = False
    inputs: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    outputs: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool | None:
        if self.skipped:
            return None
        return all(self.residuals[k] <= self.tolerances[k] for k in self.residuals)

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "passed" if self.passed else "failed"

    def to_json(self) -> dict:
        doc = {
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "residuals": {k: finite_or_text(v) for k, v in self.residuals.items()},
            "tolerance": {k: self.tolerances[k] for k in self.residuals},
            "info": {k: finite_or_text(v) for k, v in self.info.items()},
            "details": self.details,
        }
        if self.status == "failed":
            doc["inputs"] = {
                k: matrix_to_json(v) if isinstance(v, np.ndarray) else v
                for k, v in self.inputs.items()
            }
        return doc

    @classmethod
    def skip(cls, name: str, reason: str) -> "CheckResult":
        return cls(name, {}, {}, details=reason, skipped=True)


def _tols(tol_scale: float, **defaults: float) -> dict[str, float]:
    return {k: v * tol_scale for k, v in defaults.items()}


def _with_basis(inputs: dict, basis) -> dict:
    if basis is not None:
        inputs["basis"] = as_matrix(basis, "basis")
    return inputs


def _require_commuting(a: np.ndarray, b: np.ndarray, what: str) -> float:
    gap = fro(a @ b - b @ a)
    if gap > COMMUTE_RTOL * fro(a) * fro(b):
        raise NotCommuting(f"{what} do not commute (||[., .]||_F = {gap:.3e})")
    return gap


def _require_nilpotent(q: np.ndarray, basis=None) -> None:
    witness = is_nilpotent(q, basis=basis)
    if not witness:
        raise NotNilpotent(
            f"Q is not nilpotent (backward error {witness.backward_error:.3e} "
            f"exceeds {witness.threshold:.3e})"
        )


def _require_flag_invariant(t: np.ndarray, f: Flag) -> None:
    for j, p in enumerate(f.projections()):
        ok, residual = is_invariant(t, p)
        if not ok:
            raise NotInvariant(f"flag member {j} is not invariant (residual {residual:.3e})")


def check_calculus_splitting(
    t,
    h: HoloFunction,
    d: Decomposition | None = None,
    nodes: int = DEFAULT_NODES,
    workers: int = 1,
    tol_scale: float = 1.0,
) -> CheckResult:
    """``h(T) = h(N) + Q_h`` with ``Q_h`` nilpotent, and the Brown push-forward.

    Residuals (relative to ``max(1, ||h(T)||_F)`` unless noted):
        ``oracle_disagreement``: contour versus Schur evaluation of ``h(T)``.
        ``qh_diagonal_radius``: largest diagonal entry of ``Q_h`` in the flag basis.
        ``qh_lower_residual``: strictly lower part of ``Q_h`` in the flag basis.
        ``qh_backward_error``: distance from ``Q_h`` to a nilpotent matrix,
        relative to ``max(1, ||Q_h||_F)``.
        ``pushforward_distance``: matching distance between the Brown measure of
        ``h(T)`` and the push-forward of that of ``T``.

    Raises:
        NoValidContour, SingularityHit, ClusterTooLarge, SingularResolvent:
            from the functional calculus.
    """
    t = as_matrix(t)
    if d is None:
        d = decompose(t)
    contour = contour_for(t, h, nodes, extra_points=d.diagonal)
    h_contour = calc_contour(t, h, contour, workers=workers)
    h_t = calc_triangular(t, h)
    h_n = calc_normal(d.n_part, h)
    q_h = h_t - h_n
    scale = max(1.0, fro(h_t))
    radius, lower = nilpotency_in_basis(q_h, d.flag.basis)
    witness = is_nilpotent(q_h, basis=d.flag.basis)
    pushed = pushforward(brown_measure(t), h)
    residuals = {
        "oracle_disagreement": fro(h_contour - h_t) / scale,
        "qh_diagonal_radius": radius / scale,
        "qh_lower_residual": lower / scale,
        "qh_backward_error": witness.backward_error / max(1.0, fro(q_h)),
        "pushforward_distance": brown_measure(h_t).distance(pushed) / scale,
    }
    return CheckResult(
        "calculus_splitting",
        residuals,
        _tols(
            tol_scale,
            oracle_disagreement=1e-8,
            qh_diagonal_radius=1e-8,
            qh_lower_residual=1e-8,
            qh_backward_error=1e-8,
            pushforward_distance=1e-6,
        ),
        details=f"h = {h.pretty()}; {len(contour.circles)} circle(s), {nodes} nodes each",
        info={
            "qh_eigenvalue_radius": witness.spectral_radius,
            "qh_power_root": witness.power_root,
            "qh_norm": fro(q_h),
        },
        inputs={"T": t, "function": h.source, "nodes": nodes},
        outputs={"h_T": h_t, "h_T_contour": h_contour, "h_N": h_n, "Q_h": q_h},
    )


def check_multiplicative_form(
    t, d: Decomposition | None = None, tol_scale: float = 1.0
) -> CheckResult:
    """``T = N (I + N^{-1} Q)`` with ``N^{-1} Q`` nilpotent.

    Residuals:
        ``reconstruction``: ``||N (I + N^{-1} Q) - T||_F / ||T||_F``.
        ``diagonal_radius``, ``lower_residual``, ``backward_error``: as for
        ``Q_h``, applied to ``N^{-1} Q`` and normalized by ``max(1, ||N^{-1} Q||_F)``.

    Raises:
        ZeroInSupport: if ``N`` is not invertible.
    """
    t = as_matrix(t)
    if d is None:
        d = decompose(t)
    x = multiplicative_form(d)
    n = t.shape[0]
    scale = max(1.0, fro(x))
    radius, lower = nilpotency_in_basis(x, d.flag.basis)
    witness = is_nilpotent(x, basis=d.flag.basis)
    residuals = {
        "reconstruction": fro(d.n_part @ (np.eye(n) + x) - t) / fro(t),
        "diagonal_radius": radius / scale,
        "lower_residual": lower / scale,
        "backward_error": witness.backward_error / scale,
    }
    return CheckResult(
        "multiplicative_form",
        residuals,
        _tols(
            tol_scale, reconstruction=1e-9, diagonal_radius=1e-8, lower_residual=1e-8,
            backward_error=1e-8,
        ),
        info={"eigenvalue_radius": witness.spectral_radius, "power_root": witness.power_root},
        inputs={"T": t},
        outputs={"N_inv_Q": x},
    )


def check_inverse_identity(n_mat, q, tol_scale: float = 1.0) -> CheckResult:
    """``T^{-1} = N^{-1} - T^{-1} Q N^{-1}`` for ``T = N + Q``; no commutation is assumed.

    The residual is relative to ``||T^{-1}||_F`` and is compared against
    ``1e-9`` times the condition factor of ``T``.

    Raises:
        SingularMatrix: if ``N`` or ``T`` is singular.
    """
    n_mat = as_matrix(n_mat, "N")
    q = as_matrix(q, "Q")
    t = n_mat + q
    t_inv = inverse(t)
    n_inv = inverse(n_mat)
    rhs = n_inv - t_inv @ q @ n_inv
    cf = cond_factor(t)
    return CheckResult(
        "inverse_identity",
        {"identity": fro(t_inv - rhs) / fro(t_inv)},
        _tols(tol_scale, identity=1e-9 * cf),
        info={"cond_factor": cf},
        inputs={"N": n_mat, "Q": q},
        outputs={"T_inv": t_inv, "rhs": rhs},
    )


def _gram_power(x: np.ndarray, p: float) -> np.ndarray:
    """``(X^* X)^p`` from the SVD of ``X``, with numerically zero singular values dropped."""
    _, s, vh = np.linalg.svd(x)
    s = np.where(s <= x.shape[0] * np.finfo(float).eps * s[0], 0.0, s)
    v = vh.conj().T
    return (v * s ** (2 * p)) @ v.conj().T


def check_commuting_product(
    a, q, basis=None, loewner: bool = True, tol_scale: float = 1.0
) -> CheckResult:
    """``AQ`` is nilpotent when ``A`` commutes with the nilpotent ``Q``.

    Residuals:
        ``aq_backward_error``: distance from ``AQ`` to a nilpotent matrix,
        relative to ``max(1, ||AQ||_F)``.
        ``loewner_defect``: over ``m = 2..n``, the most negative eigenvalue of
        ``||A||^4 (Q^{*m} Q^m)^{2/m} - ((AQ)^{*m} (AQ)^m)^{2/m}``, negated and
        divided by ``||A||^4 ||Q^m||^{4/m}`` (zero when the difference is PSD).
        Omitted when ``loewner`` is false.

    ``basis``, if given, is an orthonormal basis in which ``Q`` (hence ``AQ``)
    is strictly upper triangular; it sharpens the nilpotency certificates.

    Raises:
        NotCommuting: if ``||AQ - QA||_F > 1e-10 ||A||_F ||Q||_F``.
        NotNilpotent: if ``Q`` is not nilpotent.
    """
    a = as_matrix(a, "A")
    q = as_matrix(q, "Q")
    if a.shape != q.shape:
        raise InputError("A and Q must have the same shape")
    _require_commuting(a, q, "A and Q")
    _require_nilpotent(q, basis)
    aq = a @ q
    witness = is_nilpotent(aq, basis=basis)
    a4 = spectral_norm(a) ** 4
    worst, worst_m = 0.0, 0
    q_m, aq_m = q.copy(), aq.copy()
    for m in range(2, q.shape[0] + 1 if loewner else 2):
        q_m, aq_m = q_m @ q, aq_m @ aq
        top = singular_values(q_m)[0]
        if top == 0.0:
            break
        gap = a4 * _gram_power(q_m, 2 / m) - _gram_power(aq_m, 2 / m)
        defect = -float(np.linalg.eigvalsh(gap).min()) / (a4 * top ** (4 / m))
        if defect > worst:
            worst, worst_m = defect, m
    residuals = {"aq_backward_error": witness.backward_error / max(1.0, fro(aq))}
    if loewner:
        residuals["loewner_defect"] = max(worst, 0.0)
        details = f"worst power m = {worst_m}" if worst_m else "no negative defect"
    else:
        details = "operator-monotone inequality not evaluated"
    return CheckResult(
        "commuting_product",
        residuals,
        _tols(tol_scale, aq_backward_error=1e-8, loewner_defect=1e-8),
        details=details,
        info={"aq_eigenvalue_radius": witness.spectral_radius},
        inputs=_with_basis({"A": a, "Q": q, "loewner": loewner}, basis),
        outputs={"AQ": aq},
    )


def check_commuting_calculus(
    n_mat,
    q,
    h: HoloFunction,
    basis=None,
    nodes: int = DEFAULT_NODES,
    workers: int = 1,
    tol_scale: float = 1.0,
) -> CheckResult:
    """``h(N + Q)`` and ``h(N)`` commute and differ by ``AQ`` for commuting ``N``, ``Q``.

    ``h(T)``, ``h(N)`` and ``A = (1/2 pi i) \\oint h(l) (l - T)^{-1} (l - N)^{-1} dl``
    all use the same contour, which encloses the spectra of ``T`` and ``N``.
    ``basis``, if given, is an orthonormal basis in which ``N`` is diagonal and
    ``Q`` strictly upper triangular; it sharpens the nilpotency certificates.

    Residuals:
        ``commutator``: ``||[h(T), h(N)]||_F / max(1, ||h(T)||_F ||h(N)||_F)``.
        ``difference_backward_error``: distance from ``h(T) - h(N)`` to a
        nilpotent matrix, relative to ``max(1, ||h(T) - h(N)||_F)``.
        ``factorization``: ``||h(T) - h(N) - AQ||_F / max(1, ||h(T)||_F)``.
        ``a_q_commutator``: ``||AQ - QA||_F / max(1, ||A||_F ||Q||_F)``.

    Raises:
        NotCommuting: if ``N`` and ``Q`` do not commute.
        NotNilpotent: if ``Q`` is not nilpotent.
    """
    n_mat = as_matrix(n_mat, "N")
    q = as_matrix(q, "Q")
    if n_mat.shape != q.shape:
        raise InputError("N and Q must have the same shape")
    _require_commuting(n_mat, q, "N and Q")
    _require_nilpotent(q, basis)
    t = n_mat + q
    contour = contour_for(t, h, nodes, extra_points=eigenvalues(n_mat))
    h_t = calc_contour(t, h, contour, workers=workers)
    h_n = calc_contour(n_mat, h, contour, workers=workers)
    kt, kn = resolvent_kernel(t), resolvent_kernel(n_mat)
    a = quadrature(contour, h, lambda lams: kt(lams) @ kn(lams), t.shape[0], workers)
    diff = h_t - h_n
    witness = is_nilpotent(diff, basis=basis)
    residuals = {
        "commutator": fro(h_t @ h_n - h_n @ h_t) / max(1.0, fro(h_t) * fro(h_n)),
        "difference_backward_error": witness.backward_error / max(1.0, fro(diff)),
        "factorization": fro(diff - a @ q) / max(1.0, fro(h_t)),
        "a_q_commutator": fro(a @ q - q @ a) / max(1.0, fro(a) * fro(q)),
    }
    return CheckResult(
        "commuting_calculus",
        residuals,
        _tols(
            tol_scale, commutator=1e-8, difference_backward_error=1e-8, factorization=1e-8,
            a_q_commutator=1e-8,
        ),
        details=f"h = {h.pretty()}; {len(contour.circles)} circle(s), {nodes} nodes each",
        info={"difference_eigenvalue_radius": witness.spectral_radius},
        inputs=_with_basis({"N": n_mat, "Q": q, "function": h.source, "nodes": nodes}, basis),
        outputs={"h_T": h_t, "h_N": h_n, "A": a},
    )


def check_invariant_corner(t, p: Projection, h: HoloFunction, tol_scale: float = 1.0) -> CheckResult:
    """Block-triangular facts for a ``T``-invariant projection ``p`` (neither 0 nor 1).

    Residuals:
        ``block_inverse``: block formula versus direct inverse, relative to
        ``||T^{-1}||_F``; tolerance ``1e-8`` times the condition factor of ``T``.
        ``spectra_union``: spectrum of ``T`` versus the union of the spectra of
        ``pTp`` and ``(1-p)T(1-p)``, relative to ``max(1, ||T||_F)``.
        ``ht_invariance``: ``||(1-p) h(T) p||_F / max(1, ||h(T)||_F)``.
        ``corner_calculus``: ``||h(T) p - h(pTp)||_F / max(1, ||h(T)||_F)``.

    Raises:
        InputError: if ``p`` is 0 or 1.
        NotInvariant: if ``p`` is not ``T``-invariant.
        SingularCorner: if a corner of ``T`` is singular.
    """
    t = as_matrix(t)
    if p.rank in (0, p.n):
        raise InputError("the projection must differ from 0 and 1")
    ok, leak = is_invariant(t, p)
    if not ok:
        raise NotInvariant(f"projection is not invariant (residual {leak:.3e})")
    blocked = block_inverse(t, p)
    direct = inverse(t)
    cf = cond_factor(t)
    union = np.concatenate([eigenvalues(corner(t, p)), eigenvalues(corner(t, p.complement()))])
    h_t = calc_triangular(t, h)
    h_corner = calc_triangular(corner(t, p), h)
    scale = max(1.0, fro(h_t))
    residuals = {
        "block_inverse": fro(blocked - direct) / fro(direct),
        "spectra_union": match_multisets(eigenvalues(t), union) / max(1.0, fro(t)),
        "ht_invariance": fro(p.kernel_basis.conj().T @ h_t @ p.range_basis) / scale,
        "corner_calculus": fro(h_t @ p.matrix - embed(h_corner, p)) / scale,
    }
    return CheckResult(
        "invariant_corner",
        residuals,
        _tols(
            tol_scale, block_inverse=1e-8 * cf, spectra_union=1e-6, ht_invariance=1e-8,
            corner_calculus=1e-8,
        ),
        details=f"rank of p = {p.rank}; h = {h.pretty()}",
        info={"cond_factor": cf, "invariance_leak": leak},
        inputs={
            "T": t,
            "P_basis": np.hstack([p.range_basis, p.kernel_basis]),
            "rank": p.rank,
            "function": h.source,
        },
        outputs={"block_inverse": blocked, "h_T": h_t, "h_corner": h_corner},
    )


def check_block_expectation(t, f: Flag, h: HoloFunction, tol_scale: float = 1.0) -> CheckResult:
    """The block-diagonal expectation ``E`` of an invariant flag.

    Residuals:
        ``spectra``: spectrum of ``T`` versus that of ``E(T)``, relative to
        ``max(1, ||T||_F)``.
        ``inverse_expectation``: ``||E(T^{-1}) - E(T)^{-1}||_F / ||E(T)^{-1}||_F``;
        omitted (and noted in ``details``) when ``T`` is singular.
        ``expectation_calculus``: ``||E(h(T)) - h(E(T))||_F / max(1, ||E(h(T))||_F)``.

    Raises:
        NotInvariant: if a member of ``f`` is not ``T``-invariant.
    """
    t = as_matrix(t)
    if f.n != t.shape[0]:
        raise InputError("flag and matrix dimensions differ")
    _require_flag_invariant(t, f)
    e = exp_onto_blocks(t, f)
    residuals = {"spectra": match_multisets(eigenvalues(t), eigenvalues(e)) / max(1.0, fro(t))}
    details = f"cuts {list(f.cuts)}; h = {h.pretty()}"
    try:
        e_inv = inverse(e)
        residuals["inverse_expectation"] = fro(exp_onto_blocks(inverse(t), f) - e_inv) / fro(e_inv)
    except SingularMatrix:
        details += "; T singular, inverse identity not applicable"
    lhs = exp_onto_blocks(calc_triangular(t, h), f)
    rhs = calc_triangular(e, h)
    residuals["expectation_calculus"] = fro(lhs - rhs) / max(1.0, fro(lhs))
    return CheckResult(
        "block_expectation",
        residuals,
        _tols(tol_scale, spectra=1e-6, inverse_expectation=1e-8, expectation_calculus=1e-8),
        details=details,
        inputs={"T": t, "flag_basis": f.basis, "cuts": list(f.cuts), "function": h.source},
        outputs={"E_T": e, "E_h_T": lhs, "h_E_T": rhs},
    )


def check_block_determinant(
    t, f: Flag, trials: int = 20, seed: int = 0, tol_scale: float = 1.0
) -> CheckResult:
    """Fuglede-Kadison determinants and Brown measures of ``T`` and ``E(T)`` agree.

    ``trials`` points ``l`` are drawn uniformly from the disk of radius
    ``2 ||T||`` (operator norm; radius 1 when ``T = 0``) with the given seed.

    Residuals:
        ``fk_determinant``: largest ``|D(T - l) - D(E(T) - l)| / max(D(T - l), 1e-14)``.
        ``brown_distance``: matching distance of the two Brown measures, relative
        to ``max(1, ||T||_F)``.

    Raises:
        NotInvariant: if a member of ``f`` is not ``T``-invariant.
    """
    t = as_matrix(t)
    if f.n != t.shape[0]:
        raise InputError("flag and matrix dimensions differ")
    _require_flag_invariant(t, f)
    e = exp_onto_blocks(t, f)
    radius = 2.0 * spectral_norm(t) or 1.0
    lams = disk_points(np.random.default_rng(seed), trials, radius)
    eye = np.eye(t.shape[0])
    worst = 0.0
    for lam in lams:
        d_t = fk_determinant(t - lam * eye)
        d_e = fk_determinant(e - lam * eye)
        worst = max(worst, abs(d_t - d_e) / max(d_t, FK_FLOOR))
    return CheckResult(
        "block_determinant",
        {
            "fk_determinant": worst,
            "brown_distance": brown_measure(t).distance(brown_measure(e)) / max(1.0, fro(t)),
        },
        _tols(tol_scale, fk_determinant=1e-7, brown_distance=1e-6),
        details=f"cuts {list(f.cuts)}; {trials} points, seed {seed}",
        inputs={"T": t, "flag_basis": f.basis, "cuts": list(f.cuts), "trials": trials, "seed": seed},
    )


def replay_check(doc: dict, tol_scale: float = 1.0) -> CheckResult:
    """Re-run a failed check from its serialized report entry.

    Raises:
        InputError: if ``doc`` carries no ``inputs`` (only failed checks do) or
            names an unknown check.
    """
    inputs = doc.get("inputs")
    if inputs is None:
        raise InputError(f"check {doc.get('name')!r} has no serialized inputs")
    m = {k: matrix_from_json(v) for k, v in inputs.items() if isinstance(v, dict)}
    h = parse(inputs["function"]) if "function" in inputs else None
    name = doc["name"]
    if name == "calculus_splitting":
        return check_calculus_splitting(m["T"], h, nodes=inputs["nodes"], tol_scale=tol_scale)
    if name == "multiplicative_form":
        return check_multiplicative_form(m["T"], tol_scale=tol_scale)
    if name == "inverse_identity":
        return check_inverse_identity(m["N"], m["Q"], tol_scale)
    if name == "commuting_product":
        return check_commuting_product(m["A"], m["Q"], m.get("basis"), inputs["loewner"], tol_scale)
    if name == "commuting_calculus":
        return check_commuting_calculus(
            m["N"], m["Q"], h, m.get("basis"), inputs["nodes"], tol_scale=tol_scale
        )
    if name == "invariant_corner":
        p = Projection.from_unitary(m["P_basis"], inputs["rank"])
        return check_invariant_corner(m["T"], p, h, tol_scale)
    if name == "block_expectation":
        f = Flag(m["flag_basis"], tuple(inputs["cuts"]))
        return check_block_expectation(m["T"], f, h, tol_scale)
    if name == "block_determinant":
        f = Flag(m["flag_basis"], tuple(inputs["cuts"]))
        return check_block_determinant(m["T"], f, inputs["trials"], inputs["seed"], tol_scale)
    raise InputError(f"unknown check {name!r}")


@dataclass(frozen=True)
class SuiteConfig:
    """Knobs for :func:`run_suite`.

    Attributes:
        tol_scale: multiplies every default tolerance.
        nodes: quadrature nodes per circle.
        trials: random points for the determinant check.
        workers: threads running checks concurrently; never changes the report.
        order: eigenvalue ordering of the decomposition flag.
    """

    tol_scale: float = 1.0
    nodes: int = DEFAULT_NODES
    trials: int = 20
    workers: int = 1
    order: OrderingTag = MODULUS

    def to_json(self) -> dict:
        return {
            "tol_scale": self.tol_scale,
            "nodes": self.nodes,
            "trials": self.trials,
            "order": self.order.name,
        }


@dataclass
class VerificationReport:
    fingerprint: dict
    function: str
    seed: int
    config: SuiteConfig
    checks: list[CheckResult]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """True when every check that ran passed."""
        return all(c.passed for c in self.checks if not c.skipped)

    def to_json(self, include_timings: bool = False) -> dict:
        doc = {
            "fingerprint": self.fingerprint,
            "function": self.function,
            "seed": self.seed,
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }
        if include_timings:
            doc["timings"] = self.timings
        return doc


def fingerprint(t: np.ndarray) -> dict:
    doc = matrix_to_json(t)
    return {
        "n": t.shape[0],
        "norm": fro(t),
        "sha256": hashlib.sha256(dumps(doc).encode()).hexdigest(),
    }


def check_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per (root seed, check name)."""
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def random_cuts(rng: np.random.Generator, n: int, max_blocks: int = 5) -> tuple[int, ...]:
    """Cuts of a random coarse flag with between 2 and ``max_blocks`` blocks (fewer if ``n`` is small)."""
    if n < 2:
        return (0, n)
    blocks = int(rng.integers(2, min(max_blocks, n) + 1))
    inner = sorted(int(c) for c in rng.choice(np.arange(1, n), blocks - 1, replace=False))
    return (0, *inner, n)


def commuting_pair_from(d: Decomposition) -> tuple[np.ndarray, np.ndarray]:
    """A commuting (normal, nilpotent) pair built from ``T``'s own Schur data.

    In the flag basis, consecutive diagonal entries are paired and each pair
    takes the value of its first member; the nilpotent part keeps only the
    superdiagonal entry inside each pair. Its spectrum is a subset of that of
    ``T``, so any ``h`` valid for ``T`` is valid here.
    """
    r = d.flag.to_basis(d.t)
    n = r.shape[0]
    lam = d.diagonal.copy()
    q = np.zeros_like(r)
    for i in range(0, n - 1, 2):
        lam[i + 1] = lam[i]
        q[i, i + 1] = r[i, i + 1]
    u = d.flag.basis
    return (u * lam) @ u.conj().T, d.flag.from_basis(q)


def _strict_upper_part(d: Decomposition) -> np.ndarray:
    return np.triu(d.flag.to_basis(d.q_part), 1)


def run_suite(t, h: HoloFunction, seed: int = 0, config: SuiteConfig = SuiteConfig()) -> VerificationReport:
    """Run every check on ``T`` and ``h``; checks whose preconditions fail are skipped with the reason.

    Inputs for the structural checks are derived deterministically from ``T``:
    the decomposition pair for the inverse identity, ``A = I + Q' + Q'^2/2`` with
    ``Q'`` the strictly upper flag-basis part of ``Q`` for the commuting product
    (whose operator-monotone inequality is evaluated only up to ``n = 16``),
    :func:`commuting_pair_from` for the commuting calculus, and flag members or
    random coarsenings (drawn from per-check streams of ``seed``) for the rest.
    """
    t = as_matrix(t)
    n = t.shape[0]
    s = config.tol_scale
    d = decompose(t, config.order)

    def invariant_corner():
        k = int(check_rng(seed, "invariant_corner").integers(1, n)) if n > 1 else 0
        return check_invariant_corner(t, d.flag.projection(k), h, s)

    def block_expectation():
        f = d.flag.coarsen(random_cuts(check_rng(seed, "block_expectation"), n))
        return check_block_expectation(t, f, h, s)

    def block_determinant():
        rng = check_rng(seed, "block_determinant")
        f = d.flag.coarsen(random_cuts(rng, n))
        return check_block_determinant(t, f, config.trials, int(rng.integers(2**32)), s)

    def commuting_product():
        qs = _strict_upper_part(d)
        a = np.eye(n) + qs + qs @ qs / 2
        return check_commuting_product(a, qs, np.eye(n), n <= LOEWNER_MAX_N, s)

    def commuting_calculus():
        n2, q2 = commuting_pair_from(d)
        return check_commuting_calculus(n2, q2, h, d.flag.basis, config.nodes, 1, s)

    thunks = {
        "calculus_splitting": lambda: check_calculus_splitting(t, h, d, config.nodes, 1, s),
        "multiplicative_form": lambda: check_multiplicative_form(t, d, s),
        "inverse_identity": lambda: check_inverse_identity(d.n_part, d.q_part, s),
        "commuting_product": commuting_product,
        "commuting_calculus": commuting_calculus,
        "invariant_corner": invariant_corner,
        "block_expectation": block_expectation,
        "block_determinant": block_determinant,
    }

    def run(name: str) -> tuple[CheckResult, float]:
        start = time.perf_counter()
        try:
            result = thunks[name]()
        except UtformsError as exc:
            result = CheckResult.skip(name, f"{type(exc).__name__}: {exc}")
        return result, time.perf_counter() - start

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(run, CHECK_ORDER))
    else:
        outcomes = [run(name) for name in CHECK_ORDER]
    return VerificationReport(
        fingerprint(t),
        h.source,
        seed,
        config,
        [r for r, _ in outcomes],
        {name: dt for name, (_, dt) in zip(CHECK_ORDER, outcomes)},
    )
