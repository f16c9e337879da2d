"""Covariance-based evaluation of the Gaussian secrecy-rate terms.

This module never touches the printed closed forms.  It assembles the exact
joint covariance of the transmit signals and channel outputs implied by the
linear channel equations, then evaluates every information term through
log-determinants of principal submatrices:

    I(A; B | C) = 1/2 * log2( det S_AC * det S_BC / (det S_C * det S_ABC) )

with det of the empty set equal to 1.  Agreement with the closed forms is
checked term by term in the tests and by the audit tooling, which is the
point: the two routes share no algebra.

All determinant and inverse computations add a relative regularization floor
``REG_FLOOR`` times the largest diagonal entry of the full covariance to the
diagonal, which makes degenerate inputs (zero powers, fully correlated
inputs) evaluate to their natural limits instead of failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    PSD_SLACK,
    CorrelationTriple,
    DomainError,
    RateBreakdown,
    combine_breakdown,
    correlation_determinant,
)
from .gaussian import GeneralGaussianParams, OrthogonalGaussianParams

__all__ = [
    "JointCovariance",
    "build_joint_covariance_general",
    "build_joint_covariance_orthogonal",
    "mi_gaussian",
    "schur_conditional_variance",
    "rate_general_oracle",
    "rate_orthogonal_oracle",
    "general_rate_terms_grid",
    "GENERAL_LABELS",
    "ORTHOGONAL_LABELS",
]

#: Relative diagonal regularization applied before determinants and inverses.
REG_FLOOR = 1e-12

# Correlation-matrix determinant below which the vectorized factored route
# hands a point over to the slogdet fallback; see general_rate_terms_grid.
_FACTORED_MIN_RHO_DET = 1e-6

#: Negative mutual-information round-off below this magnitude is truncated to 0.
NEG_TOL = 1e-9

GENERAL_LABELS = ("X_l", "X_1e", "X_2e", "Y_l", "Y_1e", "Y_2e")
ORTHOGONAL_LABELS = (
    "X_l",
    "X_1e",
    "X_2e",
    "Y_l",
    "Y_1e_m",
    "Y_1e_c",
    "Y_2e_m",
    "Y_2e_c",
)


@dataclass(frozen=True)
class JointCovariance:
    """A labelled joint covariance matrix of transmit signals and outputs.

    The matrix must be symmetric and positive semidefinite up to an
    eigenvalue floor of 1e-10 relative to its largest diagonal entry.
    """

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        n = len(self.labels)
        if m.shape != (n, n):
            raise DomainError(f"covariance shape {m.shape} does not match {n} labels")
        scale = max(float(np.max(np.abs(np.diag(m)))), 1.0)
        if float(np.max(np.abs(m - m.T))) > 1e-12 * scale:
            raise DomainError("covariance matrix is not symmetric")
        if float(np.min(np.linalg.eigvalsh(m))) < -1e-10 * scale:
            raise DomainError("covariance matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown variable label {label!r}") from None


def _input_covariance(
    P_l: float, P_1e: float, P_2e: float, rho: CorrelationTriple
) -> np.ndarray:
    a1 = rho.rho_1 * math.sqrt(P_l * P_1e)
    a2 = rho.rho_2 * math.sqrt(P_l * P_2e)
    a12 = rho.rho_12 * math.sqrt(P_1e * P_2e)
    return np.array(
        [
            [P_l, a1, a2],
            [a1, P_1e, a12],
            [a2, a12, P_2e],
        ]
    )


def _assemble(
    labels: tuple[str, ...],
    inputs_cov: np.ndarray,
    gain_rows: np.ndarray,
    noise_diag: np.ndarray,
) -> JointCovariance:
    # Outputs are gain_rows @ inputs + independent noise, so the joint
    # covariance is the usual linear-map block matrix.
    cross = inputs_cov @ gain_rows.T
    out = gain_rows @ cross + np.diag(noise_diag)
    top = np.hstack([inputs_cov, cross])
    bottom = np.hstack([cross.T, out])
    return JointCovariance(labels, np.vstack([top, bottom]))


def build_joint_covariance_general(
    p: GeneralGaussianParams, rho: CorrelationTriple
) -> JointCovariance:
    """Joint covariance of (X_l, X_1e, X_2e, Y_l, Y_1e, Y_2e), shared band.

    Output equations: the legitimate receiver hears everything, each
    eavesdropper hears the legitimate signal and the other eavesdropper.
    """
    gains = np.array(
        [
            [p.h_l, p.h_1e_l, p.h_2e_l],
            [p.h_l_1e, 0.0, p.h_2e_1e],
            [p.h_l_2e, p.h_1e_2e, 0.0],
        ]
    )
    noise = np.array([p.N_l, p.N_1e, p.N_2e])
    return _assemble(
        GENERAL_LABELS, _input_covariance(p.P_l, p.P_1e, p.P_2e, rho), gains, noise
    )


def build_joint_covariance_orthogonal(
    p: OrthogonalGaussianParams, rho: CorrelationTriple | None = None
) -> JointCovariance:
    """Joint covariance of the orthogonal model's eight variables.

    Variable order: X_l, X_1e, X_2e, Y_l, Y_1e_m, Y_1e_c, Y_2e_m, Y_2e_c.
    ``rho`` correlates the transmit signals; the default is independent
    codebooks, which is the input law the orthogonal closed form assumes.
    """
    if rho is None:
        rho = CorrelationTriple(0.0, 0.0, 0.0)
    gains = np.array(
        [
            [p.h_l, 0.0, 0.0],
            [p.h_1m, 0.0, 0.0],
            [0.0, 0.0, p.h_1c],
            [p.h_2m, 0.0, 0.0],
            [0.0, p.h_2c, 0.0],
        ]
    )
    noise = np.array([p.N_l, p.N_1e_m, p.N_1e_c, p.N_2e_m, p.N_2e_c])
    return _assemble(
        ORTHOGONAL_LABELS, _input_covariance(p.P_l, p.P_1e, p.P_2e, rho), gains, noise
    )


def _resolve(cov: JointCovariance, sel: Iterable[str | int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in sel:
        i = cov.index(s) if isinstance(s, str) else int(s)
        if not 0 <= i < len(cov.labels):
            raise DomainError(f"variable index {i} out of range")
        if i in out:
            raise DomainError(f"variable {cov.labels[i]!r} listed twice")
        out.append(i)
    return tuple(out)


def _logdet(cov: JointCovariance, idx: tuple[int, ...], eps: float) -> float:
    if not idx:
        return 0.0
    sub = cov.matrix[np.ix_(idx, idx)] + eps * np.eye(len(idx))
    sign, ld = np.linalg.slogdet(sub)
    if sign <= 0.0:
        raise DomainError(
            "singular covariance beyond the regularization floor for "
            f"variables {[cov.labels[i] for i in idx]}"
        )
    return float(ld)


def mi_gaussian(
    cov: JointCovariance,
    A: Sequence[str | int],
    B: Sequence[str | int],
    C: Sequence[str | int] = (),
) -> float:
    """Conditional mutual information I(A; B | C) in bits.

    Parameters
    ----------
    cov : JointCovariance
        Joint covariance of all variables in play.
    A, B, C : sequences of labels or indices
        Pairwise disjoint variable sets; C may be empty.

    Returns
    -------
    float
        1/2 * log2( det S_AC * det S_BC / (det S_C * det S_ABC) ), truncated
        to 0 when round-off drives it slightly negative.  A value below
        -NEG_TOL raises, since the identity cannot produce it.
    """
    value = _cmi_value(cov, A, B, C)
    if value < -NEG_TOL:
        raise DomainError(f"mutual information evaluated to {value!r}; "
                          "covariance is inconsistent")
    return value if value > 0.0 else 0.0


def _cmi_value(
    cov: JointCovariance,
    A: Sequence[str | int],
    B: Sequence[str | int],
    C: Sequence[str | int] = (),
) -> float:
    """Raw determinant-identity value, before the sign policy is applied."""
    ia, ib, ic = _resolve(cov, A), _resolve(cov, B), _resolve(cov, C)
    if set(ia) & set(ib) or set(ia) & set(ic) or set(ib) & set(ic):
        raise DomainError("mutual-information variable sets must be disjoint")
    scale = float(np.max(np.diag(cov.matrix)))
    eps = REG_FLOOR * (scale if scale > 0.0 else 1.0)
    ld_ac = _logdet(cov, ia + ic, eps)
    ld_bc = _logdet(cov, ib + ic, eps)
    ld_c = _logdet(cov, ic, eps)
    ld_abc = _logdet(cov, ia + ib + ic, eps)
    return 0.5 * (ld_ac + ld_bc - ld_c - ld_abc) / math.log(2.0)


def schur_conditional_variance(
    cov: JointCovariance, target: str | int, given: Sequence[str | int]
) -> float:
    """Residual variance of ``target`` after linear estimation from ``given``.

    Computes S_tt - S_tg (S_gg)^-1 S_gt with the regularized S_gg.  The
    result is clipped at 0; it can only dip below through round-off.
    """
    (it,) = _resolve(cov, [target])
    ig = _resolve(cov, given)
    if it in ig:
        raise DomainError("target variable cannot appear in the conditioning set")
    tt = float(cov.matrix[it, it])
    if not ig:
        return tt
    scale = float(np.max(np.diag(cov.matrix)))
    eps = REG_FLOOR * (scale if scale > 0.0 else 1.0)
    gg = cov.matrix[np.ix_(ig, ig)] + eps * np.eye(len(ig))
    tg = cov.matrix[it, list(ig)]
    try:
        v = tt - float(tg @ np.linalg.solve(gg, tg))
    except np.linalg.LinAlgError as exc:
        raise DomainError("conditioning covariance is singular beyond the "
                          "regularization floor") from exc
    return v if v > 0.0 else 0.0


def rate_general_oracle(
    p: GeneralGaussianParams, rho: CorrelationTriple
) -> RateBreakdown:
    """Shared-band secrecy rate evaluated purely from the joint covariance.

    main          I(X_l; Y_l)
    joint leak    I(X_l; Y_1e, Y_2e | X_1e, X_2e)
    single leak   I(X_l, X_1e, X_2e; Y_je) for each j

    Total on degenerate parameters (zero powers, |rho_12| = 1): the
    regularization floor turns them into the correct limits.
    """
    cov = build_joint_covariance_general(p, rho)
    main = mi_gaussian(cov, ["X_l"], ["Y_l"])
    leak_joint = mi_gaussian(cov, ["X_l"], ["Y_1e", "Y_2e"], ["X_1e", "X_2e"])
    leak_1 = mi_gaussian(cov, ["X_l", "X_1e", "X_2e"], ["Y_1e"])
    leak_2 = mi_gaussian(cov, ["X_l", "X_1e", "X_2e"], ["Y_2e"])
    return combine_breakdown(main, leak_joint, leak_1, leak_2)


def rate_orthogonal_oracle(p: OrthogonalGaussianParams) -> RateBreakdown:
    """Orthogonal-model secrecy rate from the eight-variable covariance.

    Single-eavesdropper leakage pairs each eavesdropper's listening output
    with its cross-band output.
    """
    cov = build_joint_covariance_orthogonal(p)
    main = mi_gaussian(cov, ["X_l"], ["Y_l"])
    leak_joint = mi_gaussian(
        cov,
        ["X_l"],
        ["Y_1e_m", "Y_1e_c", "Y_2e_m", "Y_2e_c"],
        ["X_1e", "X_2e"],
    )
    leak_1 = mi_gaussian(cov, ["X_l", "X_1e", "X_2e"], ["Y_1e_m", "Y_1e_c"])
    leak_2 = mi_gaussian(cov, ["X_l", "X_1e", "X_2e"], ["Y_2e_m", "Y_2e_c"])
    return combine_breakdown(main, leak_joint, leak_1, leak_2)


# ---------------------------------------------------------------------------
# Vectorized evaluation over correlation grids


def general_rate_terms_grid(
    p: GeneralGaussianParams,
    rho_1: np.ndarray,
    rho_2: np.ndarray,
    rho_12: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized covariance evaluation of the four shared-band rate terms.

    Takes equally shaped arrays of correlation values and returns arrays
    (main, leak_joint, leak_single_1, leak_single_2).  The arithmetic mirrors
    :func:`mi_gaussian` on :func:`build_joint_covariance_general` exactly,
    including the placement of the regularization floor; the determinants of
    the regularized submatrices are just expanded through exact Schur
    factorizations instead of LU decompositions.  The tests pin this
    equivalence pointwise.

    Entries whose correlation triple is not positive semidefinite do not
    describe a covariance; those come back as NaN.
    """
    r1 = np.asarray(rho_1, dtype=float)
    r2 = np.asarray(rho_2, dtype=float)
    r12 = np.asarray(rho_12, dtype=float)

    sp_l1 = math.sqrt(p.P_l * p.P_1e)
    sp_l2 = math.sqrt(p.P_l * p.P_2e)
    sp_12 = math.sqrt(p.P_1e * p.P_2e)
    a1 = r1 * sp_l1
    a2 = r2 * sp_l2
    a12 = r12 * sp_12

    g1, g2 = p.h_1e_l, p.h_2e_l
    var_yl = (
        p.h_l ** 2 * p.P_l
        + g1 ** 2 * p.P_1e
        + g2 ** 2 * p.P_2e
        + 2.0 * p.h_l * g1 * a1
        + 2.0 * p.h_l * g2 * a2
        + 2.0 * g1 * g2 * a12
        + p.N_l
    )
    cov_yl_xl = p.h_l * p.P_l + g1 * a1 + g2 * a2

    b1, c1 = p.h_l_1e, p.h_2e_1e  # Y_1e = b1 X_l + c1 X_2e + Z_1e
    b2, c2 = p.h_l_2e, p.h_1e_2e  # Y_2e = b2 X_l + c2 X_1e + Z_2e
    var_y1 = b1 ** 2 * p.P_l + c1 ** 2 * p.P_2e + 2.0 * b1 * c1 * a2 + p.N_1e
    var_y2 = b2 ** 2 * p.P_l + c2 ** 2 * p.P_1e + 2.0 * b2 * c2 * a1 + p.N_2e
    cov_y1_y2 = b1 * b2 * p.P_l + b1 * c2 * a1 + c1 * b2 * a2 + c1 * c2 * a12

    # Cross-covariances of each eavesdropper output with the three inputs.
    u1_xl = b1 * p.P_l + c1 * a2
    u1_x1 = b1 * a1 + c1 * a12
    u1_x2 = b1 * a2 + c1 * p.P_2e
    u2_xl = b2 * p.P_l + c2 * a1
    u2_x1 = b2 * a1 + c2 * p.P_1e
    u2_x2 = b2 * a2 + c2 * a12

    scale = np.maximum.reduce(
        [
            np.broadcast_to(np.float64(max(p.P_l, p.P_1e, p.P_2e)), var_yl.shape).copy(),
            var_yl,
            var_y1,
            var_y2,
        ]
    )
    eps = REG_FLOOR * np.where(scale > 0.0, scale, 1.0)

    d_xl = p.P_l + eps
    d_x1 = p.P_1e + eps
    d_x2 = p.P_2e + eps
    d_yl = var_yl + eps
    d_y1 = var_y1 + eps
    d_y2 = var_y2 + eps

    tiny = 1e-300

    # main = I(X_l; Y_l): dets of sizes 1, 1 and 2.
    det2 = d_xl * d_yl - cov_yl_xl ** 2
    main = 0.5 * np.log2(np.maximum(d_xl * d_yl, tiny) / np.maximum(det2, tiny))

    # Regularized input-block determinant and adjugate (symmetric 3x3).
    adj_11 = d_x1 * d_x2 - a12 ** 2
    adj_12 = a2 * a12 - a1 * d_x2
    adj_13 = a1 * a12 - a2 * d_x1
    adj_22 = d_xl * d_x2 - a2 ** 2
    adj_23 = a1 * a2 - d_xl * a12
    adj_33 = d_xl * d_x1 - a1 ** 2
    det_s3 = d_xl * adj_11 + a1 * adj_12 + a2 * adj_13

    def quad(uxl, ux1, ux2, vxl, vx1, vx2):
        # u^T adj(S) v for the symmetric regularized input block.
        return (
            adj_11 * uxl * vxl
            + adj_22 * ux1 * vx1
            + adj_33 * ux2 * vx2
            + adj_12 * (uxl * vx1 + ux1 * vxl)
            + adj_13 * (uxl * vx2 + ux2 * vxl)
            + adj_23 * (ux1 * vx2 + ux2 * vx1)
        )

    # Single-eavesdropper leakage: I(X_all; Y_je) with det S_ABC factored as
    # det S3 * (d_yj - u^T S3^-1 u).
    q11 = quad(u1_xl, u1_x1, u1_x2, u1_xl, u1_x1, u1_x2)
    resid_1 = d_y1 - q11 / np.maximum(det_s3, tiny)
    leak_s1 = 0.5 * np.log2(np.maximum(d_y1, tiny) / np.maximum(resid_1, tiny))
    q22 = quad(u2_xl, u2_x1, u2_x2, u2_xl, u2_x1, u2_x2)
    resid_2 = d_y2 - q22 / np.maximum(det_s3, tiny)
    leak_s2 = 0.5 * np.log2(np.maximum(d_y2, tiny) / np.maximum(resid_2, tiny))

    # Joint leakage I(X_l; Y_1e, Y_2e | X_1e, X_2e):
    #   det S_AC = det_s3, det S_C = dc, and the 4x4 / 5x5 determinants are
    #   factored through the 2x2 conditional blocks of (Y_1e, Y_2e).
    dc = d_x1 * d_x2 - a12 ** 2
    dc_safe = np.maximum(dc, tiny)
    # Conditional on (X_1e, X_2e): K1 = S_B - G C^-1 G^T.
    inv_c_11 = d_x2 / dc_safe
    inv_c_22 = d_x1 / dc_safe
    inv_c_12 = -a12 / dc_safe
    k1_11 = d_y1 - (
        u1_x1 * (inv_c_11 * u1_x1 + inv_c_12 * u1_x2)
        + u1_x2 * (inv_c_12 * u1_x1 + inv_c_22 * u1_x2)
    )
    k1_22 = d_y2 - (
        u2_x1 * (inv_c_11 * u2_x1 + inv_c_12 * u2_x2)
        + u2_x2 * (inv_c_12 * u2_x1 + inv_c_22 * u2_x2)
    )
    k1_12 = cov_y1_y2 - (
        u1_x1 * (inv_c_11 * u2_x1 + inv_c_12 * u2_x2)
        + u1_x2 * (inv_c_12 * u2_x1 + inv_c_22 * u2_x2)
    )
    det_k1 = k1_11 * k1_22 - k1_12 ** 2
    # Conditional on all three inputs: K2 = S_B - U S3^-1 U^T.
    q12 = quad(u1_xl, u1_x1, u1_x2, u2_xl, u2_x1, u2_x2)
    det_s3_safe = np.maximum(det_s3, tiny)
    k2_11 = d_y1 - q11 / det_s3_safe
    k2_22 = d_y2 - q22 / det_s3_safe
    k2_12 = cov_y1_y2 - q12 / det_s3_safe
    with np.errstate(over="ignore", invalid="ignore"):
        det_k2 = k2_11 * k2_22 - k2_12 ** 2
        leak_joint = 0.5 * np.log2(
            np.maximum(det_k1, tiny) / np.maximum(det_k2, tiny)
        )

    zero = np.float64(0.0)
    main = np.maximum(main, zero)
    leak_joint = np.maximum(leak_joint, zero)
    leak_s1 = np.maximum(leak_s1, zero)
    leak_s2 = np.maximum(leak_s2, zero)

    # Near the boundary of the valid correlation set the cofactor expansions
    # above lose all significance (true determinants shrink to the
    # regularization floor while the summands stay order one), and the
    # garbage can come out finite.  Those points, plus anything non-finite,
    # go through the slogdet route instead.  With condition numbers near
    # 1/REG_FLOOR the identity cannot be certified to NEG_TOL there, so
    # small negative values are clamped rather than raised.
    det_rho = (
        1.0
        + 2.0 * r1 * r2 * r12
        - r1 * r1
        - r2 * r2
        - r12 * r12
    )
    bad = (det_rho < _FACTORED_MIN_RHO_DET) | ~(
        np.isfinite(main)
        & np.isfinite(leak_joint)
        & np.isfinite(leak_s1)
        & np.isfinite(leak_s2)
    )
    if np.any(bad):
        for i in np.flatnonzero(bad.ravel()):
            t1 = float(r1.flat[i])
            t2 = float(r2.flat[i])
            t12 = float(r12.flat[i])
            if (
                max(abs(t1), abs(t2), abs(t12)) > 1.0
                or correlation_determinant(t1, t2, t12) < -PSD_SLACK
            ):
                # Not a covariance at all; the caller is expected to mask
                # such points out, so flag them instead of guessing.
                main.flat[i] = math.nan
                leak_joint.flat[i] = math.nan
                leak_s1.flat[i] = math.nan
                leak_s2.flat[i] = math.nan
                continue
            rho = CorrelationTriple(t1, t2, t12)
            cov = build_joint_covariance_general(p, rho)
            inputs = ["X_l", "X_1e", "X_2e"]
            main.flat[i] = max(0.0, _cmi_value(cov, ["X_l"], ["Y_l"]))
            leak_joint.flat[i] = max(
                0.0,
                _cmi_value(cov, ["X_l"], ["Y_1e", "Y_2e"], ["X_1e", "X_2e"]),
            )
            leak_s1.flat[i] = max(0.0, _cmi_value(cov, inputs, ["Y_1e"]))
            leak_s2.flat[i] = max(0.0, _cmi_value(cov, inputs, ["Y_2e"]))
    return main, leak_joint, leak_s1, leak_s2
