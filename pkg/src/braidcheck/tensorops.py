"""Dense complex tensor-leg calculus on numpy arrays.

All operators live on V or V (x) V or V (x) V (x) V with the composite index
convention i = i1*d2 + i2 (numpy's kron ordering).  Matrices are plain
``complex128`` ndarrays; a parity vector (one bit per basis vector of V)
turns the plain operations into their graded counterparts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CMatrix = np.ndarray
ParityVector = np.ndarray

RESIDUAL_FLOOR = 1e-300


@dataclass(frozen=True)
class ResidualReport:
    """Absolute and relative Frobenius deviation of one identity check."""

    absolute: float
    relative: float
    reference_norm: float


def as_cmatrix(x) -> CMatrix:
    return np.asarray(x, dtype=np.complex128)


def assert_finite(x: CMatrix) -> CMatrix:
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite entries in matrix")
    return x


def frobenius(x: CMatrix) -> float:
    return float(np.linalg.norm(np.asarray(x)))


def residual(lhs: CMatrix, rhs: CMatrix) -> ResidualReport:
    """Compare two arrays; relative error is against the larger side."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    absolute = float(np.linalg.norm(lhs - rhs))
    reference = max(frobenius(lhs), frobenius(rhs))
    return ResidualReport(absolute, absolute / max(reference, RESIDUAL_FLOOR), reference)


def kron(x: CMatrix, y: CMatrix) -> CMatrix:
    """Kronecker product with (X compose Y)(u (x) v) = Xu (x) Yv."""
    return np.kron(as_cmatrix(x), as_cmatrix(y))


def graded_kron(x: CMatrix, y: CMatrix, parity: ParityVector) -> CMatrix:
    """Kronecker product with Koszul signs (-1)^(p(i2)(p(i1)+p(j1)))."""
    x = as_cmatrix(x)
    y = as_cmatrix(y)
    d = len(parity)
    if x.shape != (d, d) or y.shape != (d, d):
        raise ValueError("graded_kron needs square factors matching the parity vector")
    p = np.asarray(parity, dtype=int)
    # sign[i1,j1,i2] applied to X[i1,j1] * Y[i2,j2]
    sign = (-1.0) ** (p[None, None, :] * (p[:, None, None] + p[None, :, None]))
    out = np.einsum("ij,kl,ijk->ikjl", x, y, sign.astype(np.complex128))
    return out.reshape(d * d, d * d)


def swap_permutation(d: int) -> CMatrix:
    """Permutation matrix P with P(u (x) v) = v (x) u."""
    p = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            p[j * d + i, i * d + j] = 1.0
    return p


def swap_legs(x: CMatrix, d: int, parity: ParityVector | None = None) -> CMatrix:
    """Exchange the two legs of an operator: X_12 -> X_21.

    With a parity vector this is the operator-level super flip,
    x (x) y -> (-1)^(|x||y|) y (x) x for homogeneous factors, realized
    entrywise through the matrix parities |x| = p(i1)+p(j1),
    |y| = p(i2)+p(j2).  Without parity it is conjugation by the plain
    permutation P(u (x) v) = v (x) u.
    """
    x = as_cmatrix(x)
    if x.shape != (d * d, d * d):
        raise ValueError(f"expected {(d * d, d * d)} matrix, got {x.shape}")
    x4 = x.reshape(d, d, d, d)
    out = x4.transpose(1, 0, 3, 2)
    if parity is not None:
        p = np.asarray(parity, dtype=int)
        leg1 = (p[:, None, None, None] + p[None, None, :, None]) % 2
        leg2 = (p[None, :, None, None] + p[None, None, None, :]) % 2
        out = out * (-1.0) ** (leg1 * leg2)
    return out.reshape(d * d, d * d)


def graded_swap_permutation(d: int, parity: ParityVector) -> CMatrix:
    """Graded permutation matrix P(u (x) v) = (-1)^(|u||v|) v (x) u."""
    p = np.asarray(parity, dtype=int)
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            out[j * d + i, i * d + j] = (-1.0) ** (p[i] * p[j])
    return out


def embed_pair(x: CMatrix, pair: str, d: int, parity: ParityVector | None = None) -> CMatrix:
    """Embed a two-leg operator into V (x) V (x) V acting on the named legs.

    With a parity vector the 13 embedding carries the Koszul dressing of the
    middle leg, (-1)^(p(mid) * |first factor|), which realizes the graded
    tensor algebra on plain matrices; the 12 and 23 embeddings stay plain
    because the bystander dressing of a parity-even operator is trivial.
    """
    x = as_cmatrix(x)
    if x.shape != (d * d, d * d):
        raise ValueError(f"expected {(d * d, d * d)} matrix, got {x.shape}")
    eye = np.eye(d, dtype=np.complex128)
    if pair == "12":
        return np.kron(x, eye)
    if pair == "23":
        return np.kron(eye, x)
    if pair == "13":
        x4 = x.reshape(d, d, d, d)
        out = np.einsum("acbd,ef->aecbfd", x4, eye).reshape(d**3, d**3)
        if parity is not None:
            p = np.asarray(parity, dtype=int)
            o6 = out.reshape(d, d, d, d, d, d)  # [i1, i2, i3, j1, j2, j3]
            first_leg = (p[:, None, None, None, None, None] + p[None, None, None, :, None, None]) % 2
            sign = (-1.0) ** (p[None, :, None, None, None, None] * first_leg)
            out = (o6 * sign).reshape(d**3, d**3)
        return out
    raise ValueError(f"invalid leg pair {pair!r}")


def odd_leg_part(x: CMatrix, d: int, parity: ParityVector) -> CMatrix:
    """Part of a two-leg operator whose first-leg factor has odd parity."""
    p = np.asarray(parity, dtype=int)
    x4 = as_cmatrix(x).reshape(d, d, d, d)
    mask = (p[:, None, None, None] + p[None, None, :, None]) % 2 == 1
    return (x4 * mask).reshape(d * d, d * d)


def graded_realize(x: CMatrix, d: int, parity: ParityVector | None, weight: CMatrix | None = None) -> CMatrix:
    """Faithful plain-matrix realization of a parity-even two-leg operator.

    The odd (x) odd part acquires the grading operator on the second leg,
    x (x) y -> x (x) Wy, which is the isomorphism turning graded tensor
    products of supermatrices into ordinary ones.  Identity when parity is
    None.
    """
    if parity is None:
        return as_cmatrix(x)
    if weight is None:
        p = np.asarray(parity, dtype=int)
        weight = np.diag((-1.0) ** p).astype(np.complex128)
    odd = odd_leg_part(x, d, parity)
    return (as_cmatrix(x) - odd) + np.kron(np.eye(d, dtype=np.complex128), weight) @ odd


def supertranspose(x: CMatrix, parity: ParityVector) -> CMatrix:
    """(X^st)_ij = (-1)^(p_i(p_i+p_j)) X_ji."""
    x = as_cmatrix(x)
    p = np.asarray(parity, dtype=int)
    sign = (-1.0) ** (p[:, None] * (p[:, None] + p[None, :]))
    return sign * x.T


def partial_transpose(x: CMatrix, leg: int, d: int, parity: ParityVector | None = None) -> CMatrix:
    """Transpose one leg of a two-leg operator, graded when a parity is given.

    With parity, the named leg is supertransposed with the same sign rule as
    :func:`supertranspose` acting on that leg's indices only.
    """
    x = as_cmatrix(x).reshape(d, d, d, d)  # [i1, i2, j1, j2]
    if leg == 1:
        out = x.transpose(2, 1, 0, 3)
        if parity is not None:
            p = np.asarray(parity, dtype=int)
            sign = (-1.0) ** (p[:, None] * (p[:, None] + p[None, :]))  # [i1, j1]
            out = out * sign[:, None, :, None]
    elif leg == 2:
        out = x.transpose(0, 3, 2, 1)
        if parity is not None:
            p = np.asarray(parity, dtype=int)
            sign = (-1.0) ** (p[:, None] * (p[:, None] + p[None, :]))  # [i2, j2]
            out = out * sign[None, :, None, :]
    else:
        raise ValueError("leg must be 1 or 2")
    return out.reshape(d * d, d * d)


def commutator(x: CMatrix, y: CMatrix) -> CMatrix:
    return x @ y - y @ x
