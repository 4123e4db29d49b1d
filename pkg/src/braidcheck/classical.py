"""Classical r-matrix data and the identities it must satisfy.

For each model the constant matrices alpha, b, c and the spectral families
r(lam), a(lam), d(lam) are assembled from the graded Casimir components, and
``check_classical`` evaluates the antisymmetry, Jacobi-type, Yang-Baxter,
sum-rule and limit identities at sampled spectral parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import ModelSpec, casimir, casimir_component
from .tensorops import (
    CMatrix,
    ResidualReport,
    commutator,
    embed_pair,
    graded_realize,
    kron,
    residual,
    swap_legs,
)


class PoleProximity(Exception):
    """Sampled spectral parameter too close to a denominator zero."""


@dataclass
class ClassicalRData:
    """Constant matrices and spectral families of one model's classical data."""

    model: ModelSpec
    alpha: CMatrix
    s: CMatrix
    b: CMatrix
    c: CMatrix
    components: dict[int, CMatrix]
    r: Callable[[complex], CMatrix]

    def a(self, lam: complex) -> CMatrix:
        return self.r(lam) + self.alpha

    def d(self, lam: complex) -> CMatrix:
        return self.r(lam) - self.alpha


def _alpha(model: ModelSpec) -> CMatrix:
    g = model.generators
    if model.id == "csg":
        return 0.5 * (kron(g["e0"], g["f0"]) - kron(g["f0"], g["e0"]))
    if model.id == "cp2":
        return 0.5 * (kron(g["E1"], g["F1"]) - kron(g["F1"], g["E1"]))
    if model.id == "su3so3":
        return 0.25 * (kron(g["e0"], g["f0"]) - kron(g["f0"], g["e0"]))
    if model.id == "gl44":
        w = model.weight
        d = model.dim
        out = np.zeros((d * d, d * d), dtype=np.complex128)
        for i in range(1, 9):
            e, f = g[f"e0_{i}"], g[f"f0_{i}"]
            out += kron(e, w @ f) - kron(f, w @ e)
        return out
    raise ValueError(model.id)


def pole_margin_classical(model_id: str, lam: complex) -> float:
    """Smallest denominator magnitude over the model's classical families."""
    if model_id == "csg":
        return min(abs(1 - lam), abs(1 + lam), abs(1 - lam**2))
    if model_id in ("cp2", "su3so3"):
        return abs(1 - lam**2)
    return min(abs(1 - lam**4), abs(1 + lam**2))


def build_classical(model: ModelSpec) -> ClassicalRData:
    n = model.grading_order
    comps = {k: casimir_component(model, k) for k in range(n)}
    s = comps[0]

    if n == 2:
        c11 = comps[1]

        def r(lam: complex) -> CMatrix:
            den = 1.0 - lam**2
            return (1.0 + lam**2) / den * s + 2.0 * lam / den * c11

    else:
        c13, c22, c31 = comps[1], comps[2], comps[3]

        def r(lam: complex) -> CMatrix:
            den = 1.0 - lam**4
            return (
                (1.0 + lam**4) / den * s
                + 2.0 * lam / den * c13
                + 2.0 * lam**2 / den * c22
                + 2.0 * lam**3 / den * c31
            )

    alpha = _alpha(model)
    return ClassicalRData(
        model=model,
        alpha=alpha,
        s=s,
        b=-s - alpha,
        c=-s + alpha,
        components=comps,
        r=r,
    )


CLASSICAL_FAMILIES = ("antisymmetry", "jacobi", "cybe_bc", "sum_rule", "limits")


def classical_residual(data: ClassicalRData, family: str, lam: complex, mu: complex) -> ResidualReport:
    """Residual of one classical identity family at one sample point."""
    d = data.model.dim
    par = data.model.kron_parity
    w = data.model.weight
    sw = lambda x: swap_legs(x, d, par)
    rz = lambda x: graded_realize(x, d, par, w)
    if family == "antisymmetry":
        parts = [
            residual(data.a(lam), -sw(data.a(1.0 / lam))),
            residual(data.d(lam), -sw(data.d(1.0 / lam))),
            residual(data.b, sw(data.c)),
            residual(data.alpha, -sw(data.alpha)),
        ]
    elif family == "jacobi":
        parts = [
            _mixed_jacobi(rz(data.a(lam / mu)), rz(data.a(lam)), rz(data.a(mu)), d, par),
            _mixed_jacobi(rz(data.d(lam / mu)), rz(data.d(lam)), rz(data.d(mu)), d, par),
            _mixed_jacobi(rz(data.a(lam)), rz(data.c), rz(data.c), d, par),
            _mixed_jacobi(rz(data.d(lam)), rz(data.b), rz(data.b), d, par),
        ]
    elif family == "cybe_bc":
        parts = [
            _mixed_jacobi(rz(data.b), rz(data.b), rz(data.b), d, par),
            _mixed_jacobi(rz(data.c), rz(data.c), rz(data.c), d, par),
        ]
    elif family == "sum_rule":
        parts = [residual(data.a(lam) + data.b, data.c + data.d(lam))]
    elif family == "limits":
        lo, hi = 1e-6, 1e6
        parts = [
            residual(data.a(lo), -data.b),
            residual(data.a(hi), data.c),
            residual(data.d(lo), -data.c),
            residual(data.d(hi), data.b),
            residual(data.r(lo), data.s),
            residual(data.r(hi), -data.s),
        ]
    else:
        raise ValueError(f"unknown identity family {family!r}")
    worst = max(parts, key=lambda rep: rep.relative)
    return worst


def _mixed_jacobi(x12: CMatrix, y13: CMatrix, z23: CMatrix, d: int, parity=None) -> ResidualReport:
    """Residual of [X_12, Y_13] + [X_12, Z_23] + [Y_13, Z_23] = 0."""
    a = embed_pair(x12, "12", d)
    b = embed_pair(y13, "13", d, parity)
    c = embed_pair(z23, "23", d)
    lhs = commutator(a, b) + commutator(a, c) + commutator(b, c)
    scale = max(
        np.linalg.norm(a) * np.linalg.norm(b),
        np.linalg.norm(a) * np.linalg.norm(c),
        np.linalg.norm(b) * np.linalg.norm(c),
        1e-300,
    )
    absolute = float(np.linalg.norm(lhs))
    return ResidualReport(absolute, absolute / scale, float(scale))


def check_classical(
    data: ClassicalRData,
    samples: list[tuple[complex, complex]],
    tol: float = 1e-11,
    tol_limits: float = 1e-4,
) -> dict[str, tuple[float, bool]]:
    """Worst relative residual and verdict per identity family.

    Samples must avoid denominator zeros; a sample within 1e-3 of a pole
    raises :class:`PoleProximity`.
    """
    out: dict[str, tuple[float, bool]] = {}
    for lam, mu in samples:
        for x in (lam, mu, lam / mu):
            if pole_margin_classical(data.model.id, x) < 1e-3:
                raise PoleProximity(f"sample {x} too close to a pole")
    for family in CLASSICAL_FAMILIES:
        worst = 0.0
        for lam, mu in samples:
            rep = classical_residual(data, family, lam, mu)
            worst = max(worst, rep.relative)
        bound = tol_limits if family == "limits" else tol
        out[family] = (worst, worst < bound)
    return out
