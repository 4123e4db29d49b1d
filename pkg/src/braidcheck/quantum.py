"""Quantum R-matrices of the four models.

Everything is parametrized by p with q = p**12, so that every fractional
power of q appearing in the printed formulas (q^(1/2), q^(1/3), q^(1/4),
q^(1/6), q^(7/12), q^(3/4), ...) is an integer power of p and carries no
branch ambiguity.  Cartan exponentials q^M act on diagonal M entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import ClassicalRData, PoleProximity, build_classical
from .models import ModelSpec, build_model
from .tensorops import CMatrix, graded_realize, kron, partial_transpose, swap_legs


class SingularMatrix(Exception):
    """A required inverse does not exist at the sampled point."""


@dataclass(frozen=True)
class ParamPoint:
    """One sampled (p, lambda, mu) triple with q = p**12."""

    p: complex
    lam: complex
    mu: complex = 1.0

    @property
    def q(self) -> complex:
        return self.p**12

    @property
    def nu(self) -> complex:
        return self.lam / self.mu

    def q_power(self, twelfths: int) -> complex:
        """q**(twelfths/12) evaluated branch-free as p**twelfths."""
        return self.p**twelfths


def _inv(x: CMatrix) -> CMatrix:
    try:
        out = np.linalg.inv(x)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    if not np.all(np.isfinite(out)):
        raise SingularMatrix("inverse has non-finite entries")
    return out


def _qpow_diag(p: complex, exponent: CMatrix) -> CMatrix:
    """q**M for diagonal M with entries in (1/12)Z, as integer powers of p."""
    diag = np.diagonal(exponent)
    off = exponent - np.diag(diag)
    if np.linalg.norm(off) > 1e-12:
        raise ValueError("Cartan exponent matrix must be diagonal")
    twelfths = 12.0 * np.real(diag)
    ints = np.round(twelfths).astype(int)
    if np.max(np.abs(twelfths - ints)) > 1e-9:
        raise ValueError("exponents are not multiples of 1/12")
    return np.diag(np.asarray(p, dtype=np.complex128) ** ints)


class QuantumRData:
    """Evaluators for one model's quantum R-matrices.

    Subclasses provide B, C, A, D, gamma and gamma_tilde; the factorization
    accessors Z, R and the tilde family are shared.
    """

    def __init__(self, model: ModelSpec, classical: ClassicalRData | None = None):
        self.model = model
        self.classical = classical if classical is not None else build_classical(model)
        self.dim = model.dim

    # -- interface implemented per model ------------------------------------
    def B(self, p: complex) -> CMatrix:
        raise NotImplementedError

    def A(self, p: complex, lam: complex) -> CMatrix:
        raise NotImplementedError

    def D(self, p: complex, lam: complex) -> CMatrix:
        raise NotImplementedError

    def gamma(self, p: complex) -> CMatrix:
        return np.eye(self.dim, dtype=np.complex128)

    def gamma_tilde(self, p: complex) -> CMatrix:
        raise NotImplementedError

    def pole_margin(self, p: complex, x: complex) -> float:
        """Smallest denominator magnitude over this model's evaluators at x."""
        raise NotImplementedError

    # -- shared structure ----------------------------------------------------
    def C(self, p: complex) -> CMatrix:
        return swap_legs(self.B(p), self.dim, self.model.kron_parity)

    def B_inv(self, p: complex) -> CMatrix:
        return _inv(self.B(p))

    def C_inv(self, p: complex) -> CMatrix:
        return _inv(self.C(p))

    def Z(self, p: complex) -> CMatrix:
        return self.B(p)

    def R(self, p: complex, lam: complex) -> CMatrix:
        return self.D(p, lam)

    def realize(self, x: CMatrix) -> CMatrix:
        """Plain-matrix realization used when composing identities.

        No-op for the ungraded models; for the superalgebra model the
        odd (x) odd part picks up the grading operator on its second leg so
        that plain matrix products implement the graded tensor algebra.
        """
        return graded_realize(x, self.dim, self.model.kron_parity, self.model.weight)

    def swapped(self, x: CMatrix) -> CMatrix:
        """Realized form of the leg-exchanged operator x_21."""
        return self.realize(swap_legs(x, self.dim, self.model.kron_parity))

    def A_real(self, p: complex, lam: complex) -> CMatrix:
        return self.realize(self.A(p, lam))

    def D_real(self, p: complex, lam: complex) -> CMatrix:
        return self.realize(self.D(p, lam))

    def tilde_family(
        self, p: complex, lam: complex
    ) -> tuple[CMatrix, CMatrix, CMatrix, CMatrix]:
        """The matrices entering the trace-commutation identity.

        A-tilde = (A^{t1 t2})^{-1}, B-tilde = [(B^{t1})^{-1}]^{t2},
        C-tilde = [(C^{t2})^{-1}]^{t1}, D-tilde = (D^{t1 t2})^{-1}, where the
        leg transpose is the supertranspose for the graded model and A, D
        enter through their realized forms.
        """
        d = self.dim
        par = self.model.kron_parity
        t1 = lambda x: partial_transpose(x, 1, d, par)
        t2 = lambda x: partial_transpose(x, 2, d, par)
        a_t = t2(t1(self.A_real(p, lam)))
        d_t = t2(t1(self.D_real(p, lam)))
        return (
            _inv(a_t),
            t2(_inv(t1(self.B(p)))),
            t1(_inv(t2(self.C(p)))),
            _inv(d_t),
        )


class CsgQuantum(QuantumRData):
    """su(2)+su(2) flip model: block-diagonal delta-weighted R-matrices."""

    def __init__(self, model: ModelSpec):
        super().__init__(model)
        g = model.generators
        self._hh = kron(g["h0"], g["h0"])
        self._ef = kron(g["e0"], g["f0"])
        self._fe = kron(g["f0"], g["e0"])
        self._p11 = kron(g["P1"], g["P1"]) + kron(g["P2"], g["P2"])
        self._p12 = kron(g["P1"], g["P2"])
        self._p21 = kron(g["P2"], g["P1"])

    def B(self, p: complex) -> CMatrix:
        q = p**12
        return _qpow_diag(p, -0.25 * self._hh) + p**-3 * (1 - q) * self._ef

    def C(self, p: complex) -> CMatrix:
        q = p**12
        return _qpow_diag(p, -0.25 * self._hh) + p**-3 * (1 - q) * self._fe

    def delta(self, p: complex, lam: complex) -> CMatrix:
        q = p**12
        sq = p**6
        return (
            sq / (sq - lam) * self._p11
            + q / (q + lam) * self._p12
            + 1.0 / (1.0 + lam) * self._p21
        )

    def A(self, p: complex, lam: complex) -> CMatrix:
        dl = self.delta(p, lam)
        eye = np.eye(16, dtype=np.complex128)
        return dl @ self.B_inv(p) + (eye - dl) @ self.C(p)

    def D(self, p: complex, lam: complex) -> CMatrix:
        dl = self.delta(p, lam)
        eye = np.eye(16, dtype=np.complex128)
        return dl @ self.C_inv(p) + (eye - dl) @ self.B(p)

    def K(self, p: complex, lam: complex) -> CMatrix:
        """Diagonal matrix whose square root relates A, D to unitary forms."""
        d1 = self.delta(p, lam)
        d2 = self.delta(p, p**12 * lam)
        d3 = self.delta(p, p**-6 * lam)
        d4 = self.delta(p, p**18 * lam)
        return d1 @ d2 @ _inv(d3) @ _inv(d4)

    def K_inv_sqrt(self, p: complex, lam: complex) -> CMatrix:
        """Entrywise principal inverse square root of the diagonal K.

        Entries whose square root falls onto (or too near) the branch cut are
        rejected: the caller must resample.
        """
        kd = np.diagonal(self.K(p, lam))
        roots = np.sqrt(kd)
        if np.any(np.real(roots) <= 0.05 * np.abs(roots)):
            raise PoleProximity("K entry too close to the negative real axis")
        return np.diag(1.0 / roots)

    def A_hat(self, p: complex, lam: complex) -> CMatrix:
        return self.K_inv_sqrt(p, lam) @ self.A(p, lam)

    def D_hat(self, p: complex, lam: complex) -> CMatrix:
        return self.K_inv_sqrt(p, lam) @ self.D(p, lam)

    def gamma_tilde(self, p: complex) -> CMatrix:
        q = p**12
        return np.diag(np.array([q, 1.0, q, 1.0], dtype=np.complex128))

    def pole_margin(self, p: complex, x: complex) -> float:
        q = p**12
        sq = p**6
        margins = []
        for shift in (1.0, q, p**-6, p**18):  # arguments entering K
            y = shift * x
            margins += [abs(sq - y), abs(q + y), abs(1.0 + y)]
        return min(margins)


class Cp2Quantum(QuantumRData):
    """Inner-automorphism su(3) coset model."""

    def __init__(self, model: ModelSpec):
        super().__init__(model)
        g = model.generators
        self._exponent = -kron(g["H2p"], g["H2p"]) / 3.0 - kron(g["H1"], g["H1"]) / 4.0
        self._ef = kron(g["E1"], g["F1"])
        self._fe = kron(g["F1"], g["E1"])
        self._c11 = self.classical.components[1]
        self._g_twist = np.diag([1.0, 1.0, 0.0]).astype(np.complex128)

    def B(self, p: complex) -> CMatrix:
        q = p**12
        return _qpow_diag(p, self._exponent) + p**-4 * (1 - q) * self._ef

    def C(self, p: complex) -> CMatrix:
        q = p**12
        return _qpow_diag(p, self._exponent) + p**-4 * (1 - q) * self._fe

    def A(self, p: complex, lam: complex) -> CMatrix:
        q = p**12
        q3 = p**4
        den = q3 - lam**2
        return (
            q3 / den * self.B_inv(p)
            - lam**2 / den * self.C(p)
            + 2.0 * p**-4 * (q - 1) * lam / den * self._c11
        )

    def D(self, p: complex, lam: complex) -> CMatrix:
        q = p**12
        q3 = p**4
        den = q3 - lam**2
        return (
            q3 / den * self.C_inv(p)
            - lam**2 / den * self.B(p)
            + 2.0 * p**-4 * (q - 1) * lam / den * self._c11
        )

    def gamma_tilde(self, p: complex) -> CMatrix:
        q = p**12
        return np.diag(np.array([q, 1.0, 1.0], dtype=np.complex128))

    def untwist(self, p: complex, lam: complex, mu: complex) -> CMatrix:
        """Conjugate A(lam/mu) into its two-parameter untwisted form."""
        g_lam = np.diag([1.0, 1.0, lam]).astype(np.complex128)
        g_mu = np.diag([1.0, 1.0, mu]).astype(np.complex128)
        eye = np.eye(3, dtype=np.complex128)
        g1 = kron(g_lam, eye)
        g2 = kron(eye, g_mu)
        a = self.A(p, lam / mu)
        return g1 @ g2 @ a @ _inv(g1) @ _inv(g2)

    def unitarity_scalar(self, p: complex, lam: complex) -> complex:
        q = p**12
        return ((q - lam**2) * (1 / q - lam**2)) / (
            (p**4 - lam**2) * (p**-4 - lam**2)
        )

    def pole_margin(self, p: complex, x: complex) -> float:
        q = p**12
        return min(
            abs(p**4 - x**2),
            abs(p**-4 - x**2),
            abs(q - x**2),
            abs(1 / q - x**2),
        )


class Su3So3Quantum(QuantumRData):
    """Outer-automorphism su(3) coset model (twisted-type R-matrix)."""

    def __init__(self, model: ModelSpec):
        super().__init__(model)
        g = model.generators
        self._hh = kron(g["h0"], g["h0"])
        self._e, self._f = g["e0"], g["f0"]

    def B(self, p: complex) -> CMatrix:
        e, f = self._e, self._f
        head = _qpow_diag(p, -0.25 * self._hh)
        body = (
            np.eye(9, dtype=np.complex128)
            - (p**3 - p**-3) * kron(e, f)
            + (1 - p**-3) * (p**3 - p**-3) * kron(e @ e, f @ f)
        )
        return head @ body

    def C(self, p: complex) -> CMatrix:
        e, f = self._e, self._f
        head = _qpow_diag(p, -0.25 * self._hh)
        body = (
            np.eye(9, dtype=np.complex128)
            - (p**3 - p**-3) * kron(f, e)
            + (1 - p**-3) * (p**3 - p**-3) * kron(f @ f, e @ e)
        )
        return head @ body

    def eta_q(self, p: complex) -> CMatrix:
        return np.array(
            [[0, 0, p**3], [0, -1, 0], [1, 0, 0]], dtype=np.complex128
        )

    def sigma_q(self, p: complex, x: CMatrix) -> CMatrix:
        eq = self.eta_q(p)
        return -eq @ x.T @ _inv(eq)

    def _twist_sum(self, p: complex, first_leg_deformed: bool) -> CMatrix:
        out = np.zeros((9, 9), dtype=np.complex128)
        for i in range(1, 4):
            for j in range(1, 4):
                e_ij = np.zeros((3, 3), dtype=np.complex128)
                e_ij[i - 1, j - 1] = 1.0
                e_ji = e_ij.T.copy()
                if first_leg_deformed:
                    out += kron(self.sigma_q(p, e_ij), e_ji)
                else:
                    out += kron(e_ij, self.sigma_q(p, e_ji))
        return out

    def A_hat(self, p: complex, lam: complex) -> CMatrix:
        den = p**6 - lam
        tail = lam * (p**6 - 1) * (1 + p**9) / (den * (lam + p**9))
        return (
            p**3 / den * self.B_inv(p)
            - p**3 * lam / den * self.C(p)
            - tail * self._twist_sum(p, first_leg_deformed=False)
        )

    def D_hat(self, p: complex, lam: complex) -> CMatrix:
        den = p**6 - lam
        tail = lam * (p**6 - 1) * (1 + p**9) / (den * (lam + p**9))
        return (
            p**3 / den * self.C_inv(p)
            - p**3 * lam / den * self.B(p)
            - tail * self._twist_sum(p, first_leg_deformed=True)
        )

    def rescale(self, p: complex, lam: complex) -> complex:
        return ((p**6 - lam) * (p**9 + lam)) / (p**3 * (p**2 - lam) * (p**7 + lam))

    def A(self, p: complex, lam: complex) -> CMatrix:
        return self.rescale(p, lam) * self.A_hat(p, lam)

    def D(self, p: complex, lam: complex) -> CMatrix:
        return self.rescale(p, lam) * self.D_hat(p, lam)

    def gamma_tilde(self, p: complex) -> CMatrix:
        return np.diag(np.array([p**3, 1.0, p**-3], dtype=np.complex128))

    def unitarity_scalar(self, p: complex, lam: complex) -> complex:
        return self.rescale(p, lam) * self.rescale(p, 1.0 / lam)

    def pole_margin(self, p: complex, x: complex) -> float:
        return min(
            abs(p**6 - x),
            abs(x + p**9),
            abs(p**2 - x),
            abs(p**7 + x),
        )


class Gl44Quantum(QuantumRData):
    """gl(4|4) model with order-4 automorphism and q-exponential braiding."""

    EPSILON = (0, 4, 1, 3)

    def __init__(self, model: ModelSpec):
        super().__init__(model)
        g = model.generators
        w = model.weight
        self._h = [g[f"h0_{i}"] for i in range(1, 5)]
        self._e = [g[f"e0_{i}"] for i in range(1, 9)]
        self._f = [g[f"f0_{i}"] for i in range(1, 9)]
        self._H = -0.5 * sum(kron(h, w @ h) for h in self._h)
        self._Hbar = 0.5 * sum(kron(h, h) for h in self._h)
        comps = self.classical.components
        self._c00, self._c13 = comps[0], comps[1]
        self._c22, self._c31 = comps[2], comps[3]

    @staticmethod
    def _qcomm(x: CMatrix, y: CMatrix, ph: complex) -> CMatrix:
        """[x, y]_q with q^(1/2) = ph: ph^-1 xy - ph yx."""
        return x @ y / ph - ph * y @ x

    def B(self, p: complex) -> CMatrix:
        q = p**12
        ph = p**6  # q^(1/2)
        e, f = self._e, self._f
        eye = np.eye(64, dtype=np.complex128)
        e12 = self._qcomm(e[0], e[1], ph)
        f12 = self._qcomm(f[0], f[1], ph)
        e122 = self._qcomm(e12, e[1], ph)
        f122 = self._qcomm(f12, f[1], ph)
        e56 = self._qcomm(e[4], e[5], 1 / ph)
        f56 = self._qcomm(f[4], f[5], 1 / ph)
        e566 = self._qcomm(e56, e[5], 1 / ph)
        f566 = self._qcomm(f56, f[5], 1 / ph)
        factors = {
            1: eye + (1 / q - q) * kron(e[0], f[0]),
            2: eye + 2 * (1 / ph - ph) * kron(e[1], f[1]),
            3: eye - 2 * (1 / ph - ph) * kron(e12, f12),
            4: eye + (1 / q - q) * kron(e122, f122),
            5: eye + (q - 1 / q) * kron(e[4], f[4]),
            6: eye + 2 * (ph - 1 / ph) * kron(e[5], f[5]),
            7: eye - 2 * (ph - 1 / ph) * kron(e56, f56),
            8: eye + (q - 1 / q) * kron(e566, f566),
        }
        out = _qpow_diag(p, self._H)
        for idx in (1, 3, 4, 2, 5, 7, 8, 6):
            out = out @ factors[idx]
        return out

    def C13_q(self, p: complex) -> CMatrix:
        sigma = self.model.sigma
        d = 8
        out = np.zeros((64, 64), dtype=np.complex128)
        for m in range(1, 5):
            for n in range(1, 5):
                scale = self.EPSILON[n - 1] - self.EPSILON[m - 1]
                weight = _qpow_diag(p, scale * self._Hbar)
                x = np.zeros((d, d), dtype=np.complex128)
                x[m - 1, n + 3] = 1.0
                y = np.zeros((d, d), dtype=np.complex128)
                y[n + 3, m - 1] = 1.0
                term = kron(x - 1j * sigma(x), y + 1j * sigma(y))
                out += weight @ term
        return -0.5 * out

    def C31_q(self, p: complex) -> CMatrix:
        return swap_legs(self.C13_q(1.0 / p), 8, self.model.parity)

    def A(self, p: complex, lam: complex) -> CMatrix:
        ph = p**6
        den2 = 1 + lam**2
        den4 = 1 - lam**4
        return (
            self.B_inv(p) / den2
            + lam**2 / den2 * self.C(p)
            + (ph - 1 / ph)
            * (
                2 * lam**2 / den4 * (self._c00 + self._c22)
                + 2 * lam / den4 * self.C13_q(p)
                + 2 * lam**3 / den4 * self.C31_q(p)
            )
        )

    def D(self, p: complex, lam: complex) -> CMatrix:
        ph = p**6
        den2 = 1 + lam**2
        den4 = 1 - lam**4
        qm10h = _qpow_diag(p, -10.0 * self._H)
        return (
            self.C_inv(p) / den2
            + lam**2 / den2 * self.B(p)
            + (ph - 1 / ph)
            * (
                2 * lam**2 / den4 * (self._c00 + self._c22)
                + 2 * lam / den4 * qm10h @ self.C13_q(1.0 / p)
                + 2 * lam**3 / den4 * qm10h @ self.C31_q(1.0 / p)
            )
        )

    def gamma(self, p: complex) -> CMatrix:
        q5 = p**60
        return np.diag(np.array([1.0] * 4 + [q5] * 4, dtype=np.complex128))

    def gamma_tilde(self, p: complex) -> CMatrix:
        q = p**12
        diag = [q ** -eps for eps in self.EPSILON] * 2
        return np.diag(np.array(diag, dtype=np.complex128))

    def unitarity_scalar(self, p: complex, lam: complex) -> complex:
        q = p**12
        return ((q - lam**2) * (1 / q - lam**2)) / (1 - lam**2) ** 2

    def pole_margin(self, p: complex, x: complex) -> float:
        q = p**12
        return min(
            abs(1 + x**2),
            abs(1 - x**4),
            abs(1 - x**2),
            abs(q - x**2),
            abs(1 / q - x**2),
        )


_QUANTUM_BUILDERS = {
    "csg": CsgQuantum,
    "cp2": Cp2Quantum,
    "su3so3": Su3So3Quantum,
    "gl44": Gl44Quantum,
}


def build_quantum(model: ModelSpec | str) -> QuantumRData:
    if isinstance(model, str):
        model = build_model(model)
    return _QUANTUM_BUILDERS[model.id](model)


def gamma_pair(data: QuantumRData, p: complex) -> tuple[CMatrix, CMatrix]:
    """(gamma, gamma_tilde) at the given p; both tend to 1 as q -> 1."""
    return data.gamma(p), data.gamma_tilde(p)
