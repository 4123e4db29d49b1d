"""Formal rewriting engine for the quadratic lattice exchange algebra.

Lattice operators are abstract letters: a letter carries a site index and a
spectral slot (the lambda or mu monodromy it belongs to), and a word's
coefficient tensor carries one (row, col) index pair per letter.  The
exchange relations of the algebra become linear maps on coefficient tensors,
and commuting transfer matrices reduce to a normal-ordered difference of
coefficient tensors being zero at the sampled parameter point.

Two rule sets exist: the local rules reorder single-site Lax letters (used
for two-site runs, exercising the passage from local to global relations),
while the monodromy rule reorders whole-monodromy letters through the
sandwiched quadratic algebra (used for one-site runs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .quantum import ParamPoint, QuantumRData, build_quantum
from .tensorops import CMatrix


class SingularExchange(Exception):
    """Reordering map not invertible at the sampled parameter point."""


class MemoryBound(Exception):
    """Requested word space exceeds the supported size."""


LAMBDA = "lam"
MU = "mu"


class Letter(NamedTuple):
    site: int
    slot: str


Word = tuple[Letter, ...]
COND_LIMIT = 1e8


def _cond(x: CMatrix) -> float:
    return float(np.linalg.cond(x))


def engine_matrices(data: QuantumRData, p: complex, nu: complex):
    """The (A, B, C, D) set generating a consistent exchange algebra.

    The flip model's unnormalized A, D products are not proportional to the
    identity, so its algebra is generated by the rescaled unitary pair; the
    graded model enters through its realized matrices.
    """
    if data.model.id == "csg":
        return data.A_hat(p, nu), data.B(p), data.C(p), data.D_hat(p, nu)
    return data.A_real(p, nu), data.B(p), data.C(p), data.D_real(p, nu)


@dataclass
class ExchangeRuleSet:
    """Numeric reordering data for one (model, parameter point) pair."""

    dim: int
    mode: Literal["local", "monodromy"]
    a_inv4: np.ndarray  # A(nu)^-1 reshaped [c1, c2, a1, a2]
    d4: np.ndarray  # D(nu) reshaped [e1, e2, b1, b2]
    c4: np.ndarray  # C reshaped [a1, c2, d1, b2]
    b_shuffle: np.ndarray | None = None  # B[(e1 a2), (b1 e2)] as [(e1 e2), (a2 b1)]
    condition: float = 0.0

    @classmethod
    def build(
        cls,
        data: QuantumRData,
        point: ParamPoint,
        mode: Literal["local", "monodromy"] = "local",
    ) -> "ExchangeRuleSet":
        d = data.dim
        a, b, c, dd = engine_matrices(data, point.p, point.nu)
        cond = _cond(a) * _cond(dd)
        if cond > COND_LIMIT:
            raise SingularExchange(f"same-site map condition {cond:.2e} exceeds bound")
        a_inv = np.linalg.inv(a)
        b_shuffle = None
        if mode == "monodromy":
            b4 = b.reshape(d, d, d, d)
            b_shuffle = np.ascontiguousarray(b4.transpose(0, 3, 1, 2)).reshape(d * d, d * d)
            if _cond(b_shuffle) > COND_LIMIT:
                raise SingularExchange("sandwich solve ill-conditioned")
        return cls(
            dim=d,
            mode=mode,
            a_inv4=a_inv.reshape(d, d, d, d),
            d4=dd.reshape(d, d, d, d),
            c4=c.reshape(d, d, d, d),
            b_shuffle=b_shuffle,
            condition=cond,
        )


def _apply_same_site_local(tensor: np.ndarray, pos: int, rules: ExchangeRuleSet) -> np.ndarray:
    """L(lam) L(mu) -> sum over L(mu) L(lam) via A^-1 ... D contraction."""
    axes = (1 + 2 * pos, 2 + 2 * pos, 3 + 2 * pos, 4 + 2 * pos)
    t = np.moveaxis(tensor, axes, (-4, -3, -2, -1))
    # t[..., c1, b1, c2, b2] -> out[..., a2, e2, a1, e1]
    out = np.einsum("...wxyz,wyuv,efxz->...vfue", t, rules.a_inv4, rules.d4, optimize=True)
    return np.moveaxis(out, (-4, -3, -2, -1), axes)


def _apply_same_site_monodromy(tensor: np.ndarray, pos: int, rules: ExchangeRuleSet) -> np.ndarray:
    """T(lam) T(mu) -> sum over T(mu) T(lam) via the sandwiched algebra."""
    d = rules.dim
    axes = (1 + 2 * pos, 2 + 2 * pos, 3 + 2 * pos, 4 + 2 * pos)
    t = np.moveaxis(tensor, axes, (-4, -3, -2, -1))
    lead = t.shape[:-4]
    # solve B-sandwich: coefficients in the T1 B T2 basis
    t_ = t.transpose(
        tuple(range(t.ndim - 4)) + (t.ndim - 3, t.ndim - 2, t.ndim - 4, t.ndim - 1)
    )  # [..., e1, e2, a1, b2]
    rhs = t_.reshape(-1, d, d, d, d).transpose(1, 2, 0, 3, 4).reshape(d * d, -1)
    sol = np.linalg.solve(rules.b_shuffle, rhs)  # [(a2 b1), (lead a1 b2)]
    u = sol.reshape(d, d, -1, d, d).transpose(2, 3, 0, 1, 4)  # [lead, a1, a2, b1, b2]
    u = u.reshape(lead + (d, d, d, d))
    # contract with A^-1 on rows and D on columns
    a4 = np.transpose(rules.a_inv4, (2, 3, 0, 1))  # A^-1 as [(a1 a2), (c1 c2)]
    v = np.einsum("...wxyz,wxcd,hkyz->...cdhk", u, a4, rules.d4, optimize=True)
    # contract with C: new letters T(mu)=(c2, f2), T(lam)=(g1, h1)
    out = np.einsum("...cdhk,cfgk->...dfgh", v, rules.c4, optimize=True)
    return np.moveaxis(out, (-4, -3, -2, -1), axes)


def _apply_adjacent(tensor: np.ndarray, pos: int, rules: ExchangeRuleSet) -> np.ndarray:
    """L^n(x) L^(n+1)(y) -> sum over L^(n+1)(y) C-sandwich L^n(x)."""
    axes = (1 + 2 * pos, 2 + 2 * pos, 3 + 2 * pos, 4 + 2 * pos)
    t = np.moveaxis(tensor, axes, (-4, -3, -2, -1))
    # t[..., a1, b1, a2, b2] -> out[..., a2, c2, d1, b1]
    out = np.einsum("...wxyz,wcdz->...ycdx", t, rules.c4, optimize=True)
    return np.moveaxis(out, (-4, -3, -2, -1), axes)


def _apply_far_swap(tensor: np.ndarray, pos: int) -> np.ndarray:
    axes = list(range(tensor.ndim))
    i = 1 + 2 * pos
    axes[i], axes[i + 1], axes[i + 2], axes[i + 3] = axes[i + 2], axes[i + 3], axes[i], axes[i + 1]
    return tensor.transpose(axes)


SLOT_ORDER = {MU: 0, LAMBDA: 1}


def _in_order(a: Letter, b: Letter) -> bool:
    if a.site != b.site:
        return a.site > b.site
    return SLOT_ORDER[a.slot] <= SLOT_ORDER[b.slot]


def _inversions(word: Word) -> int:
    return sum(
        0 if _in_order(word[i], word[j]) else 1
        for i in range(len(word))
        for j in range(i + 1, len(word))
    )


class WordExpression:
    """Formal sum of words with per-word coefficient tensors.

    Tensor layout: one batch axis, then a (row, col) axis pair of size d per
    letter, matching the word order.  Zero-norm terms are pruned on merge.
    """

    PRUNE = 1e-300

    def __init__(self, dim: int, terms: dict[Word, np.ndarray] | None = None):
        self.dim = dim
        self.terms: dict[Word, np.ndarray] = dict(terms or {})

    def add(self, word: Word, tensor: np.ndarray) -> None:
        if word in self.terms:
            self.terms[word] = self.terms[word] + tensor
            if np.linalg.norm(self.terms[word]) <= self.PRUNE:
                del self.terms[word]
        else:
            self.terms[word] = tensor

    def norm(self) -> float:
        return float(np.sqrt(sum(np.linalg.norm(t) ** 2 for t in self.terms.values())))

    def subtract(self, other: "WordExpression") -> "WordExpression":
        out = WordExpression(self.dim, self.terms)
        for word, tensor in other.terms.items():
            out.add(word, -tensor)
        return out


def normal_order(
    expr: WordExpression,
    rules: ExchangeRuleSet,
    strategy: Literal["first", "last"] = "first",
) -> WordExpression:
    """Rewrite every word into the target order (site desc, mu before lam).

    Each rule application strictly lowers the inversion count against the
    target order, so the loop terminates.
    """
    work = list(expr.terms.items())
    done = WordExpression(expr.dim)
    while work:
        word, tensor = work.pop()
        positions = [
            i for i in range(len(word) - 1) if not _in_order(word[i], word[i + 1])
        ]
        if not positions:
            done.add(word, tensor)
            continue
        pos = positions[0] if strategy == "first" else positions[-1]
        left, right = word[pos], word[pos + 1]
        before = _inversions(word)
        if left.site == right.site:
            if left.slot == right.slot:
                raise SingularExchange("repeated letter in word")
            if rules.mode == "monodromy":
                new_tensor = _apply_same_site_monodromy(tensor, pos, rules)
            else:
                new_tensor = _apply_same_site_local(tensor, pos, rules)
        elif right.site == left.site + 1:
            new_tensor = _apply_adjacent(tensor, pos, rules)
        elif right.site > left.site + 1:
            new_tensor = _apply_far_swap(tensor, pos)
        else:
            raise SingularExchange(f"unorderable pair {left} {right}")
        new_word = word[:pos] + (right, left) + word[pos + 2 :]
        if not _inversions(new_word) < before:
            raise SingularExchange("rewrite failed to reduce inversion count")
        work.append((new_word, new_tensor))
    return done


def _trace_tensor(data: QuantumRData, p: complex, n_sites: int, slot: str) -> tuple[Word, np.ndarray]:
    """Word and tensor for tr(gamma_tilde^t T(x)) at one spectral slot."""
    gt = data.gamma_tilde(p)
    g = data.gamma(p)
    if n_sites == 1:
        word = (Letter(1, slot),)
        return word, gt.copy()
    word = (Letter(2, slot), Letter(1, slot))
    tensor = np.einsum("ba,cd->bcda", gt, g)
    return word, tensor


def transfer_commutator(
    data: QuantumRData | str,
    point: ParamPoint,
    n_sites: int,
    strategy: Literal["first", "last"] = "first",
) -> float:
    """Relative norm of [t(lam), t(mu)] after normal ordering.

    t(x) = tr(gamma_tilde^t T(x)) with T the site-ordered product of lattice
    letters with gamma insertions.  For one site the letter is the monodromy
    itself and the sandwiched algebra reorders it; two-site runs use the
    local rules.  Only d <= 4 models support two sites.
    """
    if isinstance(data, str):
        data = build_quantum(data)
    if n_sites not in (1, 2):
        raise ValueError("n_sites must be 1 or 2")
    if n_sites == 2 and data.dim > 4:
        raise MemoryBound("two-site words for d > 4 exceed the supported budget")
    mode = "monodromy" if n_sites == 1 else "local"
    rules = ExchangeRuleSet.build(data, point, mode=mode)
    d = data.dim
    word_l, t_l = _trace_tensor(data, point.p, n_sites, LAMBDA)
    word_m, t_m = _trace_tensor(data, point.p, n_sites, MU)

    def product(first: tuple[Word, np.ndarray], second: tuple[Word, np.ndarray]) -> WordExpression:
        (w1, x1), (w2, x2) = first, second
        tensor = np.tensordot(x1, x2, axes=0).reshape((1,) + (d,) * 2 * (len(w1) + len(w2)))
        return WordExpression(d, {w1 + w2: tensor})

    lm = normal_order(product((word_l, t_l), (word_m, t_m)), rules, strategy)
    ml = normal_order(product((word_m, t_m), (word_l, t_l)), rules, strategy)
    diff = lm.subtract(ml)
    scale = max(lm.norm(), ml.norm(), 1e-300)
    return diff.norm() / scale


def global_relation_check(data: QuantumRData | str, point: ParamPoint) -> float:
    """Residual of the sandwiched monodromy relation for a two-site chain.

    Both sides of A_12 T_1 B_12 T_2 = T_2 C_12 T_1 D_12, with T expanded in
    lattice letters and gamma insertions, are normal ordered with the local
    rules and compared.  Processes one first-leg row pair at a time to keep
    the letter tensors with free legs inside the memory budget.
    """
    if isinstance(data, str):
        data = build_quantum(data)
    d = data.dim
    if d > 4:
        raise MemoryBound("global relation with free legs is gated to d <= 4")
    rules = ExchangeRuleSet.build(data, point, mode="local")
    a, b, c, dd = engine_matrices(data, point.p, point.nu)
    g = data.gamma(point.p)
    a4 = a.reshape(d, d, d, d)
    b4 = b.reshape(d, d, d, d)
    c4 = c.reshape(d, d, d, d)
    d4 = dd.reshape(d, d, d, d)
    eye = np.eye(d, dtype=np.complex128)

    lhs_word = (Letter(2, LAMBDA), Letter(1, LAMBDA), Letter(2, MU), Letter(1, MU))
    rhs_word = (Letter(2, MU), Letter(1, MU), Letter(2, LAMBDA), Letter(1, LAMBDA))

    diff_sq = 0.0
    ref_sq = 0.0
    for a1 in range(d):
        for a2 in range(d):
            # A_12 T_1(lam) B_12 T_2(mu): letters (c1,k)(l,d1)(e2,m)(n,b2)
            m_l = np.einsum("cx,dxbe->bcde", a4[a1, a2], b4, optimize=True)
            lhs = np.einsum("bcde,kl,mn,xz->bxckldemnz", m_l, g, g, eye, optimize=True)
            lhs = lhs.reshape((d * d,) + (d,) * 8)
            # T_2(mu) C_12 T_1(lam) D_12: letters (a2,m')(n',f2)(g1,k')(l',h1)
            one_hot = np.zeros(d, dtype=np.complex128)
            one_hot[a2] = 1.0
            m_r = np.einsum("fgx,hxbz->fghbz", c4[a1], d4, optimize=True)
            rhs = np.einsum("fghbz,r,mn,kl->bzrmnfgklh", m_r, one_hot, g, g, optimize=True)
            rhs = rhs.reshape((d * d,) + (d,) * 8)
            lhs_no = normal_order(WordExpression(d, {lhs_word: lhs}), rules)
            rhs_no = normal_order(WordExpression(d, {rhs_word: rhs}), rules)
            diff = lhs_no.subtract(rhs_no)
            diff_sq += diff.norm() ** 2
            ref_sq += max(lhs_no.norm(), rhs_no.norm()) ** 2
    return float(np.sqrt(diff_sq) / max(np.sqrt(ref_sq), 1e-300))
