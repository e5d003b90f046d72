"""Differentiable core: rule tensors, fuzzy semantics, six constraint
losses, their analytic gradients, and a from-scratch Adam loop.

Parameters live as unconstrained logits and are squashed elementwise, so
matrix entries stay strictly inside (0,1) without projection.  Gradients are
derived by hand; leave-one-out products are computed with prefix/suffix
cumulative products rather than division, which stays exact when a factor
saturates at 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .propositional import FeatureSpace

EPS_PRED = 1e-7

LOSS_NAMES = ("L_I", "L_S", "L_B", "L_O", "L_F", "L_C")


def logistic(z):
    """Numerically stable elementwise sigmoid."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    if out.ndim == 0:
        return float(out)
    return out


def activation(x, gamma: float):
    return logistic(gamma * np.asarray(x, dtype=np.float64))


def fuzzy_or(xs) -> float:
    xs = np.asarray(xs, dtype=np.float64)
    return float(1.0 - np.prod(1.0 - xs))


def fuzzy_and(xs) -> float:
    xs = np.asarray(xs, dtype=np.float64)
    return float(np.prod(xs))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


@dataclass(frozen=True)
class HyperParams:
    gamma: float = 8.0
    occ_a: float = 1.0
    occ_b: float = 1.0
    occ_c: float = 10.0
    occ_d: float = 1.0
    theta: tuple[float, ...] = (1.0, 0.1, 0.1, 0.1, 0.01, 0.01)
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    eps_adam: float = 1e-8
    epochs: int = 2000
    curriculum_every: int = 100
    seed: int = 0
    m1: int = 4
    m2: int = 4
    n_a: int = 2
    max_pairs: int | None = None

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.occ_c <= 0:
            raise ValueError("occ_c must be positive")
        if len(self.theta) != 6 or any(t < 0 for t in self.theta):
            raise ValueError("theta must be six nonnegative weights")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("betas must lie in [0, 1)")
        if self.m1 < 0 or self.m2 < 0 or self.m1 + self.m2 == 0:
            raise ValueError("need at least one rule row")
        if self.n_a < 1:
            raise ValueError("n_a must be >= 1")
        if self.epochs < 0 or self.curriculum_every < 1:
            raise ValueError("bad epoch settings")


@dataclass
class RuleTensors:
    """Trainable logits; m1 plain rows plus m2 merged alternative rows."""

    logits_s: np.ndarray
    logits_a: np.ndarray

    @property
    def m1(self) -> int:
        return self.logits_s.shape[0]

    @property
    def m2(self) -> int:
        return self.logits_a.shape[0]

    @property
    def n_a(self) -> int:
        return self.logits_a.shape[1]

    @property
    def m(self) -> int:
        return self.m1 + self.m2

    @property
    def C(self) -> int:
        return self.logits_s.shape[1]

    @property
    def S(self) -> np.ndarray:
        return logistic(self.logits_s)

    @property
    def A(self) -> np.ndarray:
        return logistic(self.logits_a)

    def merged(self) -> np.ndarray:
        return merge_concat(self.S, self.A)


def init_tensors(hp: HyperParams, n_features: int) -> RuleTensors:
    rng = np.random.default_rng(hp.seed)
    logits_s = rng.normal(0.0, 0.1, size=(hp.m1, n_features))
    logits_a = rng.normal(0.0, 0.1, size=(hp.m2, hp.n_a, n_features))
    return RuleTensors(logits_s=logits_s, logits_a=logits_a)


def merge_concat(S: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Average the alternatives of each A row, stack under the S rows."""
    if S.ndim != 2 or A.ndim != 3 or S.shape[1] != A.shape[2]:
        raise ValueError("tensor shapes disagree")
    return np.vstack([S, A.mean(axis=1)])


def infer(M_P: np.ndarray, v_i: np.ndarray, gamma: float) -> float:
    M_P = np.asarray(M_P, dtype=np.float64)
    v_i = np.asarray(v_i, dtype=np.float64)
    if M_P.ndim != 2 or v_i.shape != (M_P.shape[1],):
        raise ValueError("matrix and input vector shapes disagree")
    per_row = activation(M_P @ v_i - 1.0, gamma)
    return fuzzy_or(per_row)


@dataclass(frozen=True)
class EmbeddingTable:
    """Per valid feature: head-variable membership and existential-variable
    membership as binary rows."""

    basic: np.ndarray
    occurrence: np.ndarray


def feature_embeddings(space: FeatureSpace) -> EmbeddingTable:
    feats = space.valid_features
    head = space.head_variables
    exist = space.existential_variables
    basic = np.zeros((len(feats), len(head)), dtype=np.float64)
    occurrence = np.zeros((len(feats), len(exist)), dtype=np.float64)
    for row, f in enumerate(feats):
        seen = f.variables()
        for j, v in enumerate(head):
            if v in seen:
                basic[row, j] = 1.0
        for j, v in enumerate(exist):
            if v in seen:
                occurrence[row, j] = 1.0
    return EmbeddingTable(basic=basic, occurrence=occurrence)


@dataclass(frozen=True)
class PriorMatrix:
    rows: np.ndarray

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise ValueError("prior must be a matrix")
        if self.rows.size and (self.rows.min() < 0 or self.rows.max() > 1):
            raise ValueError("prior entries must lie in [0,1]")

    @classmethod
    def empty(cls, n_features: int) -> "PriorMatrix":
        return cls(rows=np.zeros((0, n_features), dtype=np.float64))

    @property
    def m_p(self) -> int:
        return self.rows.shape[0]

    def extended(self, new_rows: np.ndarray) -> "PriorMatrix":
        """Append rows, skipping exact duplicates of stored ones."""
        seen = {r.tobytes() for r in self.rows}
        fresh = [r for r in np.atleast_2d(new_rows) if r.tobytes() not in seen]
        if not fresh:
            return self
        return PriorMatrix(rows=np.vstack([self.rows, np.array(fresh)]))


# ---------------------------------------------------------------------------
# losses


def _batch_arrays(batch) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(batch, "matrix"):
        return batch.matrix, batch.targets
    rows = np.stack([p.v_i for p in batch])
    return rows, np.array([p.v_o for p in batch], dtype=np.float64)


def occurrence_curve(x, hp: HyperParams):
    """Bump penalty peaking where an existential variable occurs once."""
    x = np.asarray(x, dtype=np.float64)
    return hp.occ_a * np.exp(hp.occ_b - hp.occ_c * (x - hp.occ_d) ** 2)


def inference_predictions(M: np.ndarray, W: np.ndarray, gamma: float) -> np.ndarray:
    Z = M @ W.T
    phi = logistic(gamma * (Z - 1.0))
    return 1.0 - np.prod(1.0 - phi, axis=0)


def basic_terms(M: np.ndarray, basic_emb: np.ndarray) -> np.ndarray:
    """Fuzzy AND over head variables of fuzzy OR over features."""
    E = 1.0 - M[:, :, None] * basic_emb[None, :, :]
    coverage = 1.0 - E.prod(axis=1)
    return coverage.prod(axis=1)


def occurrence_mass(M: np.ndarray, occ_emb: np.ndarray) -> np.ndarray:
    return M @ occ_emb


def diversity_loss(A: np.ndarray) -> float:
    m2, n_a = A.shape[0], A.shape[1]
    total = 0.0
    for k in range(m2):
        for i1 in range(n_a):
            for i2 in range(i1 + 1, n_a):
                total += (cosine(A[k, i1], A[k, i2]) + 1.0) ** 2
    return total


def prior_repulsion_loss(M: np.ndarray, prior: PriorMatrix) -> float:
    total = 0.0
    for q in range(prior.m_p):
        for k in range(M.shape[0]):
            total += (cosine(M[k], prior.rows[q]) + 1.0) ** 2
    return total


def loss_vector(
    tensors: RuleTensors,
    batch,
    embeddings: EmbeddingTable,
    prior: PriorMatrix,
    hp: HyperParams,
) -> np.ndarray:
    W, y = _batch_arrays(batch)
    _check_dims(tensors, W, embeddings, prior)
    M = tensors.merged()

    q = np.clip(inference_predictions(M, W, hp.gamma), EPS_PRED, 1.0 - EPS_PRED)
    l_i = float(-np.mean(y * np.log(q) + (1.0 - y) * np.log(1.0 - q)))

    l_s = float(((M.sum(axis=1) - 1.0) ** 2).sum())
    l_b = float(((basic_terms(M, embeddings.basic) - 1.0) ** 2).sum())
    l_o = float(occurrence_curve(occurrence_mass(M, embeddings.occurrence), hp).sum())
    l_f = diversity_loss(tensors.A) if tensors.n_a >= 2 else 0.0
    l_c = prior_repulsion_loss(M, prior)

    vec = np.array([l_i, l_s, l_b, l_o, l_f, l_c], dtype=np.float64)
    if not np.isfinite(vec).all():
        bad = [LOSS_NAMES[i] for i in np.flatnonzero(~np.isfinite(vec))]
        raise FloatingPointError(f"non-finite loss component(s): {', '.join(bad)}")
    return vec


def total_loss(L: np.ndarray, theta: Sequence[float]) -> float:
    L = np.asarray(L, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    if L.shape != (6,) or theta.shape != (6,):
        raise ValueError("expected six loss components and six weights")
    return float(L @ theta)


def _check_dims(tensors, W, embeddings, prior):
    C = tensors.C
    if tensors.logits_a.shape[2] != C:
        raise ValueError("logit tensors disagree on feature count")
    if W.ndim != 2 or W.shape[1] != C:
        raise ValueError(f"batch rows have {W.shape[1] if W.ndim == 2 else '?'} features, tensors expect {C}")
    if embeddings.basic.shape[0] != C or embeddings.occurrence.shape[0] != C:
        raise ValueError("embedding tables disagree with feature count")
    if prior.m_p and prior.rows.shape[1] != C:
        raise ValueError("prior width disagrees with feature count")
    if W.shape[0] == 0:
        raise ValueError("empty batch")


# ---------------------------------------------------------------------------
# analytic gradients


def _loo_prod(factors: np.ndarray, axis: int) -> np.ndarray:
    """Product over `axis` of all entries except the one at each position."""
    ones = np.ones_like(factors)
    pref = np.cumprod(factors, axis=axis)
    suf = np.flip(np.cumprod(np.flip(factors, axis=axis), axis=axis), axis=axis)
    pref = np.concatenate([ones.take([0], axis=axis), pref], axis=axis)
    suf = np.concatenate([suf, ones.take([0], axis=axis)], axis=axis)
    n = factors.shape[axis]
    return pref.take(range(0, n), axis=axis) * suf.take(range(1, n + 1), axis=axis)


def _cos_grad_u(u: np.ndarray, v: np.ndarray) -> tuple[float, np.ndarray]:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0, np.zeros_like(u)
    c = float(np.dot(u, v) / (nu * nv))
    return c, v / (nu * nv) - c * u / (nu * nu)


def loss_and_grad(
    tensors: RuleTensors,
    batch,
    embeddings: EmbeddingTable,
    prior: PriorMatrix,
    hp: HyperParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Loss vector plus d(total)/d(logits) for both tensors."""
    W, y = _batch_arrays(batch)
    _check_dims(tensors, W, embeddings, prior)
    S = tensors.S
    A = tensors.A
    m1, m2, n_a = tensors.m1, tensors.m2, tensors.n_a
    M = np.vstack([S, A.mean(axis=1)])
    N = W.shape[0]

    # inference
    Z = M @ W.T
    phi = logistic(hp.gamma * (Z - 1.0))
    keep = 1.0 - phi
    q = 1.0 - np.prod(keep, axis=0)
    qc = np.clip(q, EPS_PRED, 1.0 - EPS_PRED)
    l_i = float(-np.mean(y * np.log(qc) + (1.0 - y) * np.log(1.0 - qc)))
    inside = (q > EPS_PRED) & (q < 1.0 - EPS_PRED)
    coef = np.where(inside, (qc - y) / (qc * (1.0 - qc)), 0.0) / N
    loo = _loo_prod(keep, axis=0)
    g_i = (coef[None, :] * loo * hp.gamma * phi * keep) @ W

    # row sums
    row_sums = M.sum(axis=1)
    l_s = float(((row_sums - 1.0) ** 2).sum())
    g_s = np.broadcast_to(2.0 * (row_sums - 1.0)[:, None], M.shape)

    # head-variable coverage
    b_emb = embeddings.basic
    E = 1.0 - M[:, :, None] * b_emb[None, :, :]
    coverage = 1.0 - E.prod(axis=1)
    basic = coverage.prod(axis=1)
    l_b = float(((basic - 1.0) ** 2).sum())
    cov_loo = _loo_prod(coverage, axis=1)
    e_loo = _loo_prod(E, axis=1)
    dbasic = np.einsum("kj,kij,ij->ki", cov_loo, e_loo, b_emb)
    g_b = 2.0 * (basic - 1.0)[:, None] * dbasic

    # existential occurrence
    o_emb = embeddings.occurrence
    V = M @ o_emb
    F = hp.occ_a * np.exp(hp.occ_b - hp.occ_c * (V - hp.occ_d) ** 2)
    l_o = float(F.sum())
    g_o = (-2.0 * hp.occ_c * (V - hp.occ_d) * F) @ o_emb.T

    # alternative-row diversity, directly on A
    l_f = 0.0
    g_a_direct = np.zeros_like(A)
    if n_a >= 2:
        for k in range(m2):
            for i1 in range(n_a):
                for i2 in range(i1 + 1, n_a):
                    c, du = _cos_grad_u(A[k, i1], A[k, i2])
                    _, dv = _cos_grad_u(A[k, i2], A[k, i1])
                    l_f += (c + 1.0) ** 2
                    g_a_direct[k, i1] += 2.0 * (c + 1.0) * du
                    g_a_direct[k, i2] += 2.0 * (c + 1.0) * dv

    # repulsion from the prior rows
    l_c = 0.0
    g_c = np.zeros_like(M)
    for qrow in prior.rows:
        for k in range(M.shape[0]):
            c, du = _cos_grad_u(M[k], qrow)
            l_c += (c + 1.0) ** 2
            g_c[k] += 2.0 * (c + 1.0) * du

    vec = np.array([l_i, l_s, l_b, l_o, l_f, l_c], dtype=np.float64)
    if not np.isfinite(vec).all():
        bad = [LOSS_NAMES[i] for i in np.flatnonzero(~np.isfinite(vec))]
        raise FloatingPointError(f"non-finite loss component(s): {', '.join(bad)}")

    th = hp.theta
    g_m = th[0] * g_i + th[1] * g_s + th[2] * g_b + th[3] * g_o + th[5] * g_c
    grad_s_logits = g_m[:m1] * S * (1.0 - S)
    g_alt = np.repeat(g_m[m1:][:, None, :], n_a, axis=1) / n_a + th[4] * g_a_direct
    grad_a_logits = g_alt * A * (1.0 - A)
    for name, g in (("logits_s", grad_s_logits), ("logits_a", grad_a_logits)):
        if not np.isfinite(g).all():
            raise FloatingPointError(f"non-finite gradient for {name}")
    return vec, grad_s_logits, grad_a_logits


# ---------------------------------------------------------------------------
# optimizer


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros_like(cls, params: np.ndarray) -> "AdamState":
        return cls(m=np.zeros_like(params), v=np.zeros_like(params))


@dataclass
class OptState:
    s: AdamState
    a: AdamState


def init_opt_state(tensors: RuleTensors) -> OptState:
    return OptState(
        s=AdamState.zeros_like(tensors.logits_s),
        a=AdamState.zeros_like(tensors.logits_a),
    )


def adam_update(
    params: np.ndarray, grad: np.ndarray, state: AdamState, hp: HyperParams
) -> tuple[np.ndarray, AdamState]:
    t = state.t + 1
    m = hp.beta1 * state.m + (1.0 - hp.beta1) * grad
    v = hp.beta2 * state.v + (1.0 - hp.beta2) * grad * grad
    m_hat = m / (1.0 - hp.beta1**t)
    v_hat = v / (1.0 - hp.beta2**t)
    new = params - hp.lr * m_hat / (np.sqrt(v_hat) + hp.eps_adam)
    return new, AdamState(m=m, v=v, t=t)


def train_step(
    tensors: RuleTensors,
    batch,
    embeddings: EmbeddingTable,
    prior: PriorMatrix,
    hp: HyperParams,
    opt: OptState,
) -> tuple[RuleTensors, OptState, np.ndarray]:
    vec, g_s, g_a = loss_and_grad(tensors, batch, embeddings, prior, hp)
    new_s, st_s = adam_update(tensors.logits_s, g_s, opt.s, hp)
    new_a, st_a = adam_update(tensors.logits_a, g_a, opt.a, hp)
    return RuleTensors(logits_s=new_s, logits_a=new_a), OptState(s=st_s, a=st_a), vec
