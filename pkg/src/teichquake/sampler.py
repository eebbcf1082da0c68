"""Heuristic maximization of box-mass functionals over the Möbius group.

Samples are phi = N(n) A(a) K(theta): a rotation of the disk, then the
dilation z -> e^a z, then the shear z -> z + n.  The grid contains the
identity whenever the step counts are odd.  After the grid (plus seeded
random draws) the best few samples are polished by coordinate-wise
golden-section search in the local coordinates phi o exp(s X).

Every value returned is attained at an evaluated group element, so the
result is a lower bound for the true supremum.  An enlarged sampler keeps
its predecessor and never reports less than it did.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .errors import SamplerBudgetExceeded

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MobiusSampler:
    rotations: int = 64
    dilation_range: float = 8.0
    dilation_steps: int = 33
    shear_range: float = 8.0
    shear_steps: int = 33
    refine_rounds: int = 3
    seed: int = 0
    random_samples: int = 256
    refine_starts: int = 4
    golden_iters: int = 24
    max_evaluations: int = 10_000_000
    chunk: int = 16384
    workers: int = 1
    previous: Optional["MobiusSampler"] = None

    @classmethod
    def from_dict(cls, d: dict) -> "MobiusSampler":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        if known.get("previous") is not None:
            known["previous"] = cls.from_dict(known["previous"])
        return cls(**known)

    def to_dict(self) -> dict:
        return asdict(self)

    def enlarged(self) -> "MobiusSampler":
        """A sampler whose sample set contains this one's (nested grid, longer random prefix).

        The result remembers ``self``, so maximizing with it also reruns this
        sampler and estimates are nondecreasing along a chain of enlargements.
        """
        return replace(
            self,
            rotations=2 * self.rotations,
            dilation_steps=2 * self.dilation_steps - 1,
            shear_steps=2 * self.shear_steps - 1,
            random_samples=2 * self.random_samples,
            refine_rounds=self.refine_rounds + 1,
            previous=self,
        )

    # -- sample set ---------------------------------------------------------

    def steps(self):
        """Grid spacing in each local coordinate (rotation, dilation, shear)."""
        dr = 2 * math.pi / self.rotations
        da = 2 * self.dilation_range / max(self.dilation_steps - 1, 1)
        dn = 2 * self.shear_range / max(self.shear_steps - 1, 1)
        return dr, da, dn

    def grid_params(self) -> np.ndarray:
        th = 2 * math.pi * np.arange(self.rotations) / self.rotations
        a = np.linspace(-self.dilation_range, self.dilation_range, self.dilation_steps)
        n = np.linspace(-self.shear_range, self.shear_range, self.shear_steps)
        T, A, N = np.meshgrid(th, a, n, indexing="ij")
        return np.stack([T.ravel(), A.ravel(), N.ravel()], axis=1)

    def random_params(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        u = rng.random((self.random_samples, 3))
        return np.stack(
            [
                2 * math.pi * u[:, 0],
                self.dilation_range * (2 * u[:, 1] - 1),
                self.shear_range * (2 * u[:, 2] - 1),
            ],
            axis=1,
        )

    def sample_matrices(self) -> np.ndarray:
        params = np.concatenate([self.grid_params(), self.random_params()], axis=0)
        return kan_matrices(params[:, 0], params[:, 1], params[:, 2])


def kan_matrices(theta, a, n) -> np.ndarray:
    """Matrices of N(n) A(a) K(theta), shape (S, 2, 2)."""
    theta, a, n = (np.asarray(x, dtype=float) for x in (theta, a, n))
    h = theta / 2
    cs, sn = np.cos(h), np.sin(h)
    e = np.exp(a / 2)
    ie = 1 / e
    m = np.empty(theta.shape + (2, 2))
    m[..., 0, 0] = e * cs - n * ie * sn
    m[..., 0, 1] = e * sn + n * ie * cs
    m[..., 1, 0] = -ie * sn
    m[..., 1, 1] = ie * cs
    return m


def _local_generator(j: int, s: float) -> np.ndarray:
    if j == 0:
        h = s / 2
        return np.array([[math.cos(h), math.sin(h)], [-math.sin(h), math.cos(h)]])
    if j == 1:
        e = math.exp(s / 2)
        return np.array([[e, 0.0], [0.0, 1 / e]])
    return np.array([[1.0, s], [0.0, 1.0]])


def apply_matrices_to_angles(m: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Act by (S,2,2) matrices on angles broadcastable to (S, ...)."""
    theta = np.asarray(theta, dtype=float)
    extra = theta.ndim - 1 if theta.ndim else 0
    idx = (slice(None),) + (None,) * extra
    s, c = np.sin(theta / 2), np.cos(theta / 2)
    s2 = m[:, 0, 0][idx] * s + m[:, 0, 1][idx] * c
    c2 = m[:, 1, 0][idx] * s + m[:, 1, 1][idx] * c
    return np.mod(2 * np.arctan2(s2, c2), 2 * math.pi)


def inverse_matrices(m: np.ndarray) -> np.ndarray:
    inv = np.empty_like(m)
    inv[:, 0, 0] = m[:, 1, 1]
    inv[:, 0, 1] = -m[:, 0, 1]
    inv[:, 1, 0] = -m[:, 1, 0]
    inv[:, 1, 1] = m[:, 0, 0]
    return inv


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, k: int):
        self.used += k
        if self.used > self.cap:
            raise SamplerBudgetExceeded(f"more than {self.cap} evaluations")


def _evaluate_chunks(objective, mats: np.ndarray, sampler: MobiusSampler) -> np.ndarray:
    chunks = [mats[i:i + sampler.chunk] for i in range(0, len(mats), sampler.chunk)]
    if sampler.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=sampler.workers) as pool:
            parts = list(pool.map(objective, chunks))
    else:
        parts = [objective(c) for c in chunks]
    return np.concatenate(parts) if parts else np.empty(0)


def _golden_max(f, lo: float, hi: float, iters: int):
    """Golden-section search for a maximum of f on [lo, hi]; returns (x, f(x))."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = (x1, f1) if f1 >= f2 else (x2, f2)
    for _ in range(iters):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
        for x, v in ((x1, f1), (x2, f2)):
            if v > best[1]:
                best = (x, v)
    return best


def maximize(objective, sampler: MobiusSampler, extra=None, refine: bool = True):
    """Best value of ``objective`` over the sample set, then local refinement.

    ``objective`` maps an (S,2,2) array of group elements to (S,) values.
    ``extra`` adds samples: an (E,2,2) array, or a function of the sampler
    returning one.  Returns ``(value, matrix)`` of the best evaluated element.
    """
    prior = None
    if sampler.previous is not None:
        prior = maximize(objective, sampler.previous, extra=extra, refine=refine)
    budget = _Budget(sampler.max_evaluations)
    mats = sampler.sample_matrices()
    if callable(extra):
        extra = extra(sampler)
    if extra is not None and len(extra):
        mats = np.concatenate([mats, extra], axis=0)
    budget.spend(len(mats))
    vals = _evaluate_chunks(objective, mats, sampler)
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    best_i = int(np.argmax(vals))
    best_val, best_mat = float(vals[best_i]), mats[best_i]
    if refine and sampler.refine_rounds > 0:
        best_val, best_mat = _refine(objective, sampler, mats, vals, best_val, best_mat, budget)
    if prior is not None and prior[0] > best_val:
        return prior
    return best_val, best_mat


def _refine(objective, sampler, mats, vals, best_val, best_mat, budget):
    # distinct starting points, best first (stable order keeps runs reproducible)
    order = np.argsort(-vals, kind="stable")[: max(sampler.refine_starts, 1)]
    steps = sampler.steps()
    for start in order:
        cur_mat = mats[start]
        cur_val = float(vals[start])
        width = list(steps)
        for _ in range(sampler.refine_rounds):
            for j in range(3):
                base = cur_mat

                def f(s, base=base, j=j):
                    budget.spend(1)
                    m = (base @ _local_generator(j, s))[None]
                    v = float(objective(m)[0])
                    return v if math.isfinite(v) else -math.inf

                s, v = _golden_max(f, -width[j], width[j], sampler.golden_iters)
                if v > cur_val:
                    cur_val, cur_mat = v, base @ _local_generator(j, s)
            width = [w / 2 for w in width]
        if cur_val > best_val:
            best_val, best_mat = cur_val, cur_mat
    return best_val, best_mat


def standardizing_matrices(a, b, c) -> np.ndarray:
    """det-1 matrices sending angles a, b, c to 0, 1, infinity (a, b, c counterclockwise).

    Their inverses carry the standard box onto the symmetric box with first
    three corners a, b, c.
    """
    v1 = np.stack([np.sin(a / 2), np.cos(a / 2)], axis=-1)
    v2 = np.stack([np.sin(b / 2), np.cos(b / 2)], axis=-1)
    v3 = np.stack([np.sin(c / 2), np.cos(c / 2)], axis=-1)

    def br(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    k1 = br(v3, v2)
    k3 = br(v1, v2)
    m = np.empty(np.shape(a) + (2, 2))
    m[..., 0, 0] = -k1 * v1[..., 1]
    m[..., 0, 1] = k1 * v1[..., 0]
    m[..., 1, 0] = -k3 * v3[..., 1]
    m[..., 1, 1] = k3 * v3[..., 0]
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        m /= np.sqrt(np.abs(det))[..., None, None]
    return m
