"""Norms, dual norms, and deterministic unit-sphere sampling.

Three norm families are supported on real d-space: lp (p >= 1, p = inf
allowed), sup, and weighted-lp with strictly positive weights.  Dual norms
are evaluated in closed form via conjugate exponents.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError

_KINDS = ("lp", "sup", "wlp")


@dataclass(frozen=True)
class NormSpec:
    """A norm on real d-space: kind in {lp, sup, wlp}."""

    kind: str
    p: Optional[float] = None
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown norm kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind in ("lp", "wlp"):
            if self.p is None:
                raise InputError(f"norm kind {self.kind!r} requires an exponent p")
            if not self.p >= 1.0:
                raise InputError(f"norm exponent p={self.p} must be >= 1")
        if self.kind == "wlp":
            if self.weights is None:
                raise InputError("weighted-lp norm requires weights")
            if not math.isfinite(self.p):
                raise InputError("weighted-lp norm requires a finite exponent")
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or w.size == 0:
                raise InputError("weights must be a non-empty 1-d sequence")
            if not np.all(np.isfinite(w)) or not np.all(w > 0):
                raise InputError("weights must be strictly positive and finite")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise InputError(f"norm kind {self.kind!r} does not take weights")

    def check_dim(self, dim):
        if self.kind == "wlp" and self.weights.size != dim:
            raise InputError(
                f"weights length {self.weights.size} does not match dimension {dim}"
            )

    def describe(self):
        if self.kind == "lp":
            return f"lp {fmt_float(self.p)}"
        if self.kind == "sup":
            return "sup"
        ws = " ".join(fmt_float(w) for w in self.weights)
        return f"wlp {fmt_float(self.p)} {ws}"


def fmt_float(x):
    """repr-based formatting; round-trips doubles at full precision."""
    x = float(x)
    if x == math.inf:
        return "inf"
    return repr(x)


def l2() -> NormSpec:
    return NormSpec("lp", 2.0)


def check_vector(v, dim=None, name="vector"):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InputError(f"{name} must be a non-empty 1-d array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} contains non-finite entries")
    if dim is not None and v.size != dim:
        raise InputError(f"{name} has dimension {v.size}, expected {dim}")
    return v


def norm_value(v, spec: NormSpec) -> float:
    """Evaluate ||v|| under spec."""
    v = check_vector(v)
    spec.check_dim(v.size)
    return float(_norm_rows(v[None, :], spec)[0])


def dual_norm_value(f, spec: NormSpec) -> float:
    """Evaluate the dual norm sup{<f, v> : ||v|| <= 1}."""
    f = check_vector(f, name="functional")
    spec.check_dim(f.size)
    return float(_dual_norm_rows(f[None, :], spec)[0])


def _pnorm_rows(m, p):
    if math.isinf(p):
        return np.max(np.abs(m), axis=1)
    if p == 1.0:
        return np.sum(np.abs(m), axis=1)
    if p == 2.0:
        return np.sqrt(np.sum(m * m, axis=1))
    a = np.abs(m)
    # factor out the row max to avoid overflow for large p
    top = np.max(a, axis=1)
    out = np.zeros_like(top)
    nz = top > 0
    scaled = a[nz] / top[nz, None]
    out[nz] = top[nz] * np.sum(scaled**p, axis=1) ** (1.0 / p)
    return out


def _norm_rows(m, spec: NormSpec):
    """Row-wise norm of an (n, d) array."""
    if spec.kind == "sup":
        return np.max(np.abs(m), axis=1)
    if spec.kind == "lp":
        return _pnorm_rows(m, spec.p)
    return _pnorm_rows(m * spec.weights ** (1.0 / spec.p), spec.p)


def _conjugate(p):
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _dual_norm_rows(m, spec: NormSpec):
    if spec.kind == "sup":
        return np.sum(np.abs(m), axis=1)
    if spec.kind == "lp":
        return _pnorm_rows(m, _conjugate(spec.p))
    # substitute u_i = w_i^(1/p) v_i; the dual is the conjugate norm of
    # f_i * w_i^(-1/p)
    return _pnorm_rows(m * spec.weights ** (-1.0 / spec.p), _conjugate(spec.p))


@dataclass(frozen=True)
class SampleConfig:
    """Deterministic sampling budget: (seed, count)."""

    seed: int = 0
    count: int = 1000

    def __post_init__(self):
        if self.count < 1:
            raise InputError(f"sample count must be >= 1, got {self.count}")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")


def gaussian_samples(dim, cfg: SampleConfig):
    """(count, dim) standard-normal draws from a counter-based stream.

    Row i occupies a fixed counter range of Philox(seed), so it is a pure
    function of (seed, i) regardless of how many rows are requested; a
    longer request extends the sequence without changing earlier rows.
    """
    gen = np.random.Generator(np.random.Philox(key=int(cfg.seed)))
    return gen.standard_normal((cfg.count, dim))


def sphere_sample(dim, spec: NormSpec, cfg: SampleConfig):
    """cfg.count unit vectors of the spec-norm sphere in d dimensions.

    Rotation-invariant directions normalized under the target norm;
    deterministic in (dim, spec, seed, count).
    """
    if dim < 1:
        raise InputError(f"dimension must be >= 1, got {dim}")
    spec.check_dim(dim)
    g = gaussian_samples(dim, cfg)
    norms = _norm_rows(g, spec)
    # a numerically-zero gaussian row is practically impossible; fall back
    # to the first axis direction rather than dividing by zero
    bad = norms < 1e-300
    if np.any(bad):
        g[bad] = 0.0
        g[bad, 0] = 1.0
        norms = _norm_rows(g, spec)
    return g / norms[:, None]
