"""Finite families of independent vectors treated as a truncated basis.

Everything downstream hangs off the quantities computed here: coefficient
recovery, biorthogonal functionals and their norms, projection norms, the
basis constant K, the Grunblum constant M (equal to K at finite
truncation), the eta partial-sum norm, and the unconditional constant.

Operator norms are computed exactly where a closed form exists (symmetric
eigenproblem for inner-product norms; induced matrix-norm formulas for
full-span l1/sup) and otherwise estimated by the sampling oracle, with the
method and uncertainty always reported.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import (
    IndependenceError,
    InputError,
    NullVectorError,
    NumericalInconsistencyError,
    SpanError,
)
from .norms import (
    NormSpec,
    SampleConfig,
    _norm_rows,
    check_vector,
    dual_norm_value,
    gaussian_samples,
    norm_value,
)
from .oracle import brute_force_operator_norm

DEFAULT_INDEPENDENCE_THRESHOLD = 1e-10
_DEFAULT_ORACLE_CFG = SampleConfig(seed=0, count=2000)

METHOD_SPECTRAL = "exact-spectral"
METHOD_MATRIX = "exact-matrix-norm"
METHOD_ORACLE = "oracle-estimate"
_METHOD_RANK = {METHOD_SPECTRAL: 0, METHOD_MATRIX: 1, METHOD_ORACLE: 2}


@dataclass(frozen=True)
class BasisSystem:
    """N validated, independent vectors (columns of `matrix`) with a norm."""

    matrix: np.ndarray  # shape (d, N)
    norm: NormSpec
    independence_threshold: float = DEFAULT_INDEPENDENCE_THRESHOLD

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def count(self):
        return self.matrix.shape[1]

    def vector(self, i):
        """The i-th basis vector, 1-based."""
        return self.matrix[:, i - 1].copy()

    def prefix(self, n):
        """The sub-system of the first n vectors."""
        if not 1 <= n <= self.count:
            raise InputError(f"prefix length {n} outside 1..{self.count}")
        return BasisSystem(self.matrix[:, :n], self.norm, self.independence_threshold)


def make_basis(vectors, norm: NormSpec, threshold=DEFAULT_INDEPENDENCE_THRESHOLD) -> BasisSystem:
    """Validate and build a BasisSystem from a sequence of vectors."""
    if threshold <= 0:
        raise InputError("independence threshold must be positive")
    vs = [check_vector(v, name=f"vector {i + 1}") for i, v in enumerate(vectors)]
    if not vs:
        raise InputError("a basis system needs at least one vector")
    d = vs[0].size
    for i, v in enumerate(vs):
        if v.size != d:
            raise InputError(f"vector {i + 1} has dimension {v.size}, expected {d}")
    if len(vs) > d:
        raise InputError(f"{len(vs)} vectors cannot be independent in dimension {d}")
    norm.check_dim(d)
    m = np.column_stack(vs)
    for i in range(m.shape[1]):
        if norm_value(m[:, i], norm) == 0.0:
            raise NullVectorError(f"vector {i + 1} is null")
    s = np.linalg.svd(m, compute_uv=False)
    ratio = float(s[-1] / s[0])
    if ratio < threshold:
        raise IndependenceError(
            f"vectors are numerically dependent: singular-value ratio {ratio:.3e} "
            f"below threshold {threshold:.3e}",
            ratio=ratio,
        )
    m = m.copy()
    m.setflags(write=False)
    return BasisSystem(m, norm, threshold)


def coefficients(b: BasisSystem, x) -> np.ndarray:
    """The unique a with sum(a_i x_i) = x, for x in the span."""
    x = check_vector(x, dim=b.dim, name="target vector")
    a, *_ = np.linalg.lstsq(b.matrix, x, rcond=None)
    residual = norm_value(b.matrix @ a - x, b.norm) if b.dim else 0.0
    scale = max(norm_value(x, b.norm), 1e-300)
    if residual > 1e-8 * scale:
        raise SpanError(
            f"vector lies outside the span: relative residual {residual / scale:.3e}"
        )
    return a


def _is_inner_product(spec: NormSpec):
    return spec.kind in ("lp", "wlp") and spec.p == 2.0


def _sqrt_weight(spec: NormSpec, dim):
    if spec.kind == "wlp":
        return np.sqrt(spec.weights)
    return np.ones(dim)


@dataclass(frozen=True)
class CoefficientFunctionals:
    """Biorthogonal dual vectors (rows of `duals`) and their norms."""

    duals: np.ndarray  # shape (N, d); row k represents x_k^* via inner product
    norms: np.ndarray  # shape (N,)


def _nullspace(matrix):
    u, s, vt = np.linalg.svd(matrix.T, full_matrices=True)
    rank = matrix.shape[1]
    return vt[rank:].T  # (d, d - N), orthonormal columns of ker(X^T)


def coefficient_functionals(b: BasisSystem) -> CoefficientFunctionals:
    """Dual functionals with span-restricted norms.

    For N < d the dual vector is the minimal-dual-norm biorthogonal
    extension, which realizes the functional norm on the span: closed form
    for inner-product norms, derivative-free convex minimization over the
    null space otherwise.
    """
    x = b.matrix
    d, n = x.shape
    if n == d:
        duals = np.linalg.inv(x)
    elif _is_inner_product(b.norm):
        w = _sqrt_weight(b.norm, d) ** 2
        z = x * w[:, None]
        gram = x.T @ z
        duals = np.linalg.solve(gram, z.T)
    else:
        base = np.linalg.pinv(x)  # rows are least-squares biorthogonal vectors
        kernel = _nullspace(x)
        duals = np.empty_like(base)
        for k in range(n):
            g0 = base[k]

            def objective(zz, g0=g0):
                return dual_norm_value(g0 + kernel @ zz, b.norm)

            res = scipy.optimize.minimize(
                objective,
                np.zeros(kernel.shape[1]),
                method="Powell",
                options={"xtol": 1e-10, "ftol": 1e-12, "maxiter": 2000},
            )
            duals[k] = g0 + kernel @ res.x
    gram_check = duals @ x
    if not np.allclose(gram_check, np.eye(n), atol=1e-9):
        worst = float(np.max(np.abs(gram_check - np.eye(n))))
        raise NumericalInconsistencyError(
            f"biorthogonality violated by {worst:.3e} (system too ill-conditioned)"
        )
    norms = np.array([dual_norm_value(duals[k], b.norm) for k in range(n)])
    return CoefficientFunctionals(duals=duals, norms=norms)


def _operator_norm_on_span(b: BasisSystem, numerator_matrix, cfg=None):
    """sup over a != 0 of ||numerator_matrix a|| / ||X a||.

    numerator_matrix maps coefficients to ambient vectors, shape (d, N).
    Returns (value, method, uncertainty).
    """
    x = b.matrix
    d, n = x.shape
    if _is_inner_product(b.norm):
        sw = _sqrt_weight(b.norm, d)
        zn = numerator_matrix * sw[:, None]
        zd = x * sw[:, None]
        a = zn.T @ zn
        g = zd.T @ zd
        eigs = scipy.linalg.eigh(a, g, eigvals_only=True)
        return float(math.sqrt(max(eigs[-1], 0.0))), METHOD_SPECTRAL, 0.0
    if n == d and (
        b.norm.kind == "sup" or (b.norm.kind == "lp" and b.norm.p in (1.0, math.inf))
    ):
        c = numerator_matrix @ np.linalg.inv(x)
        if b.norm.kind == "lp" and b.norm.p == 1.0:
            value = float(np.max(np.sum(np.abs(c), axis=0)))
        else:
            value = float(np.max(np.sum(np.abs(c), axis=1)))
        return value, METHOD_MATRIX, 0.0
    cfg = cfg or _DEFAULT_ORACLE_CFG
    est = brute_force_operator_norm(
        numerator_matrix @ np.linalg.pinv(x), domain_basis=x, spec=b.norm, cfg=cfg
    )
    return est.value, METHOD_ORACLE, est.last_improvement


def projection_norm(b: BasisSystem, m: int, cfg=None) -> Tuple[float, str, float]:
    """||P_m|| on the span: sup ||sum_{i<=m} a_i x_i|| / ||sum_i a_i x_i||."""
    if not 1 <= m <= b.count:
        raise InputError(f"projection index {m} outside 1..{b.count}")
    num = b.matrix.copy()
    num[:, m:] = 0.0
    return _operator_norm_on_span(b, num, cfg=cfg)


def _sign_pattern_operator_norm(b: BasisSystem, eps, cfg=None):
    """Operator norm of a |-> sum(eps_i a_i x_i) on the span."""
    return _operator_norm_on_span(b, b.matrix * np.asarray(eps, dtype=float), cfg=cfg)


def _worst_method(methods):
    return max(methods, key=lambda m: _METHOD_RANK[m])


@dataclass(frozen=True)
class GrunblumCertificate:
    """Projection norms, the basis constant K, and the Grunblum constant M.

    At finite truncation M = K: the sup of ||P_m z|| / ||z|| over pairs
    m <= n equals the sup over m alone because coefficients past n may be
    taken to vanish.
    """

    projection_norms: np.ndarray
    basis_constant: float
    grunblum_constant: float
    method: str
    uncertainty: float
    projection_methods: Tuple[str, ...]
    projection_uncertainties: np.ndarray


def grunblum_certificate(b: BasisSystem, cfg=None) -> GrunblumCertificate:
    values, methods, uncertainties = [], [], []
    for m in range(1, b.count + 1):
        v, meth, unc = projection_norm(b, m, cfg=cfg)
        values.append(v)
        methods.append(meth)
        uncertainties.append(unc)
    k = float(max(values))
    return GrunblumCertificate(
        projection_norms=np.array(values),
        basis_constant=k,
        grunblum_constant=k,
        method=_worst_method(methods),
        uncertainty=float(max(uncertainties)),
        projection_methods=tuple(methods),
        projection_uncertainties=np.array(uncertainties),
    )


@dataclass(frozen=True)
class EtaAnalysis:
    """Partial-sum sup norm of one coefficient vector plus the two
    coefficient-map operator norms of the system."""

    eta_value: float
    t_norm: float
    t_inv_norm: float


def partial_sum_norms(b: BasisSystem, a) -> np.ndarray:
    """Norms of the n-th partial sums, n = 1..N."""
    a = np.asarray(a, dtype=float)
    if a.shape != (b.count,):
        raise InputError(f"coefficient vector has shape {a.shape}, expected ({b.count},)")
    partials = np.cumsum(b.matrix * a, axis=1)
    return _norm_rows(partials.T, b.norm)


def eta_value(b: BasisSystem, a) -> float:
    """eta(a) = max over n of ||sum_{i<=n} a_i x_i||; 0 for a = 0."""
    return float(np.max(partial_sum_norms(b, a)))


def eta_analysis(
    b: BasisSystem, a, cert: Optional[GrunblumCertificate] = None
) -> EtaAnalysis:
    """eta of the given coefficients plus the coefficient-map norms.

    t_norm is sup ||sum a_i x_i|| / eta(a), exactly 1 at finite truncation
    (one-term coefficient vectors attain it); t_inv_norm is the converse
    sup and equals the basis constant K.
    """
    eta = eta_value(b, a)
    probes = list(np.eye(b.count))
    probes.extend(gaussian_samples(b.count, SampleConfig(seed=0, count=200)))
    t_norm = 0.0
    for p in probes:
        e = eta_value(b, p)
        if e > 1e-300:
            t_norm = max(t_norm, norm_value(b.matrix @ p, b.norm) / e)
    if cert is None:
        cert = grunblum_certificate(b)
    return EtaAnalysis(eta_value=eta, t_norm=t_norm, t_inv_norm=cert.basis_constant)


def unconditional_constant(
    b: BasisSystem, exact_limit: int = 16, cfg: Optional[SampleConfig] = None
) -> Tuple[float, str, float]:
    """sup over sign patterns and coefficients of the sign-flip norm ratio.

    Exact enumeration of all sign patterns when N <= exact_limit (a pattern
    and its negation give the same operator norm, so only half are
    evaluated); seeded random pattern sampling beyond that.
    """
    n = b.count
    if n <= exact_limit:
        best, methods, uncertainties = -1.0, [], []
        for bits in range(2 ** (n - 1)):
            eps = np.ones(n)
            for j in range(n - 1):
                if bits >> j & 1:
                    eps[j + 1] = -1.0
            v, meth, unc = _sign_pattern_operator_norm(b, eps)
            methods.append(meth)
            uncertainties.append(unc)
            best = max(best, v)
        return best, _worst_method(methods), float(max(uncertainties))
    cfg = cfg or SampleConfig(seed=0, count=256)
    gen = np.random.Generator(np.random.Philox(key=int(cfg.seed)))
    best, last_improvement = -1.0, 0.0
    for _ in range(cfg.count):
        eps = np.where(gen.random(n) < 0.5, -1.0, 1.0)
        v, _, _ = _sign_pattern_operator_norm(b, eps)
        if v > best:
            last_improvement = v - best if best >= 0 else 0.0
            best = v
    return best, METHOD_ORACLE, last_improvement
