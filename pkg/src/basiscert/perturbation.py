"""Perturbation certificates: the small-perturbation constant lambda,
the two-sided sandwich comparison, and the perturbed basis-constant bound.

lambda = sum_i ||x_i - y_i|| * ||x_i^*||.  When lambda < 1 the perturbed
family is equivalent to the original with sandwich constants (1 - lambda)
and (1 + lambda), and its basis constant is at most
(1 + lambda) * M / (1 - lambda).  lambda >= 1 is a refusal, not an error.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .basis import (
    BasisSystem,
    GrunblumCertificate,
    coefficient_functionals,
    grunblum_certificate,
    make_basis,
)
from .errors import InputError, NumericalError, NumericalInconsistencyError
from .norms import SampleConfig, _norm_rows, check_vector, gaussian_samples, norm_value

STATUS_CERTIFIED = "certified"
STATUS_REFUSED = "refused"


@dataclass(frozen=True)
class PerturbationCertificate:
    lambda_total: float
    lower: float  # 1 - lambda
    upper: float  # 1 + lambda
    perturbed_bound: Optional[float]  # (1 + lambda) M / (1 - lambda); None if refused
    status: str
    per_term: Tuple[Tuple[float, float], ...]  # (||x_i - y_i||, ||x_i^*||)

    @property
    def certified(self):
        return self.status == STATUS_CERTIFIED


def _candidate_matrix(b: BasisSystem, y):
    vs = [check_vector(v, dim=b.dim, name=f"candidate {i + 1}") for i, v in enumerate(y)]
    if len(vs) != b.count:
        raise InputError(f"expected {b.count} candidate vectors, got {len(vs)}")
    return np.column_stack(vs)


def perturbation_lambda(
    b: BasisSystem,
    y,
    cert: Optional[GrunblumCertificate] = None,
    functionals=None,
) -> PerturbationCertificate:
    """Certificate for the perturbed family y against the system b."""
    ym = _candidate_matrix(b, y)
    if functionals is None:
        functionals = coefficient_functionals(b)
    per_term = []
    for i in range(b.count):
        diff = norm_value(ym[:, i] - b.matrix[:, i], b.norm)
        per_term.append((diff, float(functionals.norms[i])))
    lam = float(sum(d * f for d, f in per_term))
    certified = lam < 1.0
    bound = None
    if certified:
        if cert is None:
            cert = grunblum_certificate(b)
        bound = (1.0 + lam) * cert.grunblum_constant / (1.0 - lam)
    return PerturbationCertificate(
        lambda_total=lam,
        lower=1.0 - lam,
        upper=1.0 + lam,
        perturbed_bound=bound,
        status=STATUS_CERTIFIED if certified else STATUS_REFUSED,
        per_term=tuple(per_term),
    )


@dataclass(frozen=True)
class SandwichReport:
    samples: int
    slack_lower: float  # min of ||sum a y|| - (1 - lambda) ||sum a x||
    slack_upper: float  # min of (1 + lambda) ||sum a x|| - ||sum a y||
    violations: int
    worst_coefficients: Optional[np.ndarray]

    @property
    def passed(self):
        return self.violations == 0


def sandwich_check(
    b: BasisSystem, y, cert: PerturbationCertificate, cfg: SampleConfig, eps=1e-9
) -> SandwichReport:
    """Sampled verification of the two-sided sandwich inequality."""
    if not cert.certified:
        raise InputError("sandwich check requires a certified perturbation")
    ym = _candidate_matrix(b, y)
    a = gaussian_samples(b.count, cfg)
    nx = _norm_rows(a @ b.matrix.T, b.norm)
    ny = _norm_rows(a @ ym.T, b.norm)
    lo = ny - cert.lower * nx
    hi = cert.upper * nx - ny
    slack_lower = float(np.min(lo))
    slack_upper = float(np.min(hi))
    bad = np.flatnonzero(np.minimum(lo, hi) < -eps)
    worst = None
    if bad.size:
        worst = a[int(bad[np.argmin(np.minimum(lo, hi)[bad])])]
    return SandwichReport(
        samples=cfg.count,
        slack_lower=slack_lower,
        slack_upper=slack_upper,
        violations=int(bad.size),
        worst_coefficients=worst,
    )


def perturbed_constant_bound(
    b: BasisSystem, y, cert: PerturbationCertificate
) -> Tuple[float, float]:
    """((1 + lambda) M / (1 - lambda), directly computed K of the y-system)."""
    if not cert.certified:
        raise InputError("perturbed-constant bound requires a certified perturbation")
    ym = _candidate_matrix(b, y)
    try:
        y_system = make_basis(ym.T, b.norm, b.independence_threshold)
    except NumericalError as exc:
        raise NumericalInconsistencyError(
            f"certified perturbation fails independence validation: {exc}"
        ) from exc
    k_y = grunblum_certificate(y_system).basis_constant
    bound = cert.perturbed_bound
    if k_y > bound + 1e-6:
        raise NumericalInconsistencyError(
            f"perturbed basis constant {k_y} exceeds certified bound {bound}"
        )
    return bound, k_y
