"""Scikit-learn style facade over the certificate machinery.

Rows of X are vectors (sklearn convention); internally the package works
with column matrices.  The estimators validate input with sklearn's
check_array, expose get_params/set_params, and store results as fitted
attributes with trailing underscores.
"""

from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array

from .basis import (
    coefficient_functionals,
    coefficients,
    eta_analysis,
    grunblum_certificate,
    make_basis,
    unconditional_constant,
)
from .norms import NormSpec, SampleConfig, l2
from .perturbation import perturbation_lambda, perturbed_constant_bound, sandwich_check
from .selection import CandidateSequence, SelectionParams, gliding_hump_select

_NORM_ALIASES = {
    "l1": NormSpec("lp", 1.0),
    "l2": l2(),
    "sup": NormSpec("sup"),
}


def resolve_norm(norm: Union[str, NormSpec]) -> NormSpec:
    if isinstance(norm, NormSpec):
        return norm
    try:
        return _NORM_ALIASES[norm]
    except KeyError:
        raise ValueError(
            f"unknown norm alias {norm!r}; pass a NormSpec or one of "
            f"{sorted(_NORM_ALIASES)}"
        ) from None


def _rows(X):
    return check_array(X, dtype=float, ensure_min_samples=1)


class BasisExpansion(TransformerMixin, BaseEstimator):
    """Fit a basis family; transform recovers expansion coefficients.

    Fitted attributes: basis_constant_, grunblum_constant_,
    projection_norms_, dual_vectors_, dual_norms_, t_norm_, t_inv_norm_.
    """

    def __init__(self, norm="l2", independence_threshold=1e-10):
        self.norm = norm
        self.independence_threshold = independence_threshold

    def fit(self, X, y=None):
        X = _rows(X)
        self.system_ = make_basis(X, resolve_norm(self.norm), self.independence_threshold)
        cert = grunblum_certificate(self.system_)
        functionals = coefficient_functionals(self.system_)
        eta = eta_analysis(self.system_, np.ones(self.system_.count), cert=cert)
        self.certificate_ = cert
        self.basis_constant_ = cert.basis_constant
        self.grunblum_constant_ = cert.grunblum_constant
        self.projection_norms_ = cert.projection_norms
        self.dual_vectors_ = functionals.duals
        self.dual_norms_ = functionals.norms
        self.t_norm_ = eta.t_norm
        self.t_inv_norm_ = eta.t_inv_norm
        return self

    def _check_fitted(self):
        if not hasattr(self, "system_"):
            raise NotFittedError("call fit before using this estimator")

    def transform(self, X):
        self._check_fitted()
        X = _rows(X)
        return np.vstack([coefficients(self.system_, row) for row in X])

    def inverse_transform(self, A):
        self._check_fitted()
        A = _rows(A)
        return A @ self.system_.matrix.T

    def unconditional_constant(self, exact_limit=16):
        self._check_fitted()
        return unconditional_constant(self.system_, exact_limit=exact_limit)


class PerturbationCertifier(BaseEstimator):
    """Certify a perturbed family against a fitted basis family.

    fit(X, Y) computes lambda_, status_, lower_, upper_, perturbed_bound_,
    and, when certified, perturbed_constant_.
    """

    def __init__(self, norm="l2", independence_threshold=1e-10):
        self.norm = norm
        self.independence_threshold = independence_threshold

    def fit(self, X, Y):
        X, Y = _rows(X), _rows(Y)
        self.system_ = make_basis(X, resolve_norm(self.norm), self.independence_threshold)
        cert = perturbation_lambda(self.system_, list(Y))
        self.perturbed_ = list(Y)
        self.certificate_ = cert
        self.lambda_ = cert.lambda_total
        self.status_ = cert.status
        self.lower_ = cert.lower
        self.upper_ = cert.upper
        self.perturbed_bound_ = cert.perturbed_bound
        if cert.certified:
            _, self.perturbed_constant_ = perturbed_constant_bound(
                self.system_, self.perturbed_, cert
            )
        else:
            self.perturbed_constant_ = None
        return self

    def sandwich_report(self, n_samples=10000, seed=0):
        if not hasattr(self, "certificate_"):
            raise NotFittedError("call fit before requesting a sandwich report")
        return sandwich_check(
            self.system_,
            self.perturbed_,
            self.certificate_,
            SampleConfig(seed=seed, count=n_samples),
        )


class GlidingHumpSelector(BaseEstimator):
    """Gliding-hump subsequence selection as an estimator.

    fit(X, Y) selects from candidate rows Y over the basis rows X and
    stores selected_indices_, breakpoints_, lambda_, retries_used_.
    """

    def __init__(
        self,
        norm="l2",
        delta: Optional[float] = None,
        eps0: Optional[float] = None,
        shrink=0.5,
        max_retries=8,
        min_blocks=3,
        independence_threshold=1e-10,
    ):
        self.norm = norm
        self.delta = delta
        self.eps0 = eps0
        self.shrink = shrink
        self.max_retries = max_retries
        self.min_blocks = min_blocks
        self.independence_threshold = independence_threshold

    def fit(self, X, Y):
        X, Y = _rows(X), _rows(Y)
        spec = resolve_norm(self.norm)
        system = make_basis(X, spec, self.independence_threshold)
        from .norms import norm_value

        delta = self.delta
        if delta is None:
            delta = min(norm_value(row, spec) for row in Y)
        candidates = CandidateSequence(vectors=tuple(Y), delta=delta, norm=spec)
        params = SelectionParams(
            delta=delta,
            eps0=self.eps0,
            shrink=self.shrink,
            max_retries=self.max_retries,
            min_blocks=self.min_blocks,
        )
        result = gliding_hump_select(system, candidates, params)
        self.system_ = system
        self.result_ = result
        self.selected_indices_ = result.selected_indices
        self.breakpoints_ = result.blocks.breakpoints
        self.lambda_ = result.lambda_sel
        self.retries_used_ = result.retries_used
        return self
