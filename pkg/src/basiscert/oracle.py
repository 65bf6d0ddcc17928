"""Brute-force estimators used to cross-check every exact computation.

All oracles report certified lower bounds together with a concrete witness
vector; re-evaluating the witness reproduces the reported value.  Local
refinement is derivative-free (coordinate perturbation with step halving)
because the l1 and sup norms are nonsmooth.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .norms import NormSpec, SampleConfig, _norm_rows, gaussian_samples, norm_value

_ASCENT_STOP = 1e-10


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    is_lower_bound: bool
    samples_used: int
    ascent_steps: int
    last_improvement: float
    witness: np.ndarray


def _ratio(apply_matrix, spec, v):
    den = norm_value(v, spec)
    if den < 1e-300:
        return 0.0
    return norm_value(apply_matrix @ v, spec) / den


def _coordinate_ascent(apply_matrix, spec, basis, c0, max_steps):
    """Maximize ||A B c|| / ||B c|| over coefficients c by local search."""
    c = c0.copy()
    best = _ratio(apply_matrix, spec, basis @ c)
    step = 0.5 * max(1.0, float(np.max(np.abs(c))))
    steps = 0
    last_improvement = 0.0
    while steps < max_steps and step > _ASCENT_STOP:
        improved = False
        for j in range(c.size):
            for sgn in (1.0, -1.0):
                trial = c.copy()
                trial[j] += sgn * step
                val = _ratio(apply_matrix, spec, basis @ trial)
                if val > best:
                    last_improvement = val - best
                    best, c = val, trial
                    improved = True
        if not improved:
            step *= 0.5
        steps += 1
    return c, best, steps, last_improvement


def brute_force_operator_norm(
    apply_matrix,
    domain_basis=None,
    spec: NormSpec = None,
    cfg: SampleConfig = SampleConfig(seed=0, count=2000),
    ascent_steps: int = 200,
) -> OracleEstimate:
    """Lower-bound the operator norm of a matrix restricted to a subspace.

    Samples the coefficient space of domain_basis, takes the best ratio
    ||A v|| / ||v||, then refines by coordinate ascent from the best sample
    of each power-of-two sample prefix (so doubling the budget can never
    decrease the result).
    """
    a = np.asarray(apply_matrix, dtype=float)
    if domain_basis is None:
        basis = np.eye(a.shape[1])
    else:
        basis = np.asarray(domain_basis, dtype=float)
    if a.shape[1] != basis.shape[0]:
        raise InputError(
            f"map expects dimension {a.shape[1]}, domain basis has {basis.shape[0]}"
        )
    k = basis.shape[1]
    coeffs = gaussian_samples(k, cfg)
    vs = coeffs @ basis.T
    dens = _norm_rows(vs, spec)
    nums = _norm_rows(vs @ a.T, spec)
    ok = dens > 1e-300
    ratios = np.zeros(cfg.count)
    ratios[ok] = nums[ok] / dens[ok]

    # ascent starts: best sample of each power-of-two prefix
    prefixes = []
    n = min(64, cfg.count)
    while n < cfg.count:
        prefixes.append(n)
        n *= 2
    prefixes.append(cfg.count)
    starts = sorted({int(np.argmax(ratios[:n])) for n in prefixes})

    best_c, best_val = None, -1.0
    total_steps = 0
    last_improvement = 0.0
    for idx in starts:
        c, val, steps, impr = _coordinate_ascent(a, spec, basis, coeffs[idx], ascent_steps)
        total_steps += steps
        if val > best_val:
            best_c, best_val, last_improvement = c, val, impr
    witness = basis @ best_c
    return OracleEstimate(
        value=_ratio(a, spec, witness),
        is_lower_bound=True,
        samples_used=cfg.count,
        ascent_steps=total_steps,
        last_improvement=last_improvement,
        witness=witness,
    )


def grid_ratio_max(numerator_norm, denominator_norm, dim, resolution) -> OracleEstimate:
    """Exhaustive grid maximum of numerator/denominator over the unit sphere.

    numerator_norm and denominator_norm map an (n, dim) array of rows to an
    (n,) array of values.  Cost grows as resolution^(dim-1), so dim <= 3.
    """
    if dim > 3:
        raise InputError(f"grid oracle supports dim <= 3, got {dim}")
    if dim == 1:
        dirs = np.array([[1.0]])
    elif dim == 2:
        # antipodal symmetry: both norms are even, half circle suffices
        theta = np.linspace(0.0, math.pi, int(resolution), endpoint=False)
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        theta = np.linspace(0.0, math.pi, int(resolution), endpoint=False)
        phi = np.linspace(0.0, math.pi, int(resolution), endpoint=False)
        t, p = np.meshgrid(theta, phi, indexing="ij")
        dirs = np.column_stack(
            [
                (np.sin(t) * np.cos(p)).ravel(),
                (np.sin(t) * np.sin(p)).ravel(),
                np.cos(t).ravel(),
            ]
        )
    dens = denominator_norm(dirs)
    ok = dens > 1e-300
    unit = dirs[ok] / dens[ok, None]
    vals = numerator_norm(unit)
    i = int(np.argmax(vals))
    return OracleEstimate(
        value=float(vals[i]),
        is_lower_bound=True,
        samples_used=int(dirs.shape[0]),
        ascent_steps=0,
        last_improvement=0.0,
        witness=unit[i],
    )


def sign_pattern_enumerate(b, per_pattern_norm=None):
    """Exact maximum over all sign patterns of the per-pattern operator norm.

    Returns (value, argmax pattern); ties break to the lexicographically
    smallest pattern with +1 ordered before -1.
    """
    n = b.count
    if n > 20:
        raise InputError(f"sign enumeration limited to N <= 20, got {n}")
    if per_pattern_norm is None:
        from .basis import _sign_pattern_operator_norm

        per_pattern_norm = lambda eps: _sign_pattern_operator_norm(b, eps)[0]
    best_val, best_pattern = -1.0, None
    for pattern in itertools.product((1.0, -1.0), repeat=n):
        val = per_pattern_norm(np.array(pattern))
        if val > best_val:
            best_val, best_pattern = val, pattern
    return best_val, best_pattern
