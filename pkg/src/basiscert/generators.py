"""Seeded families of basis systems and candidate sequences.

canonical: the standard unit vectors.  summing: cumulative-ones vectors,
defaulting to the sup norm (the smallest system whose unconditional
constant exceeds its basis constant).  perturbed: canonical plus seeded
directional noise of a fixed magnitude.  random: well-conditioned seeded
Gaussian vectors.  moving-support: unit vectors with strictly increasing
support plus a decaying first coordinate, the stock input for selection.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .basis import BasisSystem, make_basis
from .errors import IndependenceError, InputError
from .norms import NormSpec, SampleConfig, l2, norm_value, sphere_sample
from .selection import CandidateSequence

FAMILIES = ("canonical", "summing", "perturbed", "random", "moving-support")

_MAX_REDRAWS = 32
_RANDOM_CONDITION_FLOOR = 1e-3


@dataclass(frozen=True)
class FamilySpec:
    family: str
    dim: int
    count: int
    norm: Optional[NormSpec] = None
    magnitude: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.dim < 1 or self.count < 1:
            raise InputError("dim and count must be positive")
        if self.count > self.dim:
            raise InputError(f"count {self.count} exceeds dim {self.dim}")
        if self.magnitude < 0:
            raise InputError("magnitude must be nonnegative")


def _default_norm(spec: FamilySpec) -> NormSpec:
    if spec.norm is not None:
        return spec.norm
    if spec.family == "summing":
        return NormSpec("sup")
    return l2()


def generate(spec: FamilySpec) -> Union[BasisSystem, CandidateSequence]:
    norm = _default_norm(spec)
    norm.check_dim(spec.dim)
    if spec.family == "canonical":
        return make_basis(np.eye(spec.dim)[: spec.count], norm)
    if spec.family == "summing":
        return make_basis(np.tril(np.ones((spec.dim, spec.dim)))[: spec.count], norm)
    if spec.family == "perturbed":
        return _perturbed(spec, norm)
    if spec.family == "random":
        return _random(spec, norm)
    return _moving_support(spec, norm)


def _perturbed(spec: FamilySpec, norm: NormSpec) -> BasisSystem:
    base = np.eye(spec.dim)[: spec.count]
    for attempt in range(_MAX_REDRAWS):
        dirs = sphere_sample(
            spec.dim, norm, SampleConfig(seed=spec.seed + attempt, count=spec.count)
        )
        vectors = base + spec.magnitude * dirs
        try:
            return make_basis(vectors, norm)
        except IndependenceError:
            continue
    raise IndependenceError(
        f"perturbation magnitude {spec.magnitude} produced dependent vectors "
        f"after {_MAX_REDRAWS} redraws"
    )


def _random(spec: FamilySpec, norm: NormSpec) -> BasisSystem:
    for attempt in range(_MAX_REDRAWS):
        gen = np.random.Generator(np.random.Philox(key=int(spec.seed) + attempt))
        vectors = gen.standard_normal((spec.count, spec.dim))
        s = np.linalg.svd(vectors, compute_uv=False)
        if s[-1] / s[0] < _RANDOM_CONDITION_FLOOR:
            continue
        return make_basis(vectors, norm)
    raise IndependenceError(
        f"no well-conditioned random system found after {_MAX_REDRAWS} redraws"
    )


def _moving_support(spec: FamilySpec, norm: NormSpec) -> CandidateSequence:
    # supports sigma(n) = 2n leave coordinate 1 free for the decay term
    if 2 * spec.count > spec.dim:
        raise InputError(
            f"moving-support family needs dim >= 2 * count, got dim={spec.dim} "
            f"count={spec.count}"
        )
    vectors = []
    for i in range(1, spec.count + 1):
        v = np.zeros(spec.dim)
        v[2 * i - 1] = 1.0
        v[0] += spec.magnitude
        vectors.append(v)
    delta = min(norm_value(v, norm) for v in vectors)
    return CandidateSequence(vectors=tuple(vectors), delta=delta, norm=norm)
