"""Gliding-hump subsequence selection with a perturbation certificate.

Hypotheses: the candidates keep their norms away from zero and their basis
coordinates tend to zero.  The selection walks a coordinate frontier,
picking at each step the smallest-index candidate whose head mass is small
and cutting its tail at the smallest viable breakpoint, so the extracted
blocks have successive disjoint supports.  The chosen subsequence is then
certified equivalent to the block sequence via the perturbation module.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .basis import (
    BasisSystem,
    GrunblumCertificate,
    coefficient_functionals,
    grunblum_certificate,
    make_basis,
)
from .errors import (
    HypothesisError,
    InputError,
    InsufficientCandidatesError,
    NumericalError,
    NumericalInconsistencyError,
    RetriesExceededError,
)
from .norms import NormSpec, SampleConfig, check_vector, norm_value
from .perturbation import PerturbationCertificate, perturbation_lambda


@dataclass(frozen=True)
class CandidateSequence:
    """Candidate vectors with a claimed norm floor delta."""

    vectors: Tuple[np.ndarray, ...]
    delta: float
    norm: NormSpec

    def __post_init__(self):
        if self.delta <= 0:
            raise InputError("delta must be positive")
        vs = tuple(
            check_vector(v, name=f"candidate {i + 1}") for i, v in enumerate(self.vectors)
        )
        if not vs:
            raise InputError("candidate sequence is empty")
        dim = vs[0].size
        for i, v in enumerate(vs):
            if v.size != dim:
                raise InputError(f"candidate {i + 1} has dimension {v.size}, expected {dim}")
            if norm_value(v, self.norm) < self.delta - 1e-12:
                raise InputError(
                    f"candidate {i + 1} has norm below the claimed floor delta={self.delta}"
                )
        object.__setattr__(self, "vectors", vs)

    @property
    def dim(self):
        return self.vectors[0].size

    @property
    def count(self):
        return len(self.vectors)

    def matrix(self):
        return np.column_stack(self.vectors)


@dataclass(frozen=True)
class CoordinateNullReport:
    tail_maxima: np.ndarray  # per coordinate i <= horizon, max over the tail
    exceedance_counts: np.ndarray  # values above tol in the tail, per coordinate
    tol: float
    tail_start: int
    passed: bool
    witness_coordinate: Optional[int]  # 1-based first failing coordinate
    min_candidate_norm: float
    delta: float

    @property
    def norm_floor_ok(self):
        return self.min_candidate_norm >= self.delta - 1e-12


def coordinate_null_check(
    b: BasisSystem,
    c: CandidateSequence,
    tol: float,
    horizon: Optional[int] = None,
    tail_start: int = 1,
) -> CoordinateNullReport:
    """Check the coordinate-null hypothesis against the basis functionals.

    For each coordinate i <= horizon, reports max over candidates n >=
    tail_start of |x_i^*(y_n)|.  A coordinate passes when at most one
    tail value exceeds tol: a single hit followed by decay is what a
    coordinate of a moving-support sequence looks like at finite length,
    while repeated exceedances witness a non-null coordinate.
    """
    if c.dim != b.dim:
        raise InputError(f"candidates have dimension {c.dim}, basis has {b.dim}")
    if tol <= 0:
        raise InputError("tolerance must be positive")
    horizon = b.count if horizon is None else horizon
    if not 1 <= horizon <= b.count:
        raise InputError(f"horizon {horizon} outside 1..{b.count}")
    if not 1 <= tail_start <= c.count:
        raise InputError(f"tail start {tail_start} outside 1..{c.count}")
    functionals = coefficient_functionals(b)
    coords = functionals.duals[:horizon] @ c.matrix()  # (horizon, n_candidates)
    tail = np.abs(coords[:, tail_start - 1 :])
    tail_maxima = np.max(tail, axis=1)
    exceedances = np.sum(tail > tol, axis=1)
    failing = np.flatnonzero(exceedances > 1)
    min_norm = min(norm_value(v, b.norm) for v in c.vectors)
    return CoordinateNullReport(
        tail_maxima=tail_maxima,
        exceedance_counts=exceedances,
        tol=tol,
        tail_start=tail_start,
        passed=failing.size == 0,
        witness_coordinate=int(failing[0]) + 1 if failing.size else None,
        min_candidate_norm=float(min_norm),
        delta=c.delta,
    )


@dataclass(frozen=True)
class BlockSequence:
    """Blocks with successive disjoint supports over the basis."""

    breakpoints: Tuple[int, ...]  # 0 = p_0 < p_1 < ... <= N
    coefficients: Tuple[np.ndarray, ...]  # segment of basis coefficients per block
    blocks: Tuple[np.ndarray, ...]  # ambient block vectors

    def __post_init__(self):
        ps = self.breakpoints
        if not ps or ps[0] != 0:
            raise InputError("breakpoints must start at 0")
        for a, z in zip(ps, ps[1:]):
            if z <= a:
                raise InputError("breakpoints must be strictly increasing")
        if len(self.blocks) != len(ps) - 1:
            raise InputError("one block per breakpoint interval required")
        for k, u in enumerate(self.blocks):
            if not np.any(u):
                raise InputError(f"block {k + 1} is null")


@dataclass(frozen=True)
class SelectionParams:
    """Tuning of the gliding-hump walk; eps0 defaults to delta / 4."""

    delta: float
    eps0: Optional[float] = None
    shrink: float = 0.5
    max_retries: int = 8
    min_blocks: int = 3
    null_tol: Optional[float] = None  # defaults to delta / 2
    horizon: Optional[int] = None
    tail_start: int = 1

    def __post_init__(self):
        if self.delta <= 0:
            raise InputError("delta must be positive")
        if not 0 < self.shrink < 1:
            raise InputError("shrink must lie in (0, 1)")
        if self.min_blocks < 1:
            raise InputError("min_blocks must be >= 1")


@dataclass(frozen=True)
class SelectionResult:
    selected_indices: Tuple[int, ...]  # 1-based candidate indices
    blocks: BlockSequence
    lambda_sel: float
    certificate: PerturbationCertificate
    retries_used: int
    eps_schedule: Tuple[float, ...]  # eps_k used for each accepted block
    block_system: BasisSystem


def _attempt(b, c, coords, eps0, shrink, min_blocks):
    """One pass of the gliding-hump walk at a fixed eps0."""
    n = b.count
    frontier = 0
    used = set()
    picks, breakpoints, segments, blocks, eps_used = [], [0], [], [], []
    for k in range(1, min_blocks + 1):
        eps_k = eps0 * shrink**k
        chosen = None
        for idx in range(c.count):
            if idx in used:
                continue
            head = coords[:frontier, idx]
            head_mass = norm_value(b.matrix[:, :frontier] @ head, b.norm) if frontier else 0.0
            if head_mass <= eps_k / 2.0:
                chosen = idx
                break
        if chosen is None:
            raise InsufficientCandidatesError(
                f"no unused candidate with head mass <= {eps_k / 2.0:.3e} at block "
                f"{k}; built {k - 1} of {min_blocks} blocks",
                blocks_built=k - 1,
            )
        col = coords[:, chosen]
        q = None
        for cut in range(frontier + 1, n + 1):
            tail = col[cut:]
            tail_mass = (
                norm_value(b.matrix[:, cut:] @ tail, b.norm) if cut < n else 0.0
            )
            if tail_mass <= eps_k / 2.0:
                q = cut
                break
        if q is None:
            raise InsufficientCandidatesError(
                f"candidate {chosen + 1} admits no breakpoint with tail mass <= "
                f"{eps_k / 2.0:.3e}; built {k - 1} of {min_blocks} blocks",
                blocks_built=k - 1,
            )
        segment = col[frontier:q].copy()
        u = b.matrix[:, frontier:q] @ segment
        if not np.any(u):
            raise InsufficientCandidatesError(
                f"candidate {chosen + 1} produced a null block", blocks_built=k - 1
            )
        used.add(chosen)
        picks.append(chosen + 1)
        breakpoints.append(q)
        segments.append(segment)
        blocks.append(u)
        eps_used.append(eps_k)
        frontier = q
    block_seq = BlockSequence(
        breakpoints=tuple(breakpoints),
        coefficients=tuple(segments),
        blocks=tuple(blocks),
    )
    return picks, block_seq, eps_used


def gliding_hump_select(
    b: BasisSystem, c: CandidateSequence, params: SelectionParams
) -> SelectionResult:
    """Extract a certified block-equivalent subsequence of the candidates.

    The hypothesis check runs first and failure raises HypothesisError;
    retries shrink the eps schedule geometrically until the selection
    constant certifies below 1.
    """
    tol = params.null_tol if params.null_tol is not None else params.delta / 2.0
    report = coordinate_null_check(
        b, c, tol, horizon=params.horizon, tail_start=params.tail_start
    )
    if not report.passed:
        raise HypothesisError(
            f"coordinate-null hypothesis fails at coordinate "
            f"{report.witness_coordinate} (tail max "
            f"{report.tail_maxima[report.witness_coordinate - 1]:.6g} > tol {tol:.6g})",
            witness_coordinate=report.witness_coordinate,
        )
    if report.min_candidate_norm < params.delta - 1e-12:
        raise HypothesisError(
            f"candidate norm floor {report.min_candidate_norm:.6g} below "
            f"delta {params.delta:.6g}"
        )
    # candidates must decompose exactly in the basis for head/tail splitting
    functionals = coefficient_functionals(b)
    ym = c.matrix()
    coords = functionals.duals @ ym
    recon = b.matrix @ coords
    for i in range(c.count):
        resid = norm_value(recon[:, i] - ym[:, i], b.norm)
        if resid > 1e-8 * max(norm_value(ym[:, i], b.norm), 1e-300):
            raise HypothesisError(
                f"candidate {i + 1} lies outside the basis span "
                f"(residual {resid:.3e})"
            )

    eps0 = params.eps0 if params.eps0 is not None else params.delta / 4.0
    last_failure = None
    for retry in range(params.max_retries + 1):
        try:
            picks, block_seq, eps_used = _attempt(
                b, c, coords, eps0, params.shrink, params.min_blocks
            )
            block_system = make_basis(
                [u for u in block_seq.blocks], b.norm, b.independence_threshold
            )
            selected = [c.vectors[i - 1] for i in picks]
            cert = perturbation_lambda(block_system, selected)
        except (InsufficientCandidatesError, NumericalError) as exc:
            last_failure = exc
            eps0 *= params.shrink
            continue
        if cert.certified:
            return SelectionResult(
                selected_indices=tuple(picks),
                blocks=block_seq,
                lambda_sel=cert.lambda_total,
                certificate=cert,
                retries_used=retry,
                eps_schedule=tuple(eps_used),
                block_system=block_system,
            )
        last_failure = RetriesExceededError(
            f"selection constant {cert.lambda_total:.6g} >= 1 at retry {retry}"
        )
        eps0 *= params.shrink
    if isinstance(last_failure, InsufficientCandidatesError):
        raise last_failure
    raise RetriesExceededError(
        f"no certified selection after {params.max_retries} retries: {last_failure}"
    )


def block_certify(b: BasisSystem, blocks: BlockSequence) -> GrunblumCertificate:
    """Grunblum certificate of the block system; blocks of a basis never
    increase the basis constant."""
    block_system = make_basis([u for u in blocks.blocks], b.norm, b.independence_threshold)
    cert = grunblum_certificate(block_system)
    k_b = grunblum_certificate(b).basis_constant
    if cert.basis_constant > k_b + 1e-6:
        raise NumericalInconsistencyError(
            f"block basis constant {cert.basis_constant} exceeds the parent "
            f"constant {k_b}"
        )
    return cert
