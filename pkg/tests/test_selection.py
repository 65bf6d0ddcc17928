import numpy as np
import pytest

from basiscert import (
    CandidateSequence,
    HypothesisError,
    InputError,
    SampleConfig,
    SelectionParams,
    block_certify,
    coordinate_null_check,
    generate,
    gliding_hump_select,
    grunblum_certificate,
    l2,
    make_basis,
    norm_value,
    sandwich_check,
)
from basiscert.generators import FamilySpec
from basiscert.norms import NormSpec

SUP = NormSpec("sup")


def canonical(dim):
    return make_basis(np.eye(dim), l2())


def even_supports(dim=8, n=4):
    vs = tuple(np.eye(dim)[2 * k + 1] for k in range(n))
    return CandidateSequence(vectors=vs, delta=1.0, norm=l2())


class TestCoordinateNullCheck:
    def test_disjoint_supports_pass(self):
        report = coordinate_null_check(canonical(8), even_supports(), tol=1e-12)
        assert report.passed
        assert report.witness_coordinate is None
        assert report.min_candidate_norm == pytest.approx(1.0)

    def test_constant_sequence_fails_with_witness(self):
        const = CandidateSequence(
            vectors=tuple(np.eye(8)[0] for _ in range(4)), delta=1.0, norm=l2()
        )
        report = coordinate_null_check(canonical(8), const, tol=1e-12)
        assert not report.passed
        assert report.witness_coordinate == 1

    def test_decaying_coordinate_boundary_pass(self):
        # y_n = e_n + (1/n) e_1 for n = 2..8; the tail starting at y_5
        # (candidate 4) peaks at exactly 1/5 = tol on the first coordinate
        vs = tuple(np.eye(8)[n - 1] + (1.0 / n) * np.eye(8)[0] for n in range(2, 9))
        c = CandidateSequence(vectors=vs, delta=1.0, norm=l2())
        report = coordinate_null_check(canonical(8), c, tol=0.2, tail_start=4)
        assert report.passed
        assert report.tail_maxima[0] == pytest.approx(0.2, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            coordinate_null_check(canonical(4), even_supports(), tol=0.1)


class TestGlidingHump:
    def test_block_candidates_select_immediately(self):
        result = gliding_hump_select(
            canonical(8), even_supports(), SelectionParams(delta=1.0, min_blocks=3)
        )
        assert result.selected_indices == (1, 2, 3)
        assert result.lambda_sel == 0.0
        assert result.certificate.certified
        for k, u in enumerate(result.blocks.blocks):
            np.testing.assert_allclose(u, np.eye(8)[2 * k + 1], atol=1e-12)

    def test_decaying_head_mass(self):
        vs = tuple(np.eye(8)[n - 1] + 0.01 * np.eye(8)[0] for n in range(2, 9))
        c = CandidateSequence(vectors=vs, delta=1.0, norm=l2())
        result = gliding_hump_select(
            canonical(8), c, SelectionParams(delta=1.0, eps0=0.5)
        )
        assert 0.0 < result.lambda_sel < 1.0
        # blocks after the first are plain unit vectors
        for u in result.blocks.blocks[1:]:
            assert np.sum(np.abs(u) > 1e-12) == 1

    def test_constant_candidates_raise_hypothesis_error(self):
        const = CandidateSequence(
            vectors=tuple(np.eye(8)[0] for _ in range(4)), delta=1.0, norm=l2()
        )
        with pytest.raises(HypothesisError) as err:
            gliding_hump_select(canonical(8), const, SelectionParams(delta=1.0))
        assert err.value.witness_coordinate == 1

    def test_successive_blocks_and_head_tail_bound(self):
        c = generate(FamilySpec("moving-support", dim=16, count=6, magnitude=0.01))
        b = canonical(16)
        result = gliding_hump_select(b, c, SelectionParams(delta=c.delta))
        ps = result.blocks.breakpoints
        assert all(a < z for a, z in zip(ps, ps[1:]))
        for idx, u, eps in zip(
            result.selected_indices, result.blocks.blocks, result.eps_schedule
        ):
            y = c.vectors[idx - 1]
            assert norm_value(y - u, b.norm) <= eps + 1e-12

    def test_determinism(self):
        c = generate(FamilySpec("moving-support", dim=16, count=6, magnitude=0.01))
        b = canonical(16)
        r1 = gliding_hump_select(b, c, SelectionParams(delta=c.delta))
        r2 = gliding_hump_select(b, c, SelectionParams(delta=c.delta))
        assert r1.selected_indices == r2.selected_indices
        assert r1.blocks.breakpoints == r2.blocks.breakpoints
        assert r1.lambda_sel == r2.lambda_sel

    def test_certified_sandwich_against_blocks(self):
        c = generate(FamilySpec("moving-support", dim=16, count=6, magnitude=0.01))
        b = canonical(16)
        result = gliding_hump_select(b, c, SelectionParams(delta=c.delta))
        selected = [c.vectors[i - 1] for i in result.selected_indices]
        report = sandwich_check(
            result.block_system, selected, result.certificate,
            SampleConfig(seed=4, count=10000),
        )
        assert report.violations == 0


class TestBlockCertify:
    def test_single_vector_blocks(self):
        result = gliding_hump_select(
            canonical(8), even_supports(), SelectionParams(delta=1.0)
        )
        cert = block_certify(canonical(8), result.blocks)
        assert cert.basis_constant == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_pair_blocks(self):
        from basiscert.selection import BlockSequence

        blocks = BlockSequence(
            breakpoints=(0, 2, 4),
            coefficients=(np.ones(2), np.ones(2)),
            blocks=(np.eye(4)[0] + np.eye(4)[1], np.eye(4)[2] + np.eye(4)[3]),
        )
        cert = block_certify(canonical(4), blocks)
        assert cert.basis_constant == pytest.approx(1.0, abs=1e-9)

    def test_summing_blocks_bounded_by_parent(self):
        from basiscert.selection import BlockSequence

        summing = make_basis(np.tril(np.ones((4, 4))), SUP)
        k_b = grunblum_certificate(summing).basis_constant
        blocks = BlockSequence(
            breakpoints=(0, 2, 4),
            coefficients=(np.array([1.0, 0.5]), np.array([1.0, -0.5])),
            blocks=(
                summing.matrix[:, 0] + 0.5 * summing.matrix[:, 1],
                summing.matrix[:, 2] - 0.5 * summing.matrix[:, 3],
            ),
        )
        cert = block_certify(summing, blocks)
        assert cert.basis_constant <= k_b + 1e-6


class TestCandidateValidation:
    def test_norm_floor_enforced(self):
        with pytest.raises(InputError):
            CandidateSequence(
                vectors=(np.array([0.1, 0.0]),), delta=1.0, norm=l2()
            )

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            CandidateSequence(vectors=(), delta=1.0, norm=l2())
