import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdpamp.channels import (
    ChannelSpec,
    KrausChannel,
    apply,
    apply_matrix,
    bloch_rep,
    build_channel,
    choi,
    compose,
    depolarize_exact,
    depolarizing_channel,
    dobrushin_estimate,
    doeblin_check,
    doeblin_to_dobrushin,
    gad_channel,
    identity_channel,
    pad_channel,
    pd_channel,
    unitary_channel,
)
from qdpamp.errors import UnsupportedDimensionError, ValidationError
from qdpamp.linalg import (
    DensityMatrix,
    PureState,
    is_psd,
    operator_norm_inf,
    random_density_matrix,
    random_pure_state,
    trace_distance,
)

KET0 = PureState.basis_state(2, 0).density()
KET1 = PureState.basis_state(2, 1).density()


def random_channel(rng, dim=2, kraus_rank=None):
    """Random channel from a Haar-ish Stinespring isometry."""
    k = kraus_rank or dim
    g = rng.normal(size=(dim * k, dim)) + 1j * rng.normal(size=(dim * k, dim))
    q, _ = np.linalg.qr(g)
    ops = tuple(q[i * dim : (i + 1) * dim, :] for i in range(k))
    return KrausChannel(ops)


class TestBuildChannel:
    def test_depolarizing_zero_is_identity(self):
        ch = depolarizing_channel(0.0)
        assert len(ch.ops) == 1
        assert ch.ops[0] == pytest.approx(np.eye(2))

    def test_gad_completeness_exact(self):
        for p in np.linspace(0, 1, 11):
            for g in np.linspace(0, 1, 11):
                ch = gad_channel(p, g)
                total = sum(op.conj().T @ op for op in ch.ops)
                assert np.max(np.abs(total - np.eye(2))) < 1e-12

    def test_printed_phase_damping_pair_rejected(self):
        # diag(1, sqrt(lam)) with diag(0, sqrt(lam)) sums to diag(1, 2 lam)
        lam = 0.7
        bad = (
            np.diag([1.0, np.sqrt(lam)]).astype(complex),
            np.diag([0.0, np.sqrt(lam)]).astype(complex),
        )
        with pytest.raises(ValidationError):
            KrausChannel(bad)

    def test_corrected_phase_damping_validates(self):
        ch = pd_channel(0.7)
        total = sum(op.conj().T @ op for op in ch.ops)
        assert np.max(np.abs(total - np.eye(2))) < 1e-15

    def test_parameter_out_of_range(self):
        with pytest.raises(ValidationError):
            depolarizing_channel(1.5)

    def test_unsupported_dimension(self):
        with pytest.raises(UnsupportedDimensionError):
            depolarizing_channel(0.5, dim=16)

    def test_weyl_depolarizing_matches_affine(self):
        rng = np.random.default_rng(5)
        for dim in (3, 4, 8):
            ch = depolarizing_channel(0.35, dim=dim)
            rho = random_density_matrix(dim, rng)
            assert np.max(
                np.abs(apply_matrix(ch, rho.matrix) - depolarize_exact(rho.matrix, 0.35, dim))
            ) < 1e-12

    def test_build_from_spec_json(self):
        ch = build_channel(ChannelSpec.from_json('{"kind":"pad","p":0.2,"gamma":0.3,"lambda":0.4}'))
        assert ch.dim_in == 2 and ch.trace_preserving
        bare = build_channel(ChannelSpec.from_json("identity"))
        assert len(bare.ops) == 1


class TestApply:
    def test_identity(self):
        rho = random_density_matrix(2, np.random.default_rng(0))
        assert np.max(np.abs(apply(identity_channel(), rho).matrix - rho.matrix)) < 1e-12

    def test_fully_depolarizing(self):
        out = apply(depolarizing_channel(1.0), KET0)
        assert out.matrix == pytest.approx(np.eye(2) / 2, abs=1e-12)

    def test_half_depolarizing_on_ket0(self):
        out = apply(depolarizing_channel(0.5), KET0)
        assert np.diag(out.matrix).real == pytest.approx([0.75, 0.25], abs=1e-12)

    def test_matches_affine_evaluator(self):
        rng = np.random.default_rng(1)
        for p in (0.1, 0.5, 0.9):
            rho = random_density_matrix(2, rng)
            got = apply(depolarizing_channel(p), rho).matrix
            assert np.max(np.abs(got - depolarize_exact(rho.matrix, p, 2))) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            apply(identity_channel(2), DensityMatrix.maximally_mixed(3))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_contraction(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(rng)
        rho = random_density_matrix(2, rng)
        sigma = random_density_matrix(2, rng)
        assert trace_distance(apply(ch, rho), apply(ch, sigma)) <= (
            trace_distance(rho, sigma) + 1e-9
        )


class TestCompose:
    def test_identity_composition(self):
        ch = gad_channel(0.4, 0.6)
        both = compose(identity_channel(), ch)
        rng = np.random.default_rng(2)
        for _ in range(10):
            rho = random_density_matrix(2, rng)
            assert np.max(np.abs(apply(both, rho).matrix - apply(ch, rho).matrix)) < 1e-12

    def test_gad_after_pd_equals_pad(self):
        rng = np.random.default_rng(3)
        gad, pd = gad_channel(0.3, 0.5), pd_channel(0.7)
        pad = pad_channel(0.3, 0.5, 0.7)
        composed = compose(gad, pd)
        for _ in range(100):
            rho = random_density_matrix(2, rng)
            assert np.max(np.abs(apply(composed, rho).matrix - apply(pad, rho).matrix)) < 1e-10

    def test_fully_depolarizing_absorbs(self):
        ch = compose(depolarizing_channel(1.0), gad_channel(0.2, 0.9))
        rho = random_density_matrix(2, np.random.default_rng(4))
        assert apply(ch, rho).matrix == pytest.approx(np.eye(2) / 2, abs=1e-12)

    def test_associativity_on_states(self):
        rng = np.random.default_rng(5)
        a, b, c = gad_channel(0.2, 0.3), pd_channel(0.4), depolarizing_channel(0.5)
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        for _ in range(10):
            rho = random_density_matrix(2, rng)
            assert np.max(np.abs(apply(left, rho).matrix - apply(right, rho).matrix)) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            compose(identity_channel(2), identity_channel(3))


class TestBlochRep:
    def test_depolarizing(self):
        rep = bloch_rep(depolarizing_channel(0.25))
        assert rep.T == pytest.approx(0.75 * np.eye(3), abs=1e-12)
        assert rep.t == pytest.approx(np.zeros(3), abs=1e-12)
        assert rep.unital

    def test_unitary_is_rotation(self):
        theta = 0.6
        u = np.array(
            [[np.cos(theta / 2), -1j * np.sin(theta / 2)],
             [-1j * np.sin(theta / 2), np.cos(theta / 2)]]
        )
        rep = bloch_rep(unitary_channel(u))
        assert operator_norm_inf(rep.T) == pytest.approx(1.0, abs=1e-10)
        assert rep.T @ rep.T.T == pytest.approx(np.eye(3), abs=1e-10)
        assert rep.t == pytest.approx(np.zeros(3), abs=1e-12)

    def test_full_excitation_gad(self):
        g = 0.36
        rep = bloch_rep(gad_channel(1.0, g))
        assert np.diag(rep.T) == pytest.approx([np.sqrt(1 - g), np.sqrt(1 - g), 1 - g], abs=1e-12)
        assert rep.t == pytest.approx([0, 0, g], abs=1e-12)
        assert not rep.unital

    def test_requires_qubit(self):
        with pytest.raises(UnsupportedDimensionError):
            bloch_rep(identity_channel(3))


class TestDobrushin:
    def test_identity(self):
        assert dobrushin_estimate(identity_channel()) == pytest.approx(1.0, abs=1e-12)

    def test_fully_depolarizing(self):
        assert dobrushin_estimate(depolarizing_channel(1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_depolarizing_grid(self):
        for p in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert dobrushin_estimate(depolarizing_channel(p)) == pytest.approx(1 - p, abs=1e-3)

    def test_grid_path_agrees_with_shortcut(self):
        for p in (0.25, 0.6):
            exact = dobrushin_estimate(depolarizing_channel(p), method="exact")
            numeric = dobrushin_estimate(depolarizing_channel(p), method="grid", grid=(32, 16))
            assert abs(exact - numeric) < 1e-3

    def test_exact_shortcut_rejects_non_unital(self):
        with pytest.raises(ValidationError):
            dobrushin_estimate(gad_channel(1.0, 0.5), method="exact")

    def test_non_unital_channel(self):
        # contraction of GAD is the largest transfer-matrix singular value
        g = 0.51
        est = dobrushin_estimate(gad_channel(1.0, g), grid=(32, 16), refine_iters=10)
        assert est == pytest.approx(np.sqrt(1 - g), abs=1e-3)

    def test_result_clamped(self):
        rng = np.random.default_rng(6)
        for _ in range(5):
            est = dobrushin_estimate(random_channel(rng), grid=(16, 8), refine_iters=5)
            assert 0.0 <= est <= 1.0


class TestDoeblin:
    def test_fully_depolarizing_full_weight(self):
        assert doeblin_check(depolarizing_channel(1.0), 1.0, np.eye(2) / 2)

    def test_identity_rejects_any_weight(self):
        assert not doeblin_check(identity_channel(), 0.1, np.eye(2) / 2)
        assert not doeblin_check(identity_channel(), 0.9, np.diag([1.0, 0.0]))

    def test_zero_weight_always_passes(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            assert doeblin_check(random_channel(rng), 0.0, np.eye(2) / 2)

    def test_rejects_bad_y(self):
        with pytest.raises(ValidationError):
            doeblin_check(identity_channel(), 0.5, np.diag([1.0, -0.2]))
        with pytest.raises(ValidationError):
            doeblin_check(identity_channel(), 0.5, np.eye(2))  # trace 2

    def test_implied_contraction(self):
        assert doeblin_to_dobrushin(0.25) == 0.75

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_pass_implies_contraction_bound(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(rng)
        y = np.eye(2) / 2
        for g in (0.2, 0.5, 0.8):
            if doeblin_check(ch, g, y):
                assert dobrushin_estimate(ch, grid=(32, 16), refine_iters=10) <= (1 - g) + 1e-3


class TestChoi:
    def test_identity_choi(self):
        eigs = np.linalg.eigvalsh(choi(identity_channel()))
        assert eigs == pytest.approx([0, 0, 0, 2], abs=1e-12)

    def test_fully_depolarizing_choi(self):
        assert choi(depolarizing_channel(1.0)) == pytest.approx(np.kron(np.eye(2), np.eye(2) / 2), abs=1e-12)

    def test_always_psd(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            assert is_psd(choi(random_channel(rng, kraus_rank=3)), tol=1e-10)
