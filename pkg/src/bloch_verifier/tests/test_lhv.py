"""
Unit tests for local hidden-variable models.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import TypeAdapter, ValidationError

from bloch_verifier.errors import DomainError
from bloch_verifier.lhv.models import (
    LhvModel,
    deterministic_model,
    e_lr,
    hemispheric_disagreement_model,
    hemispheric_disagreement_value,
    lhv_upper_bound,
    mix_models,
    perfect_mixing_model,
    random_ensemble_model,
    saturating_model,
    scalar_product_lhv,
    simulator_fidelity,
    single_qubit_simulator_model,
)
from bloch_verifier.lhv.responses import (
    ConstantResponse,
    MemberwiseResponse,
    ResponseFunction,
    SignOfCosTheta,
    SignOfDotProduct,
    SignTable,
    ThresholdResponse,
    sign_table,
)
from bloch_verifier.lhv.spec import (
    EnsembleSpec,
    HemisphericSpec,
    MemberSpec,
    RandomEnsembleSpec,
    SaturatingSpec,
    SimulatorSpec,
    build_model,
    reference_scalar_product,
)
from bloch_verifier.models.core import Setting
from bloch_verifier.quadrature.sphere import FOUR_PI, grids_for

NORTH = Setting(theta=0.0)
SOUTH = Setting(theta=math.pi)

component = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
direction = st.tuples(component, component, component).filter(lambda v: math.hypot(*v) > 0.1)


class TestResponses:
    """Test the +-1 response functions."""

    def test_constant(self):
        assert ConstantResponse(value=-1)(NORTH) == -1
        assert ConstantResponse()(SOUTH) == 1

    def test_sign_of_cos_theta(self):
        assert SignOfCosTheta()(NORTH) == 1
        assert SignOfCosTheta()(SOUTH) == -1

    def test_sign_of_zero_is_plus_one(self):
        """n . v = 0 maps to +1."""
        assert SignOfDotProduct(vector=(1.0, 0.0, 0.0))(NORTH) == 1

    def test_zero_vector_rejected(self):
        with pytest.raises(ValidationError):
            SignOfDotProduct(vector=(0.0, 0.0, 0.0))

    def test_threshold(self):
        """+1 iff lambda < (1 + n . b) / 2."""
        response = ThresholdResponse(bloch=(0.0, 0.0, 1.0))
        lambdas = np.array([0.0, 0.5, 0.99])

        assert response.respond(NORTH, lambdas).tolist() == [1, 1, 1]
        assert response.respond(SOUTH, lambdas).tolist() == [-1, -1, -1]
        assert response.respond(Setting(theta=math.pi / 2), lambdas).tolist() == [1, -1, -1]

    def test_threshold_outside_ball(self):
        with pytest.raises(ValidationError):
            ThresholdResponse(bloch=(1.0, 1.0, 0.0))

    def test_sign_table(self, grid):
        """A sampled table reproduces its source on the grid nodes only."""
        table = sign_table(SignOfCosTheta(), grid.settings)

        assert all(table(s) == SignOfCosTheta()(s) for s in grid.settings)
        with pytest.raises(DomainError):
            table(Setting(theta=0.123))

    def test_memberwise_index(self):
        response = MemberwiseResponse(per_member=(ConstantResponse(value=1), ConstantResponse(value=-1)))

        assert response.respond(NORTH, np.array([0.0, 1.0])).tolist() == [1, -1]
        with pytest.raises(DomainError):
            response.respond(NORTH, np.array([2.0]))
        with pytest.raises(DomainError):
            response.respond(NORTH, np.array([0.5]))

    def test_discriminated_parse(self):
        adapter = TypeAdapter(ResponseFunction)

        parsed = adapter.validate_python({"kind": "sign-of-dot-product", "vector": [0, 0, 1]})
        assert isinstance(parsed, SignOfDotProduct)
        table = adapter.validate_python({"kind": "sign-table", "entries": [[0.0, 0.0, -1]]})
        assert isinstance(table, SignTable)
        with pytest.raises(ValidationError):
            adapter.validate_python({"kind": "coin-flip"})


class TestLhvModel:
    """Test model construction and the correlation function."""

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            LhvModel(n_parties=1, weights=(0.5, 0.4), hidden_values=(0.0, 1.0), responses=(SignOfCosTheta(),))

    def test_response_count(self):
        with pytest.raises(ValidationError):
            LhvModel(n_parties=2, weights=(1.0,), hidden_values=(0.0,), responses=(SignOfCosTheta(),))

    def test_from_members(self):
        with pytest.raises(DomainError):
            LhvModel.from_members([])
        with pytest.raises(DomainError):
            LhvModel.from_members([(0.5, [ConstantResponse()]), (0.5, [ConstantResponse()] * 2)])

    def test_members_round_trip(self):
        """Pinned members rebuild a model with the same correlation function."""
        model = hemispheric_disagreement_model(2)
        rebuilt = LhvModel.from_members(model.members())

        for chosen in ([NORTH, NORTH], [NORTH, SOUTH], [SOUTH, SOUTH]):
            assert e_lr(rebuilt, chosen) == e_lr(model, chosen)

    def test_e_lr_values(self):
        """E_LR = (1 + prod sign(cos theta)) / 2 for the hemispheric model."""
        model = hemispheric_disagreement_model(2)

        assert e_lr(model, [NORTH, NORTH]) == 1.0
        assert e_lr(model, [NORTH, SOUTH]) == 0.0
        assert e_lr(model, [SOUTH, SOUTH]) == 1.0

    def test_e_lr_setting_count(self):
        with pytest.raises(DomainError):
            e_lr(saturating_model(2), [NORTH])


class TestScalarProduct:
    """Test (E_LR, E_LR) against its closed forms."""

    @pytest.mark.parametrize("n_parties", [1, 2, 3])
    def test_saturating_model(self, n_parties):
        value = scalar_product_lhv(saturating_model(n_parties), grids_for(n_parties))

        assert value == pytest.approx(lhv_upper_bound(n_parties), rel=1e-12)

    @pytest.mark.parametrize("n_parties", [1, 2, 3])
    def test_hemispheric_model_is_half(self, n_parties):
        """Mixing two deterministic assignments leaves half the bound."""
        value = scalar_product_lhv(hemispheric_disagreement_model(n_parties), grids_for(n_parties))

        assert value == pytest.approx(lhv_upper_bound(n_parties) / 2, rel=1e-12)

    @pytest.mark.parametrize("n_parties", [1, 2, 3])
    def test_hemispheric_model_on_equator_grid(self, n_parties):
        """With odd n_theta the equator node counts as upper hemisphere."""
        grids = grids_for(n_parties, 3, 4)
        value = scalar_product_lhv(hemispheric_disagreement_model(n_parties), grids)

        assert value == pytest.approx(hemispheric_disagreement_value(n_parties, grids), rel=1e-12)

    def test_hemispheric_value_single_sphere(self):
        """Upper weight on the 3x4 grid is (5/9 + 8/9) 2pi = 26pi/9."""
        assert hemispheric_disagreement_value(1, grids_for(1, 3, 4)) == pytest.approx(26 * math.pi / 9, rel=1e-12)
        assert hemispheric_disagreement_value(2, grids_for(2)) == pytest.approx(lhv_upper_bound(2) / 2, rel=1e-12)
        with pytest.raises(DomainError):
            hemispheric_disagreement_value(2, grids_for(1))

    @pytest.mark.parametrize("n_parties", [1, 2])
    def test_perfect_mixing_vanishes(self, n_parties):
        assert scalar_product_lhv(perfect_mixing_model(n_parties), grids_for(n_parties)) == 0.0

    def test_grid_count(self, grid):
        with pytest.raises(DomainError):
            scalar_product_lhv(saturating_model(2), [grid])

    def test_upper_bound(self):
        assert lhv_upper_bound(2) == pytest.approx((4 * math.pi) ** 2)
        with pytest.raises(DomainError):
            lhv_upper_bound(0)

    @given(vectors=st.lists(direction, min_size=1, max_size=2))
    @settings(max_examples=25, deadline=None)
    def test_deterministic_models_saturate(self, vectors):
        """Any single deterministic assignment gives E_LR^2 = 1 everywhere."""
        n = len(vectors)
        model = deterministic_model([SignOfDotProduct(vector=v) for v in vectors])

        assert scalar_product_lhv(model, grids_for(n)) == pytest.approx(lhv_upper_bound(n), rel=1e-12)

    @pytest.mark.parametrize("n_parties", [1, 2, 3])
    def test_random_ensembles_bounded(self, rng, grid, n_parties):
        bound = lhv_upper_bound(n_parties)
        for _ in range(10):
            model = random_ensemble_model(n_parties, int(rng.integers(1, 6)), rng, grid)
            assert scalar_product_lhv(model, grids_for(n_parties)) <= bound * (1 + 1e-12)

    def test_mixture(self):
        """Half saturating, half perfect mixing gives E_LR = s/2 and a quarter of the bound."""
        mixed = mix_models([saturating_model(1), perfect_mixing_model(1)], [0.5, 0.5])

        assert mixed.n_members == 3
        assert scalar_product_lhv(mixed, grids_for(1)) == pytest.approx(FOUR_PI / 4, rel=1e-12)

    @given(p=st.floats(min_value=0.01, max_value=0.99))
    @settings(max_examples=25, deadline=None)
    def test_mixture_is_affine(self, p):
        """E_LR of a mixture is the mixture of E_LR values."""
        first = hemispheric_disagreement_model(2)
        second = deterministic_model([SignOfDotProduct(vector=(1.0, 0.0, 0.0)), ConstantResponse(value=-1)])
        mixture = mix_models([first, second], [p, 1.0 - p])
        for chosen in ([NORTH, SOUTH], [Setting(theta=1.0, phi=2.0), NORTH], [SOUTH, Setting(theta=2.5, phi=5.0)]):
            expected = p * e_lr(first, chosen) + (1.0 - p) * e_lr(second, chosen)
            assert abs(e_lr(mixture, chosen) - expected) <= 1e-12

    def test_mixture_validation(self):
        with pytest.raises(DomainError):
            mix_models([saturating_model(1)], [0.5])
        with pytest.raises(DomainError):
            mix_models([saturating_model(1), saturating_model(2)], [0.5, 0.5])


class TestSimulator:
    """Test the single-qubit threshold model."""

    def test_fidelity(self, grid):
        """E_LR(n) stays within 1/R of n . b."""
        bloch = (0.3, -0.4, 0.5)
        model = single_qubit_simulator_model(bloch, resolution=10_000)

        assert model.n_members == 10_000
        assert simulator_fidelity(model, bloch, grid) <= 1e-4 + 1e-12

    def test_scalar_product(self, grid):
        bloch = (0.3, -0.4, 0.5)
        model = single_qubit_simulator_model(bloch, resolution=10_000)
        reference = (FOUR_PI / 3) * 0.5

        assert scalar_product_lhv(model, [grid]) == pytest.approx(reference, rel=1e-3)

    def test_pure_state_poles(self):
        model = single_qubit_simulator_model((0.0, 0.0, 1.0), resolution=100)

        assert e_lr(model, [NORTH]) == pytest.approx(1.0)
        assert e_lr(model, [SOUTH]) == pytest.approx(-1.0)

    def test_zero_bloch_vector(self, grid):
        """With b = 0 and an even resolution half the hidden values answer +1 everywhere."""
        model = single_qubit_simulator_model((0.0, 0.0, 0.0), resolution=1000)

        assert max(abs(e_lr(model, [s])) for s in grid.settings) <= 1e-12

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            single_qubit_simulator_model((1.0, 1.0, 0.0))
        with pytest.raises(DomainError):
            single_qubit_simulator_model((0.0, 0.0, 1.0), resolution=0)


class TestModelSpecs:
    """Test building models from declarative specs."""

    def test_build_each_kind(self, rng):
        assert build_model(SaturatingSpec(), 2).n_parties == 2
        assert build_model(HemisphericSpec(), 3).n_members == 2
        assert build_model(SimulatorSpec(bloch=(0, 0, 1), resolution=10), 1).n_members == 10
        assert build_model(RandomEnsembleSpec(members=3), 2, rng).n_members == 3

    def test_build_errors(self):
        with pytest.raises(DomainError):
            build_model(SimulatorSpec(bloch=(0, 0, 1)), 2)
        with pytest.raises(DomainError):
            build_model(RandomEnsembleSpec(), 1)
        ensemble = EnsembleSpec(members=[MemberSpec(weight=1.0, responses=[ConstantResponse()])])
        with pytest.raises(DomainError):
            build_model(ensemble, 2)

    def test_reference_values(self):
        assert reference_scalar_product(HemisphericSpec(), 2)[0] == pytest.approx((4 * math.pi) ** 2 / 2)
        assert reference_scalar_product(HemisphericSpec(), 1, grids_for(1, 3, 4))[0] == pytest.approx(26 * math.pi / 9)
        single = EnsembleSpec(members=[MemberSpec(weight=1.0, responses=[SignOfCosTheta()])])
        assert reference_scalar_product(single, 1)[0] == pytest.approx(4 * math.pi)
        assert reference_scalar_product(RandomEnsembleSpec(), 1) is None

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            SaturatingSpec(resolution=10)
