"""
Built-in scenario library.

Zero-config scenarios covering the headline numbers: the 3^N violation ratio,
saturation of the separable bound by pure product states, saturation of the
hidden-variable bound by deterministic models, the slack left by mixing, the
single-qubit simulator and the entangled-state witnesses.
"""

from typing import Dict, List

from ..errors import ConfigError
from ..lhv.spec import HemisphericSpec, PerfectMixingSpec, SaturatingSpec, SimulatorSpec
from ..models.scenario import (
    BellSpec,
    GhzSpec,
    MixedProductSpec,
    RandomProductSpec,
    ScenarioConfig,
)

BUILTIN_SCENARIOS: Dict[str, ScenarioConfig] = {
    config.name: config
    for config in [
        ScenarioConfig(
            name="paper-main",
            description="Ratio of the hidden-variable maximum to the separable maximum",
            parties=[1, 2, 3, 4, 5],
            computations=["ratio"],
        ),
        ScenarioConfig(
            name="bloch-saturation",
            description="Random pure product states reach (4pi/3)^N exactly",
            parties=[1, 2, 3, 4, 5, 6],
            state=RandomProductSpec(pure=True),
            computations=["tensor", "bloch-norm", "exact-scalar-product", "separability"],
            samples=50,
        ),
        ScenarioConfig(
            name="bloch-saturation-quadrature",
            description="Product-grid quadrature of E_Sep^2 agrees with the closed form",
            parties=[1, 2, 3],
            state=RandomProductSpec(pure=True),
            computations=["exact-scalar-product", "numeric-scalar-product"],
            samples=50,
        ),
        ScenarioConfig(
            name="mixed-product-slack",
            description="Mixed factors stay strictly below the separable maximum",
            parties=[1, 2, 3, 4],
            state=RandomProductSpec(pure=False),
            computations=["bloch-norm", "exact-scalar-product", "separability"],
            samples=20,
        ),
        ScenarioConfig(
            name="tensor-recovery",
            description="Projecting E_Sep onto direction cosines recovers T",
            parties=[2],
            state=MixedProductSpec(blochs=[(0.3, 0.4, 0.5), (-0.6, 0.0, 0.8)]),
            computations=["tensor", "numeric-scalar-product", "projected-tensor"],
        ),
        ScenarioConfig(
            name="lhv-saturation",
            description="A deterministic model attains (4pi)^N",
            parties=[1, 2, 3],
            model=SaturatingSpec(),
            computations=["lhv-scalar-product", "lhv-bound"],
        ),
        ScenarioConfig(
            name="lhv-mixing-slack",
            description="Mixing deterministic assignments leaves the bound unsaturated",
            parties=[1, 2, 3],
            model=HemisphericSpec(),
            computations=["lhv-scalar-product", "lhv-bound"],
        ),
        ScenarioConfig(
            name="lhv-perfect-mixing",
            description="Opposite assignments mixed equally cancel to E_LR = 0",
            parties=[1, 2],
            model=PerfectMixingSpec(),
            computations=["lhv-scalar-product"],
        ),
        ScenarioConfig(
            name="single-qubit-simulator",
            description="Threshold model reproducing n . b for a single qubit",
            parties=[1],
            model=SimulatorSpec(bloch=(0.3, -0.4, 0.5), resolution=10_000),
            computations=["lhv-scalar-product", "simulator-fidelity"],
        ),
        ScenarioConfig(
            name="ghz-witness",
            description="GHZ states violate Sigma T^2 <= 1",
            parties=[2, 3, 4, 5, 6],
            state=GhzSpec(),
            computations=["tensor", "separability", "exact-scalar-product"],
        ),
        ScenarioConfig(
            name="bell-witness",
            description="The Bell state has Sigma T^2 = 3",
            parties=[2],
            state=BellSpec(),
            computations=["tensor", "separability", "exact-scalar-product", "numeric-scalar-product"],
        ),
        ScenarioConfig(
            name="ghz-visibility",
            description="White-noise GHZ crosses the witness threshold as N grows",
            parties=[2, 3, 4, 5, 6],
            state=GhzSpec(visibility=0.4),
            computations=["tensor", "separability"],
        ),
        ScenarioConfig(
            name="orthogonality",
            description="Default grid integrates c^a c^b exactly",
            parties=[1],
            computations=["orthogonality"],
        ),
    ]
}


def builtin_names() -> List[str]:
    return list(BUILTIN_SCENARIOS)


def get_builtin(name: str) -> ScenarioConfig:
    """
    Look up a built-in scenario by name.

    Raises:
        ConfigError: If no built-in scenario has that name
    """
    try:
        return BUILTIN_SCENARIOS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown built-in scenario '{name}'; choose from {', '.join(BUILTIN_SCENARIOS)}",
            field="name",
        ) from None
