# Módulo de modelos do simulador
from .configuracao import ExperimentConfig
from .erros import (
    ConfigError,
    ContractViolationError,
    DegeneracyError,
    DegenerateNormalizationError,
    DimensionMismatchError,
    DimensionOverflowError,
    IntegrationQualityError,
    InvalidStateError,
    SimulationError,
    SiteIndexError,
)
from .estados import DensityMatrix, PureState
from .manifesto import RunManifest
from .operador import Operator, SiteIndex
from .parametros import BathParams, ModelParams
from .trajetoria import Branch, EigenSystem, EngineTag, InfluenceFactor, ObservableRecord, Trajectory

__all__ = [
    "Operator",
    "SiteIndex",
    "ModelParams",
    "BathParams",
    "PureState",
    "DensityMatrix",
    "EigenSystem",
    "InfluenceFactor",
    "ObservableRecord",
    "Trajectory",
    "EngineTag",
    "Branch",
    "ExperimentConfig",
    "RunManifest",
    "SimulationError",
    "ConfigError",
    "ContractViolationError",
    "DegeneracyError",
    "DegenerateNormalizationError",
    "DimensionMismatchError",
    "DimensionOverflowError",
    "IntegrationQualityError",
    "InvalidStateError",
    "SiteIndexError",
]
