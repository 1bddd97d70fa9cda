"""
Módulo de Configuração - Esquema do arquivo de experimento (JSON).

Seções: model, bath, run, rate_function, magnetization, output. Chaves
desconhecidas, tipos errados e valores fora da faixa viram ConfigError
com o caminho da chave ('bath.gamma0: ...').
"""

import copy
import math
from typing import Any, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    StrictFloat,
    StrictInt,
    StrictStr,
    ValidationError,
    model_validator,
)

from .erros import ConfigError
from .operador import MAX_SPINS_PADRAO
from .parametros import BathParams, ModelParams

_BASE = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)


class ModelSection(BaseModel):
    """Parâmetros do anel (unidades de Ω)."""
    model_config = _BASE

    N_A: StrictInt = Field(ge=2)
    N_B: StrictInt = Field(ge=2)
    tau: StrictFloat
    H_field: StrictFloat
    nu: StrictFloat = 0.0
    max_spins: StrictInt = Field(default=MAX_SPINS_PADRAO, ge=2)

    @model_validator(mode="after")
    def _limite_de_spins(self) -> "ModelSection":
        if self.N_A + self.N_B > self.max_spins:
            raise ValueError(
                f"N_A + N_B = {self.N_A + self.N_B} excede max_spins = {self.max_spins}"
            )
        return self

    def to_params(self) -> ModelParams:
        return ModelParams(self.N_A, self.N_B, self.tau, self.H_field, self.nu, self.max_spins)


class BathSection(BaseModel):
    """Banhos de defasagem; beta_NMB ausente ou null significa temperatura nula."""
    model_config = _BASE

    gamma0: StrictFloat = Field(default=0.0, ge=0.0)
    h: StrictFloat = Field(default=0.0, ge=0.0)
    z: StrictFloat = Field(default=0.1, gt=0.0)
    M: StrictInt = Field(default=60, ge=1)
    beta_NMB: Optional[StrictFloat] = Field(default=None, gt=0.0)
    Omega: StrictFloat = Field(default=1.0, gt=0.0)

    def to_params(self) -> BathParams:
        beta = math.inf if self.beta_NMB is None else self.beta_NMB
        return BathParams(self.gamma0, self.h, self.z, self.M, beta, self.Omega)


class RunSection(BaseModel):
    model_config = _BASE

    engine: Literal["exact", "lindblad", "both"] = "exact"
    periods: StrictInt = Field(default=1, ge=1)
    samples_per_period: StrictInt = Field(default=2000, ge=1)
    rk4_steps_per_sample: StrictInt = Field(default=10, ge=1)
    store_states: Literal["none", "periods", "all"] = "periods"
    lindblad_frame: Literal["eigen", "computational"] = "computational"


class RateFunctionSection(BaseModel):
    model_config = _BASE

    denominator: Literal["total", "chain_A"] = "total"


class MagnetizationSection(BaseModel):
    model_config = _BASE

    sites: Literal["chain_A", "ring"] = "chain_A"


class OutputSection(BaseModel):
    model_config = _BASE

    path: StrictStr = "resultados"
    precision: StrictInt = Field(default=12, ge=1, le=17)


class ExperimentConfig(BaseModel):
    """
    Configuração completa de um experimento de quench.

    Attributes:
        name: Nome do experimento (prefixo dos arquivos de saída)
    """
    model_config = _BASE

    name: StrictStr = "experimento"
    model: ModelSection
    bath: BathSection = BathSection()
    run: RunSection = RunSection()
    rate_function: RateFunctionSection = RateFunctionSection()
    magnetization: MagnetizationSection = MagnetizationSection()
    output: OutputSection = OutputSection()

    # ==================== PROPRIEDADES ====================

    @property
    def ring_params(self) -> ModelParams:
        return self.model.to_params()

    @property
    def bath_params(self) -> BathParams:
        return self.bath.to_params()

    @property
    def n_samples(self) -> int:
        """Amostras incluindo t = 0."""
        return self.run.periods * self.run.samples_per_period + 1

    # ==================== MÉTODOS ====================

    def with_value(self, axis: str, valor: Any) -> "ExperimentConfig":
        """
        Cópia com a chave numérica `axis` (ex. 'bath.gamma0') trocada.

        Raises:
            ConfigError: Se a chave não existir ou não for numérica
        """
        dados = self.to_dict()
        secao, _, chave = axis.partition(".")
        alvo = dados.get(secao)
        if not chave or not isinstance(alvo, dict) or chave not in alvo:
            raise ConfigError(axis, "chave inexistente")
        atual = alvo[chave]
        numerica = isinstance(atual, (int, float)) and not isinstance(atual, bool)
        if not numerica and not (secao == "bath" and chave == "beta_NMB"):
            raise ConfigError(axis, "a varredura exige uma chave numérica")
        alvo[chave] = valor
        return ExperimentConfig.from_dict(dados)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """
        Valida um dicionário de configuração.

        Raises:
            ConfigError: Com o caminho da primeira chave inválida
        """
        if not isinstance(data, dict):
            raise ConfigError("", "a configuração deve ser um objeto JSON")
        try:
            return cls.model_validate(copy.deepcopy(data))
        except ValidationError as exc:
            erro = exc.errors()[0]
            caminho = ".".join(str(parte) for parte in erro["loc"])
            raise ConfigError(caminho, erro["msg"]) from None
