"""
Módulo de Trajetória - Autossistema simultâneo, fatores de influência,
registros de observáveis e trajetórias produzidas pelos motores.
"""

import math
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .erros import ContractViolationError, DimensionMismatchError, InvalidStateError
from .estados import DensityMatrix
from .parametros import BathParams, ModelParams

TOL_UNITARIA = 1e-10
TOL_REGISTRO = 1e-8


class EngineTag(Enum):
    """Motor que produziu a trajetória."""
    EXACT = "exact"
    LINDBLAD = "lindblad"


class Branch(Enum):
    """Ramo d ∈ {+, −} que minimiza a função taxa."""
    PLUS = "+"
    MINUS = "-"


class EigenSystem:
    """
    Diagonalização simultânea de (Ĥ^S, Ĵ).

    Attributes:
        energies: Autoenergias E_α
        current_values: Autovalores de corrente V^(α)
        basis: Matriz unitária cujas colunas são |E_α⟩
    """

    def __init__(self, energies: np.ndarray, current_values: np.ndarray, basis: np.ndarray):
        energias = np.array(energies, dtype=float)
        correntes = np.array(current_values, dtype=float)
        base = np.array(basis, dtype=complex)
        dim = energias.shape[0]
        if correntes.shape != (dim,) or base.shape != (dim, dim):
            raise DimensionMismatchError(
                f"Formas incompatíveis: energias {energias.shape}, "
                f"correntes {correntes.shape}, base {base.shape}."
            )
        desvio = np.max(np.abs(base.conj().T @ base - np.eye(dim)))
        if desvio > TOL_UNITARIA:
            raise ContractViolationError(f"Base não unitária (desvio {desvio:.3g}).")
        for arr in (energias, correntes, base):
            arr.flags.writeable = False
        self._energies = energias
        self._current_values = correntes
        self._basis = base

    @property
    def dim(self) -> int:
        return self._energies.shape[0]

    @property
    def energies(self) -> np.ndarray:
        return self._energies

    @property
    def current_values(self) -> np.ndarray:
        return self._current_values

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    def to_eigenbasis(self, matriz: np.ndarray) -> np.ndarray:
        """U† A U."""
        return self._basis.conj().T @ matriz @ self._basis

    def from_eigenbasis(self, matriz: np.ndarray) -> np.ndarray:
        """U A U†."""
        return self._basis @ matriz @ self._basis.conj().T

    def __repr__(self) -> str:
        return f"EigenSystem(dim={self.dim})"


class InfluenceFactor:
    """
    Fatores de influência F_αβ(t) para todos os pares de autoíndices.

    Invariantes: |F_αβ| ≤ 1 e F_αα = 1 exatamente.
    """

    def __init__(self, t: float, valores: np.ndarray):
        matriz = np.array(valores, dtype=complex)
        if matriz.ndim != 2 or matriz.shape[0] != matriz.shape[1]:
            raise DimensionMismatchError("Fatores de influência devem formar matriz quadrada.")
        if np.any(np.abs(matriz) > 1.0 + 1e-12):
            raise InvalidStateError("Fator de influência com módulo maior que 1.")
        if not np.all(np.diag(matriz) == 1.0):
            raise InvalidStateError("Fatores diagonais F_αα devem ser exatamente 1.")
        matriz.flags.writeable = False
        self._t = float(t)
        self._valores = matriz

    @property
    def t(self) -> float:
        return self._t

    @property
    def matrix(self) -> np.ndarray:
        return self._valores

    def value(self, alpha: int, beta: int) -> complex:
        """F_αβ(t)."""
        return complex(self._valores[alpha, beta])

    def __repr__(self) -> str:
        return f"InfluenceFactor(t={self._t!r}, dim={self._valores.shape[0]})"


class ObservableRecord:
    """
    Observáveis medidos em um instante da trajetória (uma linha do CSV).

    Attributes:
        t: Tempo em unidades de T
        rate_function: ϖ(t) (math.inf quando G_F,± = 0)
        rate_branch: Ramo minimizante
        G_F_plus, G_F_minus: Amplitudes de fidelidade em [0, 1]
        P_plus, P_minus: Probabilidades de retorno (somam 1)
        M_x: Magnetização em x em [-1, 1]
        J_expect: ⟨Ĵ⟩
        gamma_t, lambda_t: Taxas γ(t) e λ(t)
        trace_dev: |Tr ρ − 1|
        purity: Tr ρ²
    """

    COLUNAS = (
        "t_over_T", "gamma_t", "lambda_t", "rate_function", "rate_branch",
        "G_F_plus", "G_F_minus", "P_plus", "P_minus", "M_x", "J_expect",
        "trace_dev", "purity",
    )

    def __init__(
        self,
        t: float,
        rate_function: float,
        rate_branch: Branch,
        G_F_plus: float,
        G_F_minus: float,
        P_plus: float,
        P_minus: float,
        M_x: float,
        J_expect: float,
        gamma_t: float,
        lambda_t: float,
        trace_dev: float,
        purity: float,
    ):
        self.t = float(t)
        self.rate_function = float(rate_function)
        self.rate_branch = Branch(rate_branch)
        self.G_F_plus = float(G_F_plus)
        self.G_F_minus = float(G_F_minus)
        self.P_plus = float(P_plus)
        self.P_minus = float(P_minus)
        self.M_x = float(M_x)
        self.J_expect = float(J_expect)
        self.gamma_t = float(gamma_t)
        self.lambda_t = float(lambda_t)
        self.trace_dev = float(trace_dev)
        self.purity = float(purity)
        self._validar()

    def _validar(self) -> None:
        """Verifica faixas dos campos limitados."""
        tol = TOL_REGISTRO
        for nome in ("G_F_plus", "G_F_minus", "P_plus", "P_minus"):
            valor = getattr(self, nome)
            if not -tol <= valor <= 1.0 + tol:
                raise InvalidStateError(f"{nome} = {valor!r} fora de [0, 1].")
        if abs(self.P_plus + self.P_minus - 1.0) > 1e-10:
            raise InvalidStateError("P_plus + P_minus deve ser 1.")
        if not -1.0 - tol <= self.M_x <= 1.0 + tol:
            raise InvalidStateError(f"M_x = {self.M_x!r} fora de [-1, 1].")
        if self.rate_function < -tol or math.isnan(self.rate_function):
            raise InvalidStateError(f"Função taxa negativa: {self.rate_function!r}.")
        if not -tol <= self.purity <= 1.0 + tol:
            raise InvalidStateError(f"Pureza {self.purity!r} fora de [0, 1].")

    def to_row(self, precision: int = 12) -> list[str]:
        """Formata a linha do CSV com o número de dígitos significativos pedido."""
        def fmt(valor: float) -> str:
            if math.isinf(valor):
                return "inf"
            return f"{valor:.{precision}g}"

        return [
            fmt(self.t), fmt(self.gamma_t), fmt(self.lambda_t), fmt(self.rate_function),
            self.rate_branch.value, fmt(self.G_F_plus), fmt(self.G_F_minus),
            fmt(self.P_plus), fmt(self.P_minus), fmt(self.M_x), fmt(self.J_expect),
            fmt(self.trace_dev), fmt(self.purity),
        ]

    def __repr__(self) -> str:
        return (
            f"ObservableRecord(t={self.t!r}, rate_function={self.rate_function!r}, "
            f"rate_branch={self.rate_branch.value!r}, M_x={self.M_x!r})"
        )


class Trajectory:
    """
    Saída de um motor de evolução.

    Attributes:
        times: Instantes físicos em unidades de 1/Ω (estritamente crescentes);
            times_over_T dá os mesmos instantes em unidades de T
        states: Matrizes densidade por instante (None onde não foram guardadas)
        engine_tag: Motor que produziu a trajetória
        model: Parâmetros do anel
        bath: Parâmetros dos banhos
        records: Observáveis por instante (preenchidos pelo serviço de experimentos)
    """

    def __init__(
        self,
        times: Sequence[float],
        states: Sequence[Optional[DensityMatrix]],
        engine_tag: EngineTag,
        model: Optional[ModelParams] = None,
        bath: Optional[BathParams] = None,
    ):
        tempos = np.array(times, dtype=float)
        if tempos.ndim != 1:
            raise DimensionMismatchError("times deve ser um vetor.")
        if tempos.size > 1 and np.any(np.diff(tempos) <= 0):
            raise ContractViolationError("times deve ser estritamente crescente.")
        if len(states) != tempos.size:
            raise DimensionMismatchError(
                f"{len(states)} estados para {tempos.size} instantes."
            )
        tempos.flags.writeable = False
        self._times = tempos
        self._states = list(states)
        self._engine_tag = EngineTag(engine_tag)
        self._model = model
        self._bath = bath
        self.records: list[ObservableRecord] = []

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def times_over_T(self) -> np.ndarray:
        """Instantes em unidades do período das taxas (T = 2π/Ω)."""
        periodo = self._bath.period if self._bath is not None else 2.0 * math.pi
        return self._times / periodo

    @property
    def states(self) -> list[Optional[DensityMatrix]]:
        return self._states.copy()

    @property
    def engine_tag(self) -> EngineTag:
        return self._engine_tag

    @property
    def model(self) -> Optional[ModelParams]:
        return self._model

    @property
    def bath(self) -> Optional[BathParams]:
        return self._bath

    def state_at(self, indice: int) -> DensityMatrix:
        """Estado guardado no índice pedido."""
        estado = self._states[indice]
        if estado is None:
            raise KeyError(f"Estado no índice {indice} não foi guardado.")
        return estado

    def __len__(self) -> int:
        return self._times.size

    def __repr__(self) -> str:
        return (
            f"Trajectory(engine={self._engine_tag.value!r}, samples={len(self)}, "
            f"stored={sum(s is not None for s in self._states)})"
        )
