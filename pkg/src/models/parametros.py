"""
Módulo de Parâmetros - Parâmetros físicos do anel de Ising e dos banhos.

Todas as grandezas estão em unidades da frequência fundamental Ω (Ω = 1
internamente); tempos em unidades de T = 2π/Ω.
"""

import math
from typing import Any, Optional

import numpy as np

from .operador import MAX_SPINS_PADRAO, verificar_numero_spins


def _real_finito(nome: str, valor: Any) -> float:
    """Converte para float exigindo número real finito."""
    if isinstance(valor, bool) or not isinstance(valor, (int, float, np.floating, np.integer)):
        raise TypeError(f"{nome} deve ser um número real.")
    valor = float(valor)
    if not math.isfinite(valor):
        raise ValueError(f"{nome} deve ser finito.")
    return valor


class ModelParams:
    """
    Parâmetros do anel de Ising formado pelas cadeias A (dreno) e B (fonte).

    Attributes:
        N_A: Spins da cadeia A (≥ 2)
        N_B: Spins da cadeia B (≥ 2)
        tau: Acoplamento entre spins τ
        H_field: Campo transverso H
        nu: Intensidade da fonte de corrente ν
        max_spins: Limite de N = N_A + N_B
    """

    def __init__(
        self,
        N_A: int,
        N_B: int,
        tau: float,
        H_field: float,
        nu: float = 0.0,
        max_spins: int = MAX_SPINS_PADRAO,
    ):
        for nome, valor in (("N_A", N_A), ("N_B", N_B)):
            if isinstance(valor, bool) or not isinstance(valor, (int, np.integer)):
                raise TypeError(f"{nome} deve ser um inteiro.")
            if valor < 2:
                raise ValueError(f"{nome} deve ser pelo menos 2.")
        self._N_A = int(N_A)
        self._N_B = int(N_B)
        self._max_spins = int(max_spins)
        verificar_numero_spins(self._N_A + self._N_B, self._max_spins)
        self._tau = _real_finito("tau", tau)
        self._H_field = _real_finito("H_field", H_field)
        self._nu = _real_finito("nu", nu)

    # ==================== PROPRIEDADES ====================

    @property
    def N_A(self) -> int:
        """Retorna o tamanho da cadeia A."""
        return self._N_A

    @property
    def N_B(self) -> int:
        """Retorna o tamanho da cadeia B."""
        return self._N_B

    @property
    def N(self) -> int:
        """Retorna o total de spins do anel."""
        return self._N_A + self._N_B

    @property
    def tau(self) -> float:
        return self._tau

    @property
    def H_field(self) -> float:
        return self._H_field

    @property
    def nu(self) -> float:
        return self._nu

    @property
    def max_spins(self) -> int:
        return self._max_spins

    # ==================== MÉTODOS ====================

    def replace(self, **mudancas: Any) -> "ModelParams":
        """Cria uma cópia com os campos indicados alterados."""
        dados = self.to_dict()
        dados.update(mudancas)
        return ModelParams.from_dict(dados)

    def __repr__(self) -> str:
        return (
            f"ModelParams(N_A={self._N_A!r}, N_B={self._N_B!r}, tau={self._tau!r}, "
            f"H_field={self._H_field!r}, nu={self._nu!r})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.to_dict().items())))

    # ==================== SERIALIZAÇÃO ====================

    def to_dict(self) -> dict:
        return {
            "N_A": self._N_A,
            "N_B": self._N_B,
            "tau": self._tau,
            "H_field": self._H_field,
            "nu": self._nu,
            "max_spins": self._max_spins,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        return cls(
            N_A=data["N_A"],
            N_B=data["N_B"],
            tau=data["tau"],
            H_field=data["H_field"],
            nu=data.get("nu", 0.0),
            max_spins=data.get("max_spins", MAX_SPINS_PADRAO),
        )


class BathParams:
    """
    Parâmetros dos banhos de defasagem markoviano e não markoviano.

    O banho não markoviano tem modos ω_l = lΩ (l = 1..M) e acoplamentos
    g_l = (h/Ω²) e^{-zl/2}. O banho markoviano entra apenas pela taxa γ₀.

    Attributes:
        gamma0: Taxa markoviana γ₀ (≥ 0)
        h: Amplitude do acoplamento não markoviano (≥ 0)
        z: Expoente de decaimento espectral (> 0)
        M: Número de modos (≥ 1)
        beta_NMB: Temperatura inversa do banho não markoviano (math.inf = temperatura nula)
        Omega: Frequência fundamental Ω
    """

    def __init__(
        self,
        gamma0: float = 0.0,
        h: float = 0.0,
        z: float = 0.1,
        M: int = 60,
        beta_NMB: Optional[float] = math.inf,
        Omega: float = 1.0,
    ):
        self._gamma0 = _real_finito("gamma0", gamma0)
        if self._gamma0 < 0:
            raise ValueError("gamma0 não pode ser negativo.")
        self._h = _real_finito("h", h)
        if self._h < 0:
            raise ValueError("h não pode ser negativo.")
        self._z = _real_finito("z", z)
        if self._z <= 0:
            raise ValueError("z deve ser maior que zero.")
        if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
            raise ValueError("M deve ser um inteiro ≥ 1.")
        self._M = int(M)
        if beta_NMB is None:
            beta_NMB = math.inf
        beta = float(beta_NMB)
        if math.isnan(beta) or beta <= 0:
            raise ValueError("beta_NMB deve ser positivo (ou infinito).")
        self._beta_NMB = beta
        self._Omega = _real_finito("Omega", Omega)
        if self._Omega <= 0:
            raise ValueError("Omega deve ser maior que zero.")

    # ==================== PROPRIEDADES ====================

    @property
    def gamma0(self) -> float:
        return self._gamma0

    @property
    def h(self) -> float:
        return self._h

    @property
    def z(self) -> float:
        return self._z

    @property
    def M(self) -> int:
        return self._M

    @property
    def beta_NMB(self) -> float:
        return self._beta_NMB

    @property
    def Omega(self) -> float:
        return self._Omega

    @property
    def period(self) -> float:
        """Período T = 2π/Ω das taxas."""
        return 2.0 * math.pi / self._Omega

    @property
    def frequencies(self) -> np.ndarray:
        """Frequências ω_l = lΩ dos modos."""
        return self._Omega * np.arange(1, self._M + 1, dtype=float)

    @property
    def couplings(self) -> np.ndarray:
        """Acoplamentos g_l = (h/Ω²) e^{-zl/2}."""
        l = np.arange(1, self._M + 1, dtype=float)
        return (self._h / self._Omega ** 2) * np.exp(-self._z * l / 2.0)

    # ==================== MÉTODOS ====================

    def replace(self, **mudancas: Any) -> "BathParams":
        dados = self.to_dict()
        dados.update(mudancas)
        return BathParams.from_dict(dados)

    def __repr__(self) -> str:
        return (
            f"BathParams(gamma0={self._gamma0!r}, h={self._h!r}, z={self._z!r}, "
            f"M={self._M!r}, beta_NMB={self._beta_NMB!r}, Omega={self._Omega!r})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BathParams):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(sorted((k, str(v)) for k, v in self.to_dict().items())))

    # ==================== SERIALIZAÇÃO ====================

    def to_dict(self) -> dict:
        """Serializa; beta_NMB infinito vira None (JSON não tem infinito)."""
        return {
            "gamma0": self._gamma0,
            "h": self._h,
            "z": self._z,
            "M": self._M,
            "beta_NMB": None if math.isinf(self._beta_NMB) else self._beta_NMB,
            "Omega": self._Omega,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BathParams":
        return cls(
            gamma0=data.get("gamma0", 0.0),
            h=data.get("h", 0.0),
            z=data.get("z", 0.1),
            M=data.get("M", 60),
            beta_NMB=data.get("beta_NMB"),
            Omega=data.get("Omega", 1.0),
        )
