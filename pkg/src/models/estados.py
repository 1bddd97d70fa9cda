"""
Módulo de Estados - Vetores de estado puros e matrizes densidade.
"""

from typing import Union

import numpy as np
from scipy import linalg

from .erros import DimensionMismatchError, InvalidStateError

# Tolerâncias dos invariantes
TOL_NORMA = 1e-12
TOL_HERMITICIDADE = 1e-12
TOL_TRACO = 1e-10
TOL_POSITIVIDADE = 1e-8


def _verificar_dim_potencia_de_dois(dim: int) -> int:
    if dim < 2 or dim & (dim - 1):
        raise DimensionMismatchError(f"Dimensão {dim} não é potência de dois (≥ 2).")
    return dim


class PureState:
    """
    Vetor de estado normalizado.

    Attributes:
        amplitudes: Vetor complexo (somente leitura), norma 1
        dim: Dimensão 2^N
    """

    def __init__(self, amplitudes: Union[np.ndarray, list]):
        vetor = np.array(amplitudes, dtype=complex)
        if vetor.ndim != 1:
            raise DimensionMismatchError("Amplitudes devem formar um vetor 1D.")
        _verificar_dim_potencia_de_dois(vetor.shape[0])
        if not np.all(np.isfinite(vetor)):
            raise InvalidStateError("Amplitudes não finitas.")
        norma = np.linalg.norm(vetor)
        if abs(norma - 1.0) > TOL_NORMA:
            raise InvalidStateError(f"Estado não normalizado: ‖ψ‖ = {norma:.15g}.")
        vetor.flags.writeable = False
        self._amplitudes = vetor

    @classmethod
    def normalized(cls, amplitudes: Union[np.ndarray, list]) -> "PureState":
        """Normaliza o vetor antes de construir o estado."""
        vetor = np.asarray(amplitudes, dtype=complex)
        norma = np.linalg.norm(vetor)
        if norma == 0:
            raise InvalidStateError("Vetor nulo não pode ser normalizado.")
        return cls(vetor / norma)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.shape[0]

    @property
    def n_spins(self) -> int:
        return self.dim.bit_length() - 1

    def overlap(self, other: "PureState") -> complex:
        """Produto interno ⟨self|other⟩."""
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Dimensões incompatíveis: {self.dim} e {other.dim}.")
        return complex(np.vdot(self._amplitudes, other._amplitudes))

    def kron(self, other: "PureState") -> "PureState":
        """Produto tensorial |self⟩ ⊗ |other⟩."""
        return PureState.normalized(np.kron(self._amplitudes, other._amplitudes))

    def to_density_matrix(self) -> "DensityMatrix":
        """Projetor |ψ⟩⟨ψ|."""
        return DensityMatrix(np.outer(self._amplitudes, self._amplitudes.conj()))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return bool(np.array_equal(self._amplitudes, other._amplitudes))

    def __hash__(self) -> int:
        return hash(self._amplitudes.tobytes())


class DensityMatrix:
    """
    Matriz densidade: hermitiana, traço 1 e positiva semidefinida.

    Os invariantes são verificados no construtor; check_positivity=False
    dispensa apenas a diagonalização (para quem já verificou o espectro).

    Attributes:
        entries: Matriz (somente leitura)
        dim: Dimensão 2^N
    """

    def __init__(self, entries: Union[np.ndarray, list], check_positivity: bool = True):
        matriz = np.array(entries, dtype=complex)
        if matriz.ndim != 2 or matriz.shape[0] != matriz.shape[1]:
            raise DimensionMismatchError(f"Matriz densidade deve ser quadrada, shape {matriz.shape}.")
        _verificar_dim_potencia_de_dois(matriz.shape[0])
        if not np.all(np.isfinite(matriz)):
            raise InvalidStateError("Matriz densidade com entradas não finitas.")
        desvio_herm = np.max(np.abs(matriz - matriz.conj().T))
        if desvio_herm > TOL_HERMITICIDADE:
            raise InvalidStateError(f"Matriz não hermitiana (desvio {desvio_herm:.3g}).")
        traco = np.trace(matriz).real
        if abs(traco - 1.0) > TOL_TRACO:
            raise InvalidStateError(f"Traço {traco:.15g} ≠ 1.")
        matriz.flags.writeable = False
        self._entries = matriz
        self._min_eig = None
        if check_positivity:
            if self.min_eigenvalue < -TOL_POSITIVIDADE:
                raise InvalidStateError(
                    f"Autovalor mínimo {self._min_eig:.3g} abaixo de -{TOL_POSITIVIDADE:g}."
                )

    @classmethod
    def maximally_mixed(cls, n_spins: int) -> "DensityMatrix":
        dim = 2 ** n_spins
        return cls(np.eye(dim, dtype=complex) / dim)

    # ==================== PROPRIEDADES ====================

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def n_spins(self) -> int:
        return self.dim.bit_length() - 1

    @property
    def trace(self) -> float:
        return float(np.trace(self._entries).real)

    @property
    def purity(self) -> float:
        """Tr ρ² (para ρ hermitiana, soma de |ρ_ij|²)."""
        return float(np.sum(np.abs(self._entries) ** 2))

    @property
    def min_eigenvalue(self) -> float:
        """Menor autovalor (calculado sob demanda e guardado)."""
        if self._min_eig is None:
            self._min_eig = float(linalg.eigvalsh(self._entries)[0])
        return self._min_eig

    # ==================== MÉTODOS ====================

    def expectation(self, operador: np.ndarray) -> complex:
        """Tr[O ρ] para uma matriz O de mesma dimensão."""
        operador = np.asarray(operador)
        if operador.shape != self._entries.shape:
            raise DimensionMismatchError(
                f"Operador de shape {operador.shape} incompatível com ρ de dimensão {self.dim}."
            )
        # Tr[Oρ] = Σ_ij O_ij ρ_ji
        return complex(np.sum(operador * self._entries.T))

    def kron(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self._entries, other._entries))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, trace={self.trace:.12g})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self._entries, other._entries))

    def __hash__(self) -> int:
        return hash(self._entries.tobytes())
