"""
Módulo de Operador - Matrizes densas no espaço de Hilbert de N spins.
"""

from typing import Union

import numpy as np

from .erros import DimensionMismatchError, DimensionOverflowError, SiteIndexError

# Limite padrão de spins (dimensão 2^14 = 16384)
MAX_SPINS_PADRAO = 14


def verificar_numero_spins(n_spins: int, max_spins: int = MAX_SPINS_PADRAO) -> int:
    """
    Valida o número de spins contra o limite configurado.

    Raises:
        ValueError: Se n_spins < 1
        DimensionOverflowError: Se n_spins > max_spins
    """
    if not isinstance(n_spins, (int, np.integer)) or isinstance(n_spins, bool):
        raise TypeError("Número de spins deve ser inteiro.")
    if n_spins < 1:
        raise ValueError("Número de spins deve ser pelo menos 1.")
    if n_spins > max_spins:
        raise DimensionOverflowError(int(n_spins), max_spins)
    return int(n_spins)


class SiteIndex:
    """
    Índice de sítio 1-based no anel de N spins.

    Attributes:
        value: Sítio em [1, N]
        n_spins: Tamanho do anel
    """

    def __init__(self, value: int, n_spins: int):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise TypeError("Sítio deve ser um inteiro.")
        if not 1 <= value <= n_spins:
            raise SiteIndexError(f"Sítio {value} fora do intervalo [1, {n_spins}].")
        self._value = int(value)
        self._n_spins = int(n_spins)

    @classmethod
    def ring(cls, j: int, n_spins: int) -> "SiteIndex":
        """Resolve um índice com condição periódica (N+1 → 1, 0 → N)."""
        return cls((int(j) - 1) % n_spins + 1, n_spins)

    @property
    def value(self) -> int:
        """Retorna o sítio (1-based)."""
        return self._value

    @property
    def n_spins(self) -> int:
        """Retorna o tamanho do anel."""
        return self._n_spins

    @property
    def position(self) -> int:
        """Posição 0-based no produto de Kronecker (sítio 1 é o fator mais significativo)."""
        return self._value - 1

    def __int__(self) -> int:
        return self._value

    def __repr__(self) -> str:
        return f"SiteIndex({self._value}, n_spins={self._n_spins})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SiteIndex):
            return NotImplemented
        return self._value == other._value and self._n_spins == other._n_spins

    def __hash__(self) -> int:
        return hash((self._value, self._n_spins))


class Operator:
    """
    Matriz complexa densa de dimensão 2^N × 2^N, imutável após a construção.

    Convenção de ordenação: o sítio 1 é o fator mais significativo do
    produto de Kronecker, então o estado da base |b_1 b_2 ... b_N⟩ tem
    índice Σ b_j 2^(N-j), com b=0 para ↑ e b=1 para ↓ em z.

    Attributes:
        matrix: Matriz (somente leitura)
        dim: Dimensão 2^N
        n_spins: Número de spins N
    """

    def __init__(self, matriz: Union[np.ndarray, list]):
        arr = np.array(matriz, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(f"Operador deve ser matriz quadrada, recebido shape {arr.shape}.")
        dim = arr.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DimensionMismatchError(f"Dimensão {dim} não é potência de dois (≥ 2).")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Operador contém entradas não finitas (NaN/Inf).")
        arr.flags.writeable = False
        self._matriz = arr
        self._dim = dim
        self._n_spins = dim.bit_length() - 1

    # ==================== CONSTRUTORES ====================

    @classmethod
    def identity(cls, n_spins: int) -> "Operator":
        """Identidade em 2^N dimensões."""
        return cls(np.eye(2 ** n_spins, dtype=complex))

    @classmethod
    def zeros(cls, n_spins: int) -> "Operator":
        """Operador nulo em 2^N dimensões."""
        return cls(np.zeros((2 ** n_spins, 2 ** n_spins), dtype=complex))

    # ==================== PROPRIEDADES ====================

    @property
    def matrix(self) -> np.ndarray:
        """Retorna a matriz (somente leitura)."""
        return self._matriz

    @property
    def dim(self) -> int:
        """Retorna a dimensão do espaço."""
        return self._dim

    @property
    def n_spins(self) -> int:
        """Retorna o número de spins."""
        return self._n_spins

    # ==================== ÁLGEBRA ====================

    def is_hermitian(self, atol: float = 1e-14) -> bool:
        """Verifica igualdade entrada a entrada com o conjugado transposto."""
        return bool(np.allclose(self._matriz, self._matriz.conj().T, rtol=0.0, atol=atol))

    def is_diagonal(self) -> bool:
        """Verifica se todas as entradas fora da diagonal são exatamente zero."""
        fora = self._matriz - np.diag(np.diag(self._matriz))
        return not np.any(fora)

    def kron(self, other: "Operator") -> "Operator":
        """Produto tensorial self ⊗ other."""
        if not isinstance(other, Operator):
            raise TypeError("Produto tensorial exige outro Operator.")
        return Operator(np.kron(self._matriz, other._matriz))

    def _verificar_dim(self, other: "Operator") -> None:
        if self._dim != other._dim:
            raise DimensionMismatchError(
                f"Dimensões incompatíveis: {self._dim} e {other._dim}."
            )

    def __add__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._verificar_dim(other)
        return Operator(self._matriz + other._matriz)

    def __sub__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._verificar_dim(other)
        return Operator(self._matriz - other._matriz)

    def __neg__(self) -> "Operator":
        return Operator(-self._matriz)

    def __mul__(self, escalar: complex) -> "Operator":
        if not isinstance(escalar, (int, float, complex, np.number)):
            return NotImplemented
        return Operator(self._matriz * escalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._verificar_dim(other)
        return Operator(self._matriz @ other._matriz)

    def apply(self, vetor: np.ndarray) -> np.ndarray:
        """Aplica o operador a um vetor de estado."""
        vetor = np.asarray(vetor, dtype=complex)
        if vetor.shape != (self._dim,):
            raise DimensionMismatchError(
                f"Vetor de shape {vetor.shape} incompatível com dimensão {self._dim}."
            )
        return self._matriz @ vetor

    # ==================== MÉTODOS ESPECIAIS ====================

    def __repr__(self) -> str:
        return f"Operator(dim={self._dim}, n_spins={self._n_spins})"

    def __eq__(self, other: object) -> bool:
        """Igualdade exata entrada a entrada."""
        if not isinstance(other, Operator):
            return NotImplemented
        return self._dim == other._dim and bool(np.array_equal(self._matriz, other._matriz))

    def __hash__(self) -> int:
        return hash((self._dim, self._matriz.tobytes()))
