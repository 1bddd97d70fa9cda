"""
Operadores de Pauli de muitos spins e álgebra de operadores.

O sítio 1 é o fator mais significativo do produto de Kronecker.
"""

from enum import Enum
from functools import reduce
from typing import Union

import numpy as np

from ..models.erros import DimensionMismatchError
from ..models.operador import MAX_SPINS_PADRAO, Operator, SiteIndex, verificar_numero_spins


class Axis(Enum):
    """Eixo da matriz de Pauli."""
    X = "x"
    Y = "y"
    Z = "z"


_PAULI = {
    Axis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Axis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Axis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
_IDENTIDADE = np.eye(2, dtype=complex)


def _parse_axis(axis: Union[Axis, str]) -> Axis:
    if isinstance(axis, Axis):
        return axis
    try:
        return Axis(str(axis).lower())
    except ValueError:
        raise ValueError(f"Eixo inválido: {axis!r}. Use x, y ou z.") from None


def pauli(
    axis: Union[Axis, str],
    site: Union[int, SiteIndex],
    N: int,
    max_spins: int = MAX_SPINS_PADRAO,
) -> Operator:
    """
    Constrói I ⊗ … ⊗ σ^axis ⊗ … ⊗ I com σ^axis na posição `site`.

    Args:
        axis: x, y ou z
        site: Sítio 1-based em [1, N]
        N: Número de spins
        max_spins: Limite de spins

    Raises:
        SiteIndexError: Sítio fora de [1, N]
        DimensionOverflowError: N acima do limite
    """
    N = verificar_numero_spins(N, max_spins)
    eixo = _parse_axis(axis)
    sitio = site if isinstance(site, SiteIndex) else SiteIndex(site, N)
    if sitio.n_spins != N:
        raise DimensionMismatchError(f"Sítio definido para {sitio.n_spins} spins, esperado {N}.")
    fatores = [_IDENTIDADE] * N
    fatores[sitio.position] = _PAULI[eixo]
    return Operator(reduce(np.kron, fatores))


def pauli_string(
    termos: dict[int, Union[Axis, str]],
    N: int,
    max_spins: int = MAX_SPINS_PADRAO,
) -> Operator:
    """
    Produto de Paulis em sítios distintos, ex. {1: 'y', 2: 'x'} → σ^y_1 σ^x_2.

    Índices fora de [1, N] são resolvidos com a condição periódica do anel.
    """
    N = verificar_numero_spins(N, max_spins)
    fatores = [_IDENTIDADE] * N
    for j, axis in termos.items():
        posicao = SiteIndex.ring(j, N).position
        if fatores[posicao] is not _IDENTIDADE:
            raise ValueError(f"Sítio {j} repetido no produto de Paulis.")
        fatores[posicao] = _PAULI[_parse_axis(axis)]
    return Operator(reduce(np.kron, fatores))


def commutator(A: Operator, B: Operator) -> Operator:
    """
    Retorna AB − BA.

    Raises:
        DimensionMismatchError: Se as dimensões diferirem
    """
    if A.dim != B.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {A.dim} e {B.dim}.")
    return Operator(A.matrix @ B.matrix - B.matrix @ A.matrix)


def frobenius_norm(A: Operator) -> float:
    """√(Σ|A_ij|²)."""
    return float(np.linalg.norm(A.matrix, "fro"))


def relative_commutator_norm(A: Operator, B: Operator) -> float:
    """‖[A, B]‖_F / (‖A‖_F ‖B‖_F); zero se algum operador for nulo."""
    denominador = frobenius_norm(A) * frobenius_norm(B)
    if denominador == 0.0:
        return 0.0
    return frobenius_norm(commutator(A, B)) / denominador


def embed(operador: Operator, primeiro_sitio: int, N: int) -> Operator:
    """
    Mergulha um operador de k spins no espaço de N spins, ocupando os
    sítios primeiro_sitio .. primeiro_sitio + k − 1 (sem dar a volta no anel).
    """
    k = operador.n_spins
    if primeiro_sitio < 1 or primeiro_sitio + k - 1 > N:
        raise DimensionMismatchError(
            f"Operador de {k} spins não cabe a partir do sítio {primeiro_sitio} em {N} spins."
        )
    esquerda = 2 ** (primeiro_sitio - 1)
    direita = 2 ** (N - primeiro_sitio - k + 1)
    return Operator(np.kron(np.kron(np.eye(esquerda), operador.matrix), np.eye(direita)))
