"""
Preparação dos estados iniciais do protocolo de quench.

A cadeia A começa num estado de produto com simetria Z₂ quebrada
(|ψ_±⟩ = |→…→⟩ ou |←…←⟩), construído analiticamente; a cadeia B começa
no estado fundamental de Ĥ^S_B, que carrega corrente quando ν ≠ 0.
"""

import logging
from typing import Union

import numpy as np
from scipy import linalg

from ..models.erros import DegeneracyError
from ..models.estados import DensityMatrix, PureState
from ..models.parametros import ModelParams
from ..models.trajetoria import Branch
from .model import build_chain_B_hamiltonian
from .spinops import frobenius_norm

logger = logging.getLogger(__name__)

# Gap relativo abaixo do qual o fundamental de B é considerado degenerado
TOL_DEGENERESCENCIA = 1e-10


def _parse_branch(sign: Union[Branch, str]) -> Branch:
    if isinstance(sign, Branch):
        return sign
    try:
        return Branch(str(sign))
    except ValueError:
        raise ValueError(f"Sinal inválido: {sign!r}. Use '+' ou '-'.") from None


def fix_global_phase(vetor: np.ndarray) -> np.ndarray:
    """Torna real positiva a amplitude de maior módulo (primeira, em caso de empate)."""
    i = int(np.argmax(np.abs(vetor)))
    fase = vetor[i] / abs(vetor[i])
    return vetor / fase


def chain_A_ground(sign: Union[Branch, str], N_A: int) -> PureState:
    """
    Estado de produto com todos os spins em ±x: |→⟩ = (|↑⟩ + |↓⟩)/√2.

    Autoestado de Ĥ^S_A com autovalor −(N_A − 1)τ.
    """
    if N_A < 1:
        raise ValueError("N_A deve ser pelo menos 1.")
    ramo = _parse_branch(sign)
    s = 1.0 if ramo is Branch.PLUS else -1.0
    sitio = np.array([1.0, s], dtype=complex) / np.sqrt(2.0)
    vetor = sitio
    for _ in range(N_A - 1):
        vetor = np.kron(vetor, sitio)
    return PureState.normalized(vetor)


def chain_B_ground(p: ModelParams) -> PureState:
    """
    Estado fundamental de Ĥ^S_B (fonte de corrente).

    Raises:
        DegeneracyError: Se os dois menores autovalores estiverem a menos de
            1e-10·‖Ĥ^S_B‖_F um do outro
        numpy.linalg.LinAlgError: Falha do autossolver
    """
    H_B = build_chain_B_hamiltonian(p)
    energias, vetores = linalg.eigh(H_B.matrix)
    escala = TOL_DEGENERESCENCIA * frobenius_norm(H_B)
    if energias[1] - energias[0] < escala:
        raise DegeneracyError(
            f"Fundamental de Ĥ^S_B degenerado (E₀ = {energias[0]:.12g}, "
            f"E₁ = {energias[1]:.12g}); ajuste tau, H_field ou nu."
        )
    logger.debug("Fundamental de B: E0=%.12g, gap=%.6g", energias[0], energias[1] - energias[0])
    return PureState.normalized(fix_global_phase(vetores[:, 0]))


def initial_state(p: ModelParams) -> PureState:
    """|ψ(0)⟩ = |ψ_+⟩ ⊗ |ψ_G⟩."""
    return chain_A_ground(Branch.PLUS, p.N_A).kron(chain_B_ground(p))


def initial_density_matrix(p: ModelParams) -> DensityMatrix:
    """ρ_S(0) = |ψ(0)⟩⟨ψ(0)| = ρ_A(0) ⊗ ρ_B(0), de pureza 1."""
    return initial_state(p).to_density_matrix()
