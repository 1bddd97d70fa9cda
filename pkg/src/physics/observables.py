"""
Observáveis da dinâmica: traço parcial, fidelidade, função taxa,
probabilidades de retorno, magnetização, eco de Loschmidt fechado e
detecção de cúspides.
"""

import math
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from ..models.erros import (
    ContractViolationError,
    DegenerateNormalizationError,
    DimensionMismatchError,
)
from ..models.estados import DensityMatrix, PureState
from ..models.operador import MAX_SPINS_PADRAO, Operator
from ..models.parametros import BathParams, ModelParams
from ..models.trajetoria import Branch, ObservableRecord
from .bathrates import gamma_total, lamb_shift
from .prep import chain_A_ground
from .spinops import pauli

# Autovalores abaixo deste valor são tratados como zero nas raízes matriciais
TOL_RAIZ = 1e-10
TOL_ORTONORMAL = 1e-10
TOL_NORMALIZACAO = 1e-300


# ==================== ESTADOS REDUZIDOS E DISTÂNCIAS ====================


def partial_trace_B(rho: DensityMatrix, N_A: int, N_B: int) -> DensityMatrix:
    """
    ρ_A = Tr_B ρ, com A ocupando os sítios 1..N_A (fatores mais significativos).

    Raises:
        DimensionMismatchError: Se dim ρ ≠ 2^(N_A + N_B)
    """
    dA, dB = 2 ** N_A, 2 ** N_B
    if rho.dim != dA * dB:
        raise DimensionMismatchError(
            f"ρ de dimensão {rho.dim} incompatível com N_A={N_A}, N_B={N_B}."
        )
    tensor = rho.entries.reshape(dA, dB, dA, dB)
    reduzida = np.einsum("ijkj->ik", tensor)
    return DensityMatrix((reduzida + reduzida.conj().T) / 2.0)


def _raiz_psd(matriz: np.ndarray) -> np.ndarray:
    valores, vetores = linalg.eigh(matriz)
    valores = np.where(valores < TOL_RAIZ, 0.0, valores)
    return (vetores * np.sqrt(valores)) @ vetores.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """
    Fidelidade de Uhlmann (raiz): Tr √(√ρ σ √ρ).

    Autovalores abaixo de 1e-10 são zerados antes das raízes.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {rho.dim} e {sigma.dim}.")
    raiz = _raiz_psd(rho.entries)
    produto = raiz @ sigma.entries @ raiz
    valores = linalg.eigvalsh((produto + produto.conj().T) / 2.0)
    valores = np.where(valores < TOL_RAIZ, 0.0, valores)
    return float(min(np.sum(np.sqrt(valores)), 1.0))


def pure_fidelity(psi: PureState, sigma: DensityMatrix) -> float:
    """Fidelidade com referência pura: √⟨ψ|σ|ψ⟩."""
    if psi.dim != sigma.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {psi.dim} e {sigma.dim}.")
    valor = np.vdot(psi.amplitudes, sigma.entries @ psi.amplitudes).real
    return float(math.sqrt(min(max(valor, 0.0), 1.0)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """½ Σ |autovalores de ρ − σ|."""
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {rho.dim} e {sigma.dim}.")
    diferenca = rho.entries - sigma.entries
    return float(0.5 * np.sum(np.abs(linalg.eigvalsh((diferenca + diferenca.conj().T) / 2.0))))


# ==================== FUNÇÃO TAXA E PROBABILIDADES ====================


def fidelity_amplitudes(rho_A: DensityMatrix, N_A: Optional[int] = None) -> tuple[float, float]:
    """(G_F,+, G_F,−) entre ρ_A e os estados de simetria quebrada |ψ_±⟩."""
    n = rho_A.n_spins if N_A is None else N_A
    if 2 ** n != rho_A.dim:
        raise DimensionMismatchError(f"ρ_A de dimensão {rho_A.dim} não tem {n} spins.")
    return (
        pure_fidelity(chain_A_ground(Branch.PLUS, n), rho_A),
        pure_fidelity(chain_A_ground(Branch.MINUS, n), rho_A),
    )


def _taxa(G: float, N_denom: int) -> float:
    return math.inf if G <= 0.0 else max(-math.log(G) / N_denom, 0.0)


def rate_function(rho_A: DensityMatrix, N_denom: int) -> tuple[float, Branch]:
    """
    ϖ(t) = min_d [−ln G_F,d / N_denom].

    Returns:
        (valor, ramo minimizante); math.inf quando ambas as fidelidades são zero
    """
    if N_denom < 1:
        raise ValueError("N_denom deve ser pelo menos 1.")
    G_mais, G_menos = fidelity_amplitudes(rho_A)
    taxa_mais, taxa_menos = _taxa(G_mais, N_denom), _taxa(G_menos, N_denom)
    if taxa_mais <= taxa_menos:
        return taxa_mais, Branch.PLUS
    return taxa_menos, Branch.MINUS


def return_probabilities(rho_A: DensityMatrix) -> tuple[float, float]:
    """
    (P_+, P_−) com P_± = p_±/(p_+ + p_−), p_± = ⟨ψ_±|ρ_A|ψ_±⟩.

    Raises:
        DegenerateNormalizationError: Se p_+ + p_− ≈ 0
    """
    G_mais, G_menos = fidelity_amplitudes(rho_A)
    p_mais, p_menos = G_mais ** 2, G_menos ** 2
    total = p_mais + p_menos
    if total <= TOL_NORMALIZACAO:
        raise DegenerateNormalizationError(
            "ρ_A sem peso em |ψ_+⟩ nem em |ψ_−⟩; probabilidades de retorno indefinidas."
        )
    return p_mais / total, p_menos / total


@lru_cache(maxsize=None)
def _media_sigma_x(n: int, max_spins: int) -> np.ndarray:
    soma = sum(pauli("x", i, n, max_spins).matrix for i in range(1, n + 1))
    return soma / n


def magnetization_x(rho: DensityMatrix, N_A: int, max_spins: int = MAX_SPINS_PADRAO) -> float:
    """M_x = (1/N_A) Σ_i Tr[σ^x_i ρ], somando sobre todos os sítios de ρ."""
    if 2 ** N_A != rho.dim:
        raise DimensionMismatchError(f"ρ de dimensão {rho.dim} não tem {N_A} spins.")
    return float(rho.expectation(_media_sigma_x(N_A, max_spins)).real)


def current_expectation(rho: DensityMatrix, J: Operator) -> float:
    """⟨Ĵ⟩ = Tr[Ĵρ]."""
    return float(rho.expectation(J.matrix).real)


# ==================== DINÂMICA FECHADA ====================


def _evolucao_espectral(psi0: PureState, H_f: Operator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if psi0.dim != H_f.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {psi0.dim} e {H_f.dim}.")
    energias, U = linalg.eigh(H_f.matrix)
    return energias, U, U.conj().T @ psi0.amplitudes


def closed_loschmidt(psi0: PureState, H_f: Operator, times: Sequence[float]) -> np.ndarray:
    """Amplitude de Loschmidt G(t) = ⟨ψ0|e^{−iH_f t}|ψ0⟩."""
    energias, _, c = _evolucao_espectral(psi0, H_f)
    tempos = np.asarray(times, dtype=float)
    return np.exp(-1j * np.multiply.outer(tempos, energias)) @ (np.abs(c) ** 2)


def loschmidt_echo(G: np.ndarray) -> np.ndarray:
    """Eco L(t) = |G(t)|²."""
    return np.abs(np.asarray(G)) ** 2


def closed_rate(G: np.ndarray, N: int) -> np.ndarray:
    """Taxa complexa ζ(t) = −ln G(t)/N (ramo principal; G = 0 dá infinito)."""
    G = np.asarray(G, dtype=complex)
    with np.errstate(divide="ignore"):
        return -np.log(G) / N


def closed_rate_and_symmetric(
    psi0: PureState,
    ground_manifold: Sequence[PureState],
    H_f: Operator,
    times: Sequence[float],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Para o quench fechado: ζ(t), o eco simetrizado L_sym(t) = Σ_j |⟨E_j|e^{−iH_f t}|ψ0⟩|²
    e o eco de interferometria G_I(t) = Tr[ρ0 e^{−iH_f t}].

    Raises:
        ContractViolationError: Se a variedade fundamental não for ortonormal
    """
    if not ground_manifold:
        raise ContractViolationError("Variedade fundamental vazia.")
    vetores = np.stack([estado.amplitudes for estado in ground_manifold], axis=1)
    if vetores.shape[0] != psi0.dim:
        raise DimensionMismatchError("Variedade fundamental com dimensão incompatível.")
    gram = vetores.conj().T @ vetores
    if np.max(np.abs(gram - np.eye(gram.shape[0]))) > TOL_ORTONORMAL:
        raise ContractViolationError("Variedade fundamental não é ortonormal.")

    energias, U, c = _evolucao_espectral(psi0, H_f)
    tempos = np.asarray(times, dtype=float)
    fases = np.exp(-1j * np.multiply.outer(tempos, energias))
    # ⟨E_j|e^{−iHt}|ψ0⟩ = Σ_k ⟨E_j|k⟩ e^{−iε_k t} c_k
    projecoes = vetores.conj().T @ U
    amplitudes = (fases * c[None, :]) @ projecoes.T
    L_sym = np.sum(np.abs(amplitudes) ** 2, axis=1)
    G_I = fases @ (np.abs(c) ** 2)
    return closed_rate(G_I, psi0.n_spins), L_sym, G_I


# ==================== CÚSPIDES E CRUZAMENTOS ====================


def detect_cusps(times: Sequence[float], branches: Sequence[Branch]) -> list[tuple[float, float]]:
    """
    Instantes em que o ramo minimizante muda: (ponto médio, meia largura do passo).
    """
    tempos = np.asarray(times, dtype=float)
    cuspides = []
    for k in range(1, len(branches)):
        if Branch(branches[k]) is not Branch(branches[k - 1]):
            meio = 0.5 * (tempos[k] + tempos[k - 1])
            cuspides.append((float(meio), float(0.5 * (tempos[k] - tempos[k - 1]))))
    return cuspides


def sign_changes(times: Sequence[float], values: Sequence[float]) -> list[float]:
    """Instantes (por interpolação linear) em que a série troca de sinal."""
    tempos = np.asarray(times, dtype=float)
    valores = np.asarray(values, dtype=float)
    trocas = []
    for k in range(1, valores.size):
        a, b = valores[k - 1], valores[k]
        if a == 0.0 and k == 1:
            continue
        if (a < 0.0 < b) or (b < 0.0 < a) or (b == 0.0 and a != 0.0):
            fracao = a / (a - b)
            trocas.append(float(tempos[k - 1] + fracao * (tempos[k] - tempos[k - 1])))
    return trocas


def crossings(times: Sequence[float], P_plus: Sequence[float], P_minus: Sequence[float]) -> list[float]:
    """Instantes em que P_+ = P_−."""
    return sign_changes(times, np.asarray(P_plus) - np.asarray(P_minus))


# ==================== MEDIDOR ====================


class ObservableMeter:
    """
    Calcula o ObservableRecord de cada amostra de uma trajetória do anel.

    Attributes:
        denominator: 'total' (N) ou 'chain_A' (N_A) na função taxa
        magnetization_sites: 'chain_A' ou 'ring'
    """

    def __init__(
        self,
        model: ModelParams,
        bath: BathParams,
        J: Operator,
        denominator: str = "total",
        magnetization_sites: str = "chain_A",
    ):
        if denominator not in ("total", "chain_A"):
            raise ValueError(f"Denominador inválido: {denominator!r}.")
        if magnetization_sites not in ("chain_A", "ring"):
            raise ValueError(f"Sítios de magnetização inválidos: {magnetization_sites!r}.")
        self.model = model
        self.bath = bath
        self.J = J
        self.denominator = denominator
        self.magnetization_sites = magnetization_sites
        self._N_denom = model.N if denominator == "total" else model.N_A

    def __call__(self, t: float, rho: DensityMatrix) -> ObservableRecord:
        rho_A = partial_trace_B(rho, self.model.N_A, self.model.N_B)
        G_mais, G_menos = fidelity_amplitudes(rho_A, self.model.N_A)
        taxa, ramo = rate_function(rho_A, self._N_denom)
        try:
            P_mais, P_menos = return_probabilities(rho_A)
        except DegenerateNormalizationError as e:
            raise DegenerateNormalizationError(f"{e} (t = {t:.6g})") from e
        if self.magnetization_sites == "chain_A":
            M_x = magnetization_x(rho_A, self.model.N_A, self.model.max_spins)
        else:
            M_x = magnetization_x(rho, self.model.N, self.model.max_spins)
        return ObservableRecord(
            t=t / self.bath.period,
            rate_function=taxa,
            rate_branch=ramo,
            G_F_plus=G_mais,
            G_F_minus=G_menos,
            P_plus=P_mais,
            P_minus=P_menos,
            M_x=M_x,
            J_expect=current_expectation(rho, self.J),
            gamma_t=gamma_total(t, self.bath),
            lambda_t=lamb_shift(t, self.bath),
            trace_dev=abs(rho.trace - 1.0),
            purity=rho.purity,
        )
