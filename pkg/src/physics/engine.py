"""
Motores de evolução da matriz densidade do anel.

- Exato: propagação pelo funcional de influência na base simultânea de
  (Ĥ^S, Ĵ): ρ_αβ(t) = ρ_αβ(0) e^{−i(E_α−E_β)t} F_αβ(t).
- Lindblad: Runge–Kutta clássico de 4ª ordem, passo fixo, para
  dρ/dt = −i[Ĥ^S − λ(t)Ĵ², ρ] + γ(t)(ĴρĴ − ½{Ĵ², ρ}).

O motor exato é a referência; o RK4 valida a forma da equação mestra.
"""

import logging
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
from scipy import linalg

from ..models.erros import (
    ContractViolationError,
    DimensionMismatchError,
    IntegrationQualityError,
)
from ..models.estados import DensityMatrix
from ..models.operador import Operator
from ..models.parametros import BathParams, ModelParams
from ..models.trajetoria import EigenSystem, EngineTag, InfluenceFactor, Trajectory
from .bathrates import big_gamma, big_lambda, gamma_total, lamb_shift
from .observables import trace_distance
from .prep import fix_global_phase
from .spinops import relative_commutator_norm

logger = logging.getLogger(__name__)

TOL_COMUTACAO = 1e-8
TOL_CLUSTER = 1e-9
TOL_DERIVA_RK4 = 1e-6

Observador = Callable[[float, DensityMatrix], None]


class StorePolicy(Enum):
    """Quais estados completos a trajetória guarda."""
    NONE = "none"
    PERIODS = "periods"
    ALL = "all"


# ==================== AUTOSSISTEMA SIMULTÂNEO ====================


def _agrupar_degenerados(energias: np.ndarray) -> list[slice]:
    """Agrupa autovalores ordenados com gap < TOL_CLUSTER × amplitude espectral."""
    amplitude = float(energias[-1] - energias[0])
    limite = TOL_CLUSTER * amplitude
    grupos = []
    inicio = 0
    for i in range(1, energias.size):
        if energias[i] - energias[i - 1] >= limite and amplitude > 0:
            grupos.append(slice(inicio, i))
            inicio = i
    grupos.append(slice(inicio, energias.size))
    return grupos


def simultaneous_eigensystem(H: Operator, J: Operator) -> EigenSystem:
    """
    Base que diagonaliza H e J simultaneamente.

    Dentro de cada autoespaço degenerado de H (gap < 1e-9 × amplitude
    espectral) a projeção de J é diagonalizada. Ordem: energia crescente,
    depois corrente crescente dentro de cada grupo; fase fixada pela maior
    amplitude real positiva em cada coluna.

    Raises:
        ContractViolationError: Se ‖[H, J]‖_F/(‖H‖_F‖J‖_F) > 1e-8
        DimensionMismatchError: Dimensões diferentes
    """
    if H.dim != J.dim:
        raise DimensionMismatchError(f"Dimensões incompatíveis: {H.dim} e {J.dim}.")
    residuo = relative_commutator_norm(H, J)
    if residuo > TOL_COMUTACAO:
        raise ContractViolationError(
            f"H e J não comutam (‖[H,J]‖ relativo = {residuo:.3g}); "
            f"a propagação exata exige [H, J] = 0."
        )

    energias, U = linalg.eigh(H.matrix)
    base = np.empty_like(U)
    correntes = np.empty_like(energias)
    grupos = _agrupar_degenerados(energias)
    for grupo in grupos:
        bloco = U[:, grupo]
        J_proj = bloco.conj().T @ J.matrix @ bloco
        valores, W = linalg.eigh((J_proj + J_proj.conj().T) / 2.0)
        base[:, grupo] = bloco @ W
        correntes[grupo] = valores

    for k in range(base.shape[1]):
        base[:, k] = fix_global_phase(base[:, k])

    # Quocientes de Rayleigh na base final
    energias_finais = np.real(np.einsum("ik,ij,jk->k", base.conj(), H.matrix, base))
    logger.debug("Autossistema simultâneo: dim=%d, grupos=%d", H.dim, len(grupos))
    return EigenSystem(energias_finais, correntes, base)


def diagonalization_residual(eig: EigenSystem, A: Operator) -> float:
    """Norma fora da diagonal de U†AU relativa a ‖A‖_F."""
    rotacionada = eig.to_eigenbasis(A.matrix)
    fora = rotacionada - np.diag(np.diag(rotacionada))
    norma = np.linalg.norm(A.matrix)
    return float(np.linalg.norm(fora) / norma) if norma > 0 else 0.0


# ==================== FUNCIONAL DE INFLUÊNCIA ====================


def influence_factor(alpha: int, beta: int, t: float, eig: EigenSystem, b: BathParams) -> complex:
    """F_αβ(t) = exp[−Γ(t)(V_α − V_β)² + iΛ(t)(V_α² − V_β²)]."""
    if alpha == beta:
        return 1.0 + 0.0j
    Va = eig.current_values[alpha]
    Vb = eig.current_values[beta]
    expoente = -big_gamma(t, b) * (Va - Vb) ** 2 + 1j * big_lambda(t, b) * (Va ** 2 - Vb ** 2)
    return complex(np.exp(expoente))


class _Propagador:
    """Diferenças ΔE, (ΔV)² e Δ(V²) pré-calculadas para o motor exato."""

    def __init__(self, eig: EigenSystem, b: BathParams):
        E = eig.energies
        V = eig.current_values
        self.eig = eig
        self.b = b
        self.dE = E[:, None] - E[None, :]
        self.dV2 = (V[:, None] - V[None, :]) ** 2
        self.dVquad = V[:, None] ** 2 - V[None, :] ** 2

    def influencia(self, t: float) -> np.ndarray:
        F = np.exp(-big_gamma(t, self.b) * self.dV2 + 1j * big_lambda(t, self.b) * self.dVquad)
        np.fill_diagonal(F, 1.0)
        return F

    def multiplicador(self, t: float) -> np.ndarray:
        """e^{−iΔE t} F(t), elemento a elemento; diagonal exatamente 1."""
        fator = np.exp(-1j * self.dE * t) * self.influencia(t)
        np.fill_diagonal(fator, 1.0)
        return fator


def influence_matrix(t: float, eig: EigenSystem, b: BathParams) -> InfluenceFactor:
    """Todos os F_αβ(t) de uma vez."""
    return InfluenceFactor(t, _Propagador(eig, b).influencia(t))


def one_period_map(eig: EigenSystem, b: BathParams) -> np.ndarray:
    """
    Mapa estroboscópico Φ(T;0) na base própria: diagonal no espaço de
    Liouville, ρ_αβ ↦ e^{−i(E_α−E_β)T} F_αβ(T) ρ_αβ.
    """
    return _Propagador(eig, b).multiplicador(b.period)


def apply_period_map(rho: DensityMatrix, eig: EigenSystem, b: BathParams, m: int) -> DensityMatrix:
    """Aplica Φ(T;0) m vezes: Φ(mT;0) = [Φ(T;0)]^m."""
    if m < 0:
        raise ValueError("m deve ser não negativo.")
    _verificar_dim(rho, eig)
    mapa = one_period_map(eig, b)
    atual = eig.to_eigenbasis(rho.entries)
    for _ in range(m):
        atual = mapa * atual
    return _estado_hermitiano(eig.from_eigenbasis(atual))


# ==================== AUXILIARES ====================


def _verificar_dim(rho: DensityMatrix, eig: EigenSystem) -> None:
    if rho.dim != eig.dim:
        raise DimensionMismatchError(f"ρ de dimensão {rho.dim} e autossistema de dimensão {eig.dim}.")


def _estado_hermitiano(matriz: np.ndarray) -> DensityMatrix:
    return DensityMatrix((matriz + matriz.conj().T) / 2.0)


def _eh_fronteira_de_periodo(t: float, T: float) -> bool:
    m = round(t / T)
    return abs(t - m * T) <= 1e-9 * T


def _montar_trajetoria(
    amostras: Iterator[tuple[float, DensityMatrix]],
    times: np.ndarray,
    tag: EngineTag,
    b: BathParams,
    model: Optional[ModelParams],
    store: StorePolicy,
    on_sample: Optional[Observador],
) -> Trajectory:
    estados: list[Optional[DensityMatrix]] = []
    for t, rho in amostras:
        if on_sample is not None:
            on_sample(t, rho)
        guardar = store is StorePolicy.ALL or (
            store is StorePolicy.PERIODS and _eh_fronteira_de_periodo(t, b.period)
        )
        estados.append(rho if guardar else None)
    return Trajectory(times, estados, tag, model=model, bath=b)


def _validar_tempos(times: Sequence[float]) -> np.ndarray:
    tempos = np.asarray(times, dtype=float)
    if tempos.ndim != 1 or tempos.size == 0:
        raise ValueError("times deve ser um vetor não vazio.")
    if tempos.size > 1 and np.any(np.diff(tempos) <= 0):
        raise ContractViolationError("times deve ser estritamente crescente.")
    if tempos[0] < 0.0:
        raise ContractViolationError("ρ0 é o estado em t = 0; instantes negativos não são aceitos.")
    return tempos


# ==================== MOTOR EXATO ====================


def iter_exact(
    rho0: DensityMatrix, eig: EigenSystem, b: BathParams, times: Sequence[float]
) -> Iterator[tuple[float, DensityMatrix]]:
    """Gera (t, ρ(t)) na base computacional pela solução exata."""
    _verificar_dim(rho0, eig)
    tempos = _validar_tempos(times)
    propagador = _Propagador(eig, b)
    rho_proprio = eig.to_eigenbasis(rho0.entries)
    for t in tempos:
        if t == 0.0:
            yield float(t), rho0
            continue
        atual = rho_proprio * propagador.multiplicador(float(t))
        yield float(t), _estado_hermitiano(eig.from_eigenbasis(atual))


def evolve_exact(
    rho0: DensityMatrix,
    eig: EigenSystem,
    b: BathParams,
    times: Sequence[float],
    store: StorePolicy = StorePolicy.PERIODS,
    model: Optional[ModelParams] = None,
    on_sample: Optional[Observador] = None,
) -> Trajectory:
    """
    Evolução exata pelo funcional de influência.

    Args:
        rho0: Estado inicial
        eig: Autossistema simultâneo do Hamiltoniano de quench e da corrente
        b: Parâmetros dos banhos
        times: Instantes (unidades 1/Ω), estritamente crescentes
        store: Política de armazenamento dos estados completos
        model: Parâmetros do anel, guardados na trajetória
        on_sample: Chamado com (t, ρ) em cada amostra
    """
    tempos = _validar_tempos(times)
    logger.info("Motor exato: %d amostras, dim=%d", tempos.size, eig.dim)
    return _montar_trajetoria(
        iter_exact(rho0, eig, b, tempos), tempos, EngineTag.EXACT, b, model, store, on_sample
    )


# ==================== MOTOR LINDBLAD (RK4) ====================


class _GeradorLindblad:
    """
    Lado direito da equação mestra, G ρ + ρ G† + γ J ρ J com
    G = −i(H − λJ²) − (γ/2)J². Usa produtos elemento a elemento quando
    H e J são diagonais no referencial de integração.
    """

    def __init__(self, H: np.ndarray, J: np.ndarray, diagonal: bool):
        self.diagonal = diagonal
        if diagonal:
            self.h = np.real(np.diag(H)).astype(complex)
            self.j = np.real(np.diag(J)).astype(complex)
            self.j2 = self.j ** 2
            self.jj = self.j[:, None] * self.j[None, :]
        else:
            self.H = np.asarray(H, dtype=complex)
            self.J = np.asarray(J, dtype=complex)
            self.J2 = self.J @ self.J

    def __call__(self, rho: np.ndarray, gamma: float, lamb: float) -> np.ndarray:
        if self.diagonal:
            g = -1j * (self.h - lamb * self.j2) - 0.5 * gamma * self.j2
            return (g[:, None] + g.conj()[None, :]) * rho + gamma * self.jj * rho
        G = -1j * (self.H - lamb * self.J2) - 0.5 * gamma * self.J2
        A = G @ rho
        return A + A.conj().T + gamma * (self.J @ rho @ self.J)


def _referencial(
    H_S: Operator, J: Operator, frame: Optional[EigenSystem]
) -> tuple[np.ndarray, np.ndarray, bool]:
    if frame is None:
        return H_S.matrix, J.matrix, H_S.is_diagonal() and J.is_diagonal()
    H = frame.to_eigenbasis(H_S.matrix)
    Jr = frame.to_eigenbasis(J.matrix)
    for nome, original, rot in (("H_S", H_S, H), ("J", J, Jr)):
        fora = np.linalg.norm(rot - np.diag(np.diag(rot)))
        escala = max(np.linalg.norm(original.matrix), 1.0)
        if fora > TOL_COMUTACAO * escala:
            raise ContractViolationError(f"O referencial fornecido não diagonaliza {nome}.")
    return H, Jr, True


def iter_lindblad(
    rho0: DensityMatrix,
    H_S: Operator,
    J: Operator,
    b: BathParams,
    times: Sequence[float],
    steps_per_sample: int,
    frame: Optional[EigenSystem] = None,
) -> Iterator[tuple[float, DensityMatrix]]:
    """
    Gera (t, ρ(t)) integrando a equação mestra com RK4 de passo fixo.

    ρ0 é o estado em t = 0; se times[0] > 0 o estado é integrado até lá
    antes da primeira amostra. Entre amostras consecutivas
    são dados steps_per_sample passos iguais. γ(t) e λ(t) são avaliados
    nos instantes dos estágios do RK4.

    Raises:
        IntegrationQualityError: |Tr ρ − 1| > 1e-6 ou autovalor mínimo < −1e-6
    """
    if isinstance(steps_per_sample, bool) or not isinstance(steps_per_sample, (int, np.integer)) \
            or steps_per_sample < 1:
        raise ValueError("steps_per_sample deve ser um inteiro ≥ 1.")
    if H_S.dim != rho0.dim or J.dim != rho0.dim:
        raise DimensionMismatchError("ρ0, H_S e J devem ter a mesma dimensão.")
    tempos = _validar_tempos(times)
    H, Jm, diagonal = _referencial(H_S, J, frame)
    gerador = _GeradorLindblad(H, Jm, diagonal)
    rho = frame.to_eigenbasis(rho0.entries) if frame is not None else np.array(rho0.entries)

    def para_computacional(matriz: np.ndarray) -> np.ndarray:
        return frame.from_eigenbasis(matriz) if frame is not None else matriz

    def avancar(rho: np.ndarray, t0: float, t1: float) -> np.ndarray:
        dt = (t1 - t0) / steps_per_sample
        # Estágios t, t + dt/2, t + dt de cada passo
        inicio = t0 + dt * np.arange(steps_per_sample)
        estagios = np.stack([inicio, inicio + 0.5 * dt, inicio + dt], axis=1)
        gammas = gamma_total(estagios.ravel(), b).reshape(estagios.shape)
        lambdas = lamb_shift(estagios.ravel(), b).reshape(estagios.shape)
        for n in range(steps_per_sample):
            g0, gm, g1 = gammas[n]
            l0, lm, l1 = lambdas[n]
            k1 = gerador(rho, g0, l0)
            k2 = gerador(rho + 0.5 * dt * k1, gm, lm)
            k3 = gerador(rho + 0.5 * dt * k2, gm, lm)
            k4 = gerador(rho + dt * k3, g1, l1)
            rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = (rho + rho.conj().T) / 2.0

        detalhes = {"steps_per_sample": steps_per_sample, "dt": dt, "gamma0": b.gamma0, "h": b.h}
        deriva = abs(np.trace(rho).real - 1.0)
        if deriva > TOL_DERIVA_RK4:
            raise IntegrationQualityError(f"Deriva do traço {deriva:.3g}", float(t1), detalhes)
        minimo = float(linalg.eigvalsh(rho)[0])
        if minimo < -TOL_DERIVA_RK4:
            raise IntegrationQualityError(f"Autovalor mínimo {minimo:.3g}", float(t1), detalhes)
        return rho

    # ρ0 é o estado em t = 0, como no motor exato
    if tempos[0] > 0.0:
        rho = avancar(rho, 0.0, float(tempos[0]))
        yield float(tempos[0]), _estado_hermitiano(para_computacional(rho))
    else:
        yield float(tempos[0]), rho0
    for t0, t1 in zip(tempos[:-1], tempos[1:]):
        rho = avancar(rho, float(t0), float(t1))
        yield float(t1), _estado_hermitiano(para_computacional(rho))


def evolve_lindblad(
    rho0: DensityMatrix,
    H_S: Operator,
    J: Operator,
    b: BathParams,
    times: Sequence[float],
    steps_per_sample: int,
    frame: Optional[EigenSystem] = None,
    store: StorePolicy = StorePolicy.PERIODS,
    model: Optional[ModelParams] = None,
    on_sample: Optional[Observador] = None,
) -> Trajectory:
    """
    Integração RK4 da equação mestra de Lindblad dependente do tempo.

    Args:
        frame: Se dado, integra no referencial dessa base (onde H_S e J são
            diagonais); caso contrário, integra na base computacional
    """
    tempos = _validar_tempos(times)
    logger.info(
        "Motor Lindblad: %d amostras, %d passos/amostra, referencial %s",
        tempos.size, steps_per_sample, "próprio" if frame is not None else "computacional",
    )
    return _montar_trajetoria(
        iter_lindblad(rho0, H_S, J, b, tempos, steps_per_sample, frame),
        tempos, EngineTag.LINDBLAD, b, model, store, on_sample,
    )


# ==================== COMPARAÇÃO ENTRE MOTORES ====================


def compare_engines(
    rho0: DensityMatrix,
    H_S: Operator,
    J: Operator,
    eig: EigenSystem,
    b: BathParams,
    times: Sequence[float],
    steps_per_sample: int,
    frame: Optional[EigenSystem] = None,
    store: StorePolicy = StorePolicy.PERIODS,
    model: Optional[ModelParams] = None,
    on_sample: Optional[Observador] = None,
) -> tuple[Trajectory, float]:
    """
    Roda os dois motores lado a lado, amostra por amostra.

    Returns:
        (trajetória do motor exato, máxima distância de traço entre os motores)
    """
    tempos = _validar_tempos(times)
    distancias: list[float] = []

    def pares() -> Iterator[tuple[float, DensityMatrix]]:
        exatos = iter_exact(rho0, eig, b, tempos)
        numericos = iter_lindblad(rho0, H_S, J, b, tempos, steps_per_sample, frame)
        for (t, rho_exato), (_, rho_rk4) in zip(exatos, numericos):
            distancias.append(trace_distance(rho_exato, rho_rk4))
            yield t, rho_exato

    logger.info("Comparação de motores: %d amostras", tempos.size)
    trajetoria = _montar_trajetoria(pares(), tempos, EngineTag.EXACT, b, model, store, on_sample)
    maxima = max(distancias) if distancias else 0.0
    logger.info("Máxima distância de traço entre motores: %.3g", maxima)
    return trajetoria, maxima
