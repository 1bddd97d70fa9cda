"""
Funções escalares derivadas dos banhos: γ₁(t), γ(t), λ(t), Γ(t), Λ(t).

Convenção de unidades: Ĵ tem unidades Ω² e g_l tem unidades Ω⁻¹, de modo
que g_l Ĵ tem unidades Ω. Internamente Ω = 1; BathParams.Omega permite
outra escala mantendo as mesmas fórmulas.

Todas as funções aceitam t escalar ou vetor e devolvem o mesmo formato.
"""

import math
from typing import Union

import numpy as np
from scipy import integrate, optimize

from ..models.erros import ContractViolationError
from ..models.parametros import BathParams

Tempo = Union[float, np.ndarray]

# Acima deste argumento coth(x) = 1 em precisão dupla
_COTH_SATURACAO = 40.0


def _coth_termico(b: BathParams) -> np.ndarray:
    """coth(β_NMB ω_l / 2) por modo, estável para argumentos grandes."""
    omega = b.frequencies
    if math.isinf(b.beta_NMB):
        return np.ones_like(omega)
    x = b.beta_NMB * omega / 2.0
    resultado = np.ones_like(x)
    pequenos = x <= _COTH_SATURACAO
    resultado[pequenos] = 1.0 / np.tanh(x[pequenos])
    return resultado


def _como_saida(valores: np.ndarray, t: Tempo) -> Tempo:
    return float(valores) if np.ndim(t) == 0 else valores


def _fase(t: Tempo, b: BathParams) -> np.ndarray:
    """Matriz ω_l t com shape (..., M)."""
    return np.multiply.outer(np.asarray(t, dtype=float), b.frequencies)


def gamma1(t: Tempo, b: BathParams) -> Tempo:
    """Taxa não markoviana γ₁(t) = Σ (g_l²/ω_l) sin(ω_l t) coth(β ω_l/2)."""
    pesos = b.couplings ** 2 / b.frequencies * _coth_termico(b)
    return _como_saida(np.sin(_fase(t, b)) @ pesos, t)


def gamma_total(t: Tempo, b: BathParams) -> Tempo:
    """Taxa de defasagem γ(t) = 2γ₀ + 2γ₁(t)."""
    return _como_saida(2.0 * b.gamma0 + 2.0 * np.asarray(gamma1(t, b)), t)


def lamb_shift(t: Tempo, b: BathParams) -> Tempo:
    """λ(t) = Σ (g_l²/ω_l)[1 − cos(ω_l t)] ≥ 0."""
    pesos = b.couplings ** 2 / b.frequencies
    # 1 − cos x = 2 sin²(x/2), sem cancelamento perto de x = 0
    return _como_saida((2.0 * np.sin(_fase(t, b) / 2.0) ** 2) @ pesos, t)


def big_gamma(t: Tempo, b: BathParams) -> Tempo:
    """Γ(t) = γ₀ t + Σ (g_l/ω_l)² [1 − cos(ω_l t)] coth(β ω_l/2)."""
    pesos = (b.couplings / b.frequencies) ** 2 * _coth_termico(b)
    periodica = (2.0 * np.sin(_fase(t, b) / 2.0) ** 2) @ pesos
    return _como_saida(b.gamma0 * np.asarray(t, dtype=float) + periodica, t)


def big_lambda(t: Tempo, b: BathParams) -> Tempo:
    """Λ(t) = Σ (g_l/ω_l)² [ω_l t − sin(ω_l t)]."""
    pesos = (b.couplings / b.frequencies) ** 2
    fase = _fase(t, b)
    return _como_saida((fase - np.sin(fase)) @ pesos, t)


def coupling_spectrum(b: BathParams) -> tuple[np.ndarray, np.ndarray]:
    """Pares (ω_l, g_l) dos modos do banho não markoviano."""
    return b.frequencies, b.couplings


# ==================== VERIFICAÇÕES ANALÍTICAS ====================


def gamma1_closed_form(t: Tempo, b: BathParams) -> Tempo:
    """
    Limite M → ∞ de γ₁ a temperatura nula:
    (h²/Ω⁵) arctan(e^{−z} sin θ / (1 − e^{−z} cos θ)), θ = Ωt.

    Raises:
        ContractViolationError: Se beta_NMB for finito
    """
    if not math.isinf(b.beta_NMB):
        raise ContractViolationError("Forma fechada de γ₁ só vale para beta_NMB infinito.")
    theta = b.Omega * np.asarray(t, dtype=float)
    r = math.exp(-b.z)
    valores = (b.h ** 2 / b.Omega ** 5) * np.arctan2(r * np.sin(theta), 1.0 - r * np.cos(theta))
    return _como_saida(valores, t)


def gamma1_max(b: BathParams, samples: int = 4096) -> float:
    """
    Máximo de γ₁ em um período: varredura em grade seguida de refinamento
    limitado em torno do melhor ponto.
    """
    T = b.period
    grade = np.linspace(0.0, T, samples, endpoint=False)
    valores = gamma1(grade, b)
    i = int(np.argmax(valores))
    passo = T / samples
    refinado = optimize.minimize_scalar(
        lambda t: -gamma1(t, b),
        bounds=(grade[i] - passo, grade[i] + passo),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(max(valores[i], -refinado.fun))


def gamma1_period_integral(b: BathParams) -> float:
    """∫₀ᵀ γ₁(t) dt por quadratura adaptativa (nula para ω_l = lΩ)."""
    valor, _ = integrate.quad(lambda t: gamma1(t, b), 0.0, b.period, limit=400)
    return float(valor)


def markovianity(b: BathParams, samples: int = 4096) -> dict:
    """
    Classifica o regime dinâmico: markoviano se γ(t) ≥ 0 em todo o período.

    Returns:
        Dicionário com min_gamma, max_gamma1, negative_fraction e markovian
    """
    grade = np.linspace(0.0, b.period, samples, endpoint=False)
    gamma = gamma_total(grade, b)
    min_gamma = float(np.min(gamma))
    return {
        "min_gamma": min_gamma,
        "max_gamma1": gamma1_max(b, samples),
        "negative_fraction": float(np.mean(gamma < 0.0)),
        "markovian": bool(min_gamma >= 0.0),
    }


def rate_table(b: BathParams, times: np.ndarray) -> dict[str, np.ndarray]:
    """Tabela de γ₁, γ, λ, Γ e Λ nos instantes dados (para gráficos tipo taxa × tempo)."""
    times = np.asarray(times, dtype=float)
    return {
        "t_over_T": times / b.period,
        "gamma1": gamma1(times, b),
        "gamma_t": gamma_total(times, b),
        "lambda_t": lamb_shift(times, b),
        "Gamma_t": big_gamma(times, b),
        "Lambda_t": big_lambda(times, b),
    }
