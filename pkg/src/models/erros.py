"""
Módulo de Erros - Hierarquia de exceções do simulador.

Todas as exceções derivam de SimulationError e também de um tipo embutido
(ValueError ou ArithmeticError), de modo que quem já trata ValueError
continua funcionando.
"""

from typing import Any, Optional


class SimulationError(Exception):
    """Erro base do simulador (código de saída 1 na CLI)."""


class DimensionOverflowError(SimulationError, ValueError):
    """Número de spins acima do limite configurado."""

    def __init__(self, n_spins: int, limite: int):
        self.n_spins = n_spins
        self.limite = limite
        super().__init__(
            f"N = {n_spins} spins excede o limite configurado ({limite}); "
            f"a dimensão 2^{n_spins} não é permitida."
        )


class SiteIndexError(SimulationError, ValueError):
    """Índice de sítio fora do intervalo [1, N]."""


class DimensionMismatchError(SimulationError, ValueError):
    """Operadores ou estados com dimensões incompatíveis."""


class ContractViolationError(SimulationError, ValueError):
    """Pré-condição de uma operação violada."""


class DegeneracyError(SimulationError, ValueError):
    """Estado fundamental degenerado onde se exige unicidade."""


class InvalidStateError(SimulationError, ValueError):
    """Estado que não satisfaz os invariantes de PureState/DensityMatrix."""


class DegenerateNormalizationError(SimulationError, ArithmeticError):
    """Normalização com denominador nulo (P ≈ 0)."""


class IntegrationQualityError(SimulationError, ArithmeticError):
    """
    Falha de qualidade da integração numérica.

    Attributes:
        t: Instante em que a falha foi detectada
        detalhes: Parâmetros da execução ecoados na mensagem
    """

    def __init__(self, mensagem: str, t: float, detalhes: Optional[dict[str, Any]] = None):
        self.t = t
        self.detalhes = dict(detalhes or {})
        sufixo = ""
        if self.detalhes:
            pares = ", ".join(f"{k}={v!r}" for k, v in sorted(self.detalhes.items()))
            sufixo = f" [{pares}]"
        super().__init__(
            f"{mensagem} em t = {t:.6g}. Reduza o passo (aumente "
            f"rk4_steps_per_sample).{sufixo}"
        )


class ConfigError(SimulationError, ValueError):
    """
    Erro de configuração (código de saída 2 na CLI).

    Attributes:
        caminho: Caminho da chave no formato 'secao.chave'
    """

    def __init__(self, caminho: str, mensagem: str):
        self.caminho = caminho
        super().__init__(f"{caminho}: {mensagem}" if caminho else mensagem)
