"""
Funções auxiliares de formatação, parsing e tratamento de erros para a CLI.
"""

import functools
import logging
import sys
from typing import Callable, Optional

import click

from ..models.configuracao import ExperimentConfig
from ..models.erros import ConfigError, SimulationError
from ..persistence.gerenciador_dados import GerenciadorExperimentos

# Códigos de saída
SAIDA_SIMULACAO = 1
SAIDA_CONFIG = 2

# Instância global do gerenciador
_gerenciador: Optional[GerenciadorExperimentos] = None


def get_gerenciador() -> GerenciadorExperimentos:
    """Obtém ou cria a instância do gerenciador."""
    global _gerenciador
    if _gerenciador is None:
        _gerenciador = GerenciadorExperimentos()
    return _gerenciador


def configurar_logging(verbose: bool) -> None:
    """DEBUG com --verbose, WARNING caso contrário."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def tratar_erros(comando: Callable) -> Callable:
    """Converte exceções do simulador em mensagens e códigos de saída."""
    @functools.wraps(comando)
    def envoltorio(*args, **kwargs):
        try:
            return comando(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"❌ Erro de configuração: {exc}", err=True)
            sys.exit(SAIDA_CONFIG)
        except SimulationError as exc:
            click.echo(f"❌ Falha na simulação: {exc}", err=True)
            sys.exit(SAIDA_SIMULACAO)
    return envoltorio


def carregar_config(config: Optional[str], preset: Optional[str]) -> ExperimentConfig:
    """Carrega --config ou --preset (exatamente um dos dois)."""
    if (config is None) == (preset is None):
        raise click.UsageError("Informe exatamente um entre --config e --preset.")
    storage = get_gerenciador().storage
    return storage.carregar_experimento(config) if config else storage.carregar_preset(preset)


def parse_valores(texto: str) -> list[float]:
    """Converte '0,0.1018,0.2827' em lista de floats."""
    try:
        valores = [float(v) for v in texto.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"Lista inválida: {texto}. Use números separados por vírgula.")
    if not valores:
        raise click.BadParameter("A lista de valores está vazia.")
    return valores


def formatar_cuspides(cuspides: list[tuple[float, float]]) -> str:
    """Formata cúspides como 't ± dt' em unidades de T."""
    if not cuspides:
        return "nenhuma"
    return ", ".join(f"{t:.4f} ± {dt:.1e}" for t, dt in cuspides)
