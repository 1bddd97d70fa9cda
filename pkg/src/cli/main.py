"""
CLI Principal - Interface de linha de comando do simulador de DQPT.
"""

import click

from .. import __version__
from .comandos_simulacao import simulate, sweep
from .comandos_validacao import rates, validate
from .formatadores import configurar_logging, get_gerenciador


@click.group()
@click.version_option(version=__version__, prog_name="dqpt")
@click.option("--verbose", "-v", is_flag=True, help="Log detalhado (DEBUG) em stderr")
def cli(verbose: bool):
    """
    🌀 Transições de fase quânticas dinâmicas em um anel de Ising.

    Quenches com banhos de defasagem markoviano e não markoviano
    acoplados pela corrente de energia conservada.
    """
    configurar_logging(verbose)


# Registrar comandos de execução
cli.add_command(simulate)
cli.add_command(sweep)

# Registrar comandos de verificação
cli.add_command(validate)
cli.add_command(rates)


@cli.command("presets")
def presets():
    """📚 Lista os presets disponíveis."""
    nomes = get_gerenciador().storage.listar_presets()
    if not nomes:
        click.echo("📭 Nenhum preset encontrado.")
        return
    click.echo("\n📚 PRESETS")
    for nome in nomes:
        click.echo(f"   • {nome}")


if __name__ == "__main__":
    cli()
