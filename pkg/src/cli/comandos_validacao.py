"""
Comandos CLI para a bateria de invariantes e as tabelas de taxas.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from .formatadores import SAIDA_SIMULACAO, carregar_config, get_gerenciador, tratar_erros


@click.command("validate")
@click.option("--config", "-c", type=click.Path(dir_okay=False),
              help="Valida também o esquema deste arquivo antes da bateria")
@click.option("--sem-fechamento", is_flag=True, hidden=True,
              help="Depuração: remove a ligação σ^x_N σ^x_1 (controle negativo)")
@tratar_erros
def validate(config: Optional[str], sem_fechamento: bool):
    """🔬 Executa a bateria de invariantes; saída 0 se todos passarem."""
    if config:
        carregar_config(config, None)
        click.echo(f"✅ Configuração válida: {config}")

    verificacoes = get_gerenciador().validate(closure_bond=not sem_fechamento)

    click.echo("\n🔬 BATERIA DE INVARIANTES")
    click.echo("=" * 70)
    for v in verificacoes:
        marca = "✅" if v.passou else "❌"
        click.echo(f"   {marca} {v.nome:<36} {v.detalhe}")

    falhas = [v for v in verificacoes if not v.passou]
    click.echo("-" * 70)
    if falhas:
        click.echo(f"❌ {len(falhas)} de {len(verificacoes)} invariantes falharam.", err=True)
        sys.exit(SAIDA_SIMULACAO)
    click.echo(f"✅ {len(verificacoes)} invariantes verificados.")


@click.command("rates")
@click.option("--config", "-c", type=click.Path(dir_okay=False), help="Arquivo JSON do experimento")
@click.option("--preset", "-p", help="Preset de data/presets")
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Diretório de saída")
@click.option("--pontos", type=click.IntRange(min=1), help="Amostras por período (padrão: samples_per_period)")
@tratar_erros
def rates(config: Optional[str], preset: Optional[str], out: Optional[str], pontos: Optional[int]):
    """📉 Grava γ₁(t), γ(t), λ(t), Γ(t) e Λ(t) em CSV."""
    cfg = carregar_config(config, preset)
    caminho, regime = get_gerenciador().rates(cfg, Path(out) if out else None, pontos)

    click.echo(f"\n📉 TAXAS DOS BANHOS - '{cfg.name}'")
    click.echo("=" * 50)
    click.echo(f"   max γ₁:          {regime['max_gamma1']:.6g}")
    click.echo(f"   min γ:           {regime['min_gamma']:.6g}")
    click.echo(f"   Fração γ < 0:    {regime['negative_fraction']:.3f}")
    status = "🟢 Markoviano" if regime["markovian"] else "🔴 Não markoviano"
    click.echo(f"   Regime:          {status}")
    click.echo(f"\n✅ CSV: {caminho}")
