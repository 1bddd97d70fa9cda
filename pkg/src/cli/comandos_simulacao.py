"""
Comandos CLI para execução de quenches e varreduras.
"""

from pathlib import Path
from typing import Optional

import click

from .formatadores import (
    carregar_config,
    formatar_cuspides,
    get_gerenciador,
    parse_valores,
    tratar_erros,
)


@click.command("simulate")
@click.option("--config", "-c", type=click.Path(dir_okay=False), help="Arquivo JSON do experimento")
@click.option("--preset", "-p", help="Preset de data/presets (ex. anel_fechado)")
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Diretório de saída")
@tratar_erros
def simulate(config: Optional[str], preset: Optional[str], out: Optional[str]):
    """🌀 Executa um quench e grava o CSV de observáveis e o manifesto."""
    cfg = carregar_config(config, preset)
    resultado = get_gerenciador().run_quench(cfg, Path(out) if out else None)
    manifesto = resultado.manifest
    derivadas = manifesto.derived

    click.echo(f"\n🌀 QUENCH '{cfg.name}' - motor {cfg.run.engine}")
    click.echo("=" * 50)
    click.echo(f"   Amostras:          {len(resultado.records)}")
    click.echo(f"   ⟨J(0)⟩:            {derivadas['J_0']:.6g}")
    click.echo(f"   max γ₁:            {derivadas['max_gamma1']:.6g}")
    regime = "markoviano" if derivadas["markovian"] else "não markoviano"
    click.echo(f"   Regime:            {regime} (min γ = {derivadas['min_gamma']:.4g})")
    click.echo(f"   Cúspides (t/T):    {formatar_cuspides(manifesto.cusp_times)}")
    if manifesto.cross_check_distance is not None:
        click.echo(f"   Distância motores: {manifesto.cross_check_distance:.3g}")
    click.echo(f"\n✅ CSV: {resultado.csv_path}")
    click.echo(f"✅ Manifesto: {resultado.manifest_path}")


@click.command("sweep")
@click.option("--config", "-c", type=click.Path(dir_okay=False), help="Arquivo JSON do experimento base")
@click.option("--preset", "-p", help="Preset base de data/presets")
@click.option("--axis", "-a", required=True, help="Chave varrida (ex. bath.gamma0)")
@click.option("--values", "-V", "valores", required=True, help="Valores separados por vírgula")
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Diretório de saída")
@click.option("--workers", "-w", type=click.IntRange(min=1), help="Processos do pool (padrão: DQPT_WORKERS)")
@tratar_erros
def sweep(
    config: Optional[str],
    preset: Optional[str],
    axis: str,
    valores: str,
    out: Optional[str],
    workers: Optional[int],
):
    """📈 Varre uma chave numérica e resume as cúspides de cada ponto."""
    base = carregar_config(config, preset)
    pontos, resumo = get_gerenciador().run_sweep(
        base, axis, parse_valores(valores), Path(out) if out else None, workers
    )

    click.echo(f"\n📈 VARREDURA de {axis} ({len(pontos)} pontos)")
    click.echo("=" * 60)
    for ponto in pontos:
        if ponto.ok:
            cusps = ", ".join(f"{t:.4f}" for t in ponto.cusp_times) or "nenhuma"
            click.echo(f"   🟢 {ponto.value:<10g} cúspides: {cusps}")
        else:
            click.echo(f"   🔴 {ponto.value:<10g} falhou: {ponto.erro}")
    click.echo(f"\n✅ Resumo: {resumo}")
    falhas = sum(not p.ok for p in pontos)
    if falhas:
        click.echo(f"⚠️  {falhas} ponto(s) falharam.", err=True)
