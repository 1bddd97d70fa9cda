"""
Fixtures compartilhadas pelos testes.
"""

import json

import pytest

from src.models.parametros import BathParams, ModelParams
from src.physics import engine, model, prep


@pytest.fixture
def anel_pequeno():
    """Anel 2+2 (dimensão 16) com os parâmetros de referência."""
    return ModelParams(N_A=2, N_B=2, tau=0.42, H_field=1.0, nu=5.0)


@pytest.fixture
def banho_nao_markoviano():
    """Banhos markoviano e não markoviano ativos."""
    return BathParams(gamma0=0.2827, h=0.5)


@pytest.fixture
def operadores(anel_pequeno):
    """(H, J, autossistema, ρ0) do anel pequeno."""
    H = model.build_ring_hamiltonian(anel_pequeno)
    J = model.build_global_current(anel_pequeno)
    eig = engine.simultaneous_eigensystem(H, J)
    return H, J, eig, prep.initial_density_matrix(anel_pequeno)


@pytest.fixture
def dados_config():
    """Configuração mínima de um quench rápido (anel 2+2, 40 amostras)."""
    return {
        "name": "teste",
        "model": {"N_A": 2, "N_B": 2, "tau": 0.42, "H_field": 1.0, "nu": 5.0},
        "bath": {"gamma0": 0.1, "h": 0.5},
        "run": {"engine": "exact", "periods": 1, "samples_per_period": 40},
    }


@pytest.fixture
def arquivo_config(tmp_path, dados_config):
    """Arquivo JSON com a configuração mínima."""
    caminho = tmp_path / "experimento.json"
    caminho.write_text(json.dumps(dados_config), encoding="utf-8")
    return caminho
