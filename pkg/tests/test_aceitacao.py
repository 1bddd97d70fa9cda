"""
Testes de aceitação no anel 6+2 (dimensão 256).

Lentos: rodam com `pytest -m lento`. Os valores de referência das cúspides
foram medidos na grade de 2000 amostras por período.
"""

import pytest

from src.models.configuracao import ExperimentConfig
from src.persistence.gerenciador_dados import GerenciadorExperimentos

pytestmark = pytest.mark.lento

PASSO = 1.0 / 2000


@pytest.fixture(scope="module")
def gerenciador():
    return GerenciadorExperimentos()


def _preset(gerenciador, nome, tmp_path):
    cfg = gerenciador.storage.carregar_preset(nome)
    return gerenciador.run_quench(cfg, tmp_path), cfg


def _variante(gerenciador, nome, tmp_path, secao, **valores):
    dados = gerenciador.storage.carregar_preset(nome).to_dict()
    dados[secao].update(valores)
    return gerenciador.run_quench(ExperimentConfig.from_dict(dados), tmp_path)


def _varredura(gerenciador, nome, eixo, valores, tmp_path):
    cfg = gerenciador.storage.carregar_preset(nome)
    pontos, _ = gerenciador.run_sweep(cfg, eixo, valores, tmp_path, workers=1)
    assert all(p.ok for p in pontos), [p.erro for p in pontos]
    return [p.cusp_times for p in pontos]


class TestAnelCompleto:
    """Motores e estrutura de cúspides no tamanho de referência."""

    def test_motores_concordam(self, gerenciador, tmp_path):
        """Testa exato × RK4 na base computacional ≤ 1e-6 em 20 amostras com 2·10⁴ passos por período."""
        resultado = _variante(
            gerenciador, "banhos_combinados", tmp_path, "run",
            engine="both", samples_per_period=20, rk4_steps_per_sample=1000,
        )
        assert resultado.manifest.derived["lindblad_frame"] == "computational"
        assert resultado.manifest.cross_check_distance <= 1e-6

    def test_cuspides_coincidem_com_cruzamentos(self, gerenciador, tmp_path):
        """Testa que cada troca de ramo cai a um passo de um cruzamento P_+ = P_−."""
        resultado, cfg = _preset(gerenciador, "anel_fechado", tmp_path)
        passo = 1.0 / cfg.run.samples_per_period
        cuspides = resultado.manifest.cusp_times
        cruzamentos = resultado.manifest.derived["P_crossings"]
        assert cuspides
        assert len(cuspides) == len(cruzamentos)
        for t, _ in cuspides:
            assert min(abs(t - c) for c in cruzamentos) <= passo

    def test_estados_validos_com_taxa_negativa(self, gerenciador, tmp_path):
        """Testa |Tr ρ − 1| ≤ 1e-9 no regime não markoviano."""
        resultado, _ = _preset(gerenciador, "nao_markoviano", tmp_path)
        assert not resultado.manifest.derived["markovian"]
        assert all(r.trace_dev <= 1e-9 for r in resultado.records)

    def test_magnetizacao_sobrevive_ao_banho_nao_markoviano(self, gerenciador, tmp_path):
        """Testa amplitude pico a pico de M_x em [T, 2T] maior sem banho markoviano."""
        amplitudes = {}
        for nome in ("magnetizacao_markoviana", "magnetizacao_nao_markoviana"):
            resultado, _ = _preset(gerenciador, nome, tmp_path / nome)
            M_x = [r.M_x for r in resultado.records if r.t >= 1.0]
            amplitudes[nome] = max(M_x) - min(M_x)
        assert amplitudes["magnetizacao_nao_markoviana"] > amplitudes["magnetizacao_markoviana"]

    def test_deterministico(self, gerenciador, tmp_path):
        """Testa CSVs idênticos para o preset combinado."""
        a, _ = _preset(gerenciador, "banhos_combinados", tmp_path / "a")
        b, _ = _preset(gerenciador, "banhos_combinados", tmp_path / "b")
        assert a.csv_path.read_bytes() == b.csv_path.read_bytes()


class TestAnelFechado:
    """Cúspides, cruzamentos de P_± e zeros de M_x sem banhos."""

    CUSPIDES = [0.1353, 0.4062, 0.6658, 0.9403]
    ZEROS_M_X = [0.1335, 0.4050, 0.6719, 0.9129]

    @pytest.fixture(scope="class")
    def resultado(self, gerenciador, tmp_path_factory):
        cfg = gerenciador.storage.carregar_preset("anel_fechado")
        return gerenciador.run_quench(cfg, tmp_path_factory.mktemp("anel_fechado"))

    def test_quatro_cuspides(self, resultado):
        """Testa as quatro trocas de ramo em um período e suas posições."""
        cuspides = [t for t, _ in resultado.manifest.cusp_times]
        assert len(cuspides) == 4
        assert cuspides == pytest.approx(self.CUSPIDES, abs=PASSO)

    def test_cruzamentos_de_probabilidade(self, resultado):
        """Testa P_+ = P_− a um passo de cada cúspide."""
        cruzamentos = resultado.manifest.derived["P_crossings"]
        assert cruzamentos == pytest.approx(self.CUSPIDES, abs=PASSO)

    def test_zeros_de_magnetizacao(self, resultado):
        """Testa que M_x troca de sinal perto das cúspides, sem coincidir com elas na grade."""
        zeros = resultado.manifest.derived["M_x_sign_changes"]
        assert len(zeros) == 4
        assert zeros == pytest.approx(self.ZEROS_M_X, abs=PASSO)
        desvios = [abs(z - c) for z, c in zip(zeros, self.CUSPIDES)]
        assert max(desvios) <= 0.03
        assert max(desvios) > PASSO


class TestSemCorrente:
    """ν = 0: o estado inicial não é autoestado de Ĵ e a defasagem ainda atua."""

    def test_desvio_da_funcao_taxa(self, gerenciador, tmp_path):
        """Testa max|Δϖ| em relação a γ₀ = 0 crescendo com γ₀."""
        curvas = {}
        for gamma0 in (0.0, 0.2827, 0.5542):
            resultado = _variante(gerenciador, "sem_corrente", tmp_path / f"g{gamma0}", "bath", gamma0=gamma0)
            curvas[gamma0] = [r.rate_function for r in resultado.records]
        desvios = [
            max(abs(a - b) for a, b in zip(curvas[gamma0], curvas[0.0])) for gamma0 in (0.2827, 0.5542)
        ]
        assert desvios == pytest.approx([0.0155, 0.0227], abs=1e-3)
        assert 1e-3 < desvios[0] < desvios[1]


class TestVarreduras:
    """Deslocamento das cúspides com γ₀, h e ν."""

    def test_gamma0_adianta_cuspides_intermediarias(self, gerenciador, tmp_path):
        """Testa as cúspides 2 e 3 adiantando monotonicamente com γ₀."""
        cuspides = _varredura(gerenciador, "markoviano", "bath.gamma0", [0.0, 0.1018, 0.2827, 0.5542], tmp_path)
        segundas = [c[1] for c in cuspides]
        terceiras = [c[2] for c in cuspides]
        assert segundas == pytest.approx([0.4062, 0.4048, 0.4023, 0.4002], abs=PASSO)
        assert terceiras == pytest.approx([0.6658, 0.6623, 0.6603, 0.6588], abs=PASSO)
        assert all(a > b for a, b in zip(segundas, segundas[1:]))
        assert all(a > b for a, b in zip(terceiras, terceiras[1:]))

    def test_h_desloca_ultima_cuspide(self, gerenciador, tmp_path):
        """Testa a última cúspide para h em {0, 0.3, 0.5, 0.7}: atrasa a partir de h = 0.3."""
        cuspides = _varredura(gerenciador, "nao_markoviano", "bath.h", [0.0, 0.3, 0.5, 0.7], tmp_path)
        ultimas = [c[-1] for c in cuspides]
        assert ultimas == pytest.approx([0.9403, 0.9353, 0.9623, 0.9698], abs=PASSO)
        assert ultimas[1] < ultimas[2] < ultimas[3]

    def test_nu_e_primeira_cuspide(self, gerenciador, tmp_path):
        """Testa a primeira cúspide para ν em {1, 3, 5} e o número de trocas de ramo."""
        cuspides = _varredura(gerenciador, "nao_markoviano", "model.nu", [1.0, 3.0, 5.0], tmp_path)
        assert [c[0] for c in cuspides] == pytest.approx([0.1383, 0.1383, 0.1358], abs=PASSO)
        assert [len(c) for c in cuspides] == [3, 3, 4]
