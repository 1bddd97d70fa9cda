"""
Testes para o armazenamento JSON/CSV e o gerenciador de experimentos.
"""

import csv
import hashlib
import json

import pytest

from src.models.configuracao import ExperimentConfig
from src.models.erros import ConfigError
from src.persistence.gerenciador_dados import GerenciadorExperimentos, _workers_padrao
from src.persistence.json_storage import JsonStorage


@pytest.fixture
def gerenciador(tmp_path):
    """Gerenciador com diretório de dados vazio (configurações padrão)."""
    return GerenciadorExperimentos(str(tmp_path / "dados"))


@pytest.fixture
def cfg(dados_config):
    return ExperimentConfig.from_dict(dados_config)


def _ler_csv(caminho):
    with open(caminho, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


class TestJsonStorage:
    """Testes para JsonStorage."""

    def test_configuracoes_padrao(self, tmp_path):
        """Testa os padrões quando settings.json não existe."""
        config = JsonStorage(str(tmp_path)).carregar_configuracoes()
        assert config["workers"] is None
        assert config["tolerancias"]["comutador"] == 1e-10

    def test_configuracoes_do_arquivo(self, tmp_path):
        """Testa que settings.json sobrescreve os padrões."""
        (tmp_path / "settings.json").write_text(json.dumps({"workers": 2}), encoding="utf-8")
        config = JsonStorage(str(tmp_path)).carregar_configuracoes()
        assert config["workers"] == 2
        assert "tolerancias" in config

    def test_experimento_inexistente(self, tmp_path):
        """Testa arquivo de experimento ausente."""
        with pytest.raises(ConfigError, match="não encontrado"):
            JsonStorage(str(tmp_path)).carregar_experimento(str(tmp_path / "nada.json"))

    def test_json_invalido(self, tmp_path):
        """Testa arquivo com JSON malformado."""
        arquivo = tmp_path / "ruim.json"
        arquivo.write_text("{model: ", encoding="utf-8")
        with pytest.raises(ConfigError, match="erro ao ler"):
            JsonStorage(str(tmp_path)).carregar_experimento(str(arquivo))

    def test_presets_incluidos(self):
        """Testa os presets distribuídos em data/presets."""
        storage = JsonStorage()
        nomes = storage.listar_presets()
        assert {"anel_fechado", "sem_corrente", "nao_markoviano", "banhos_combinados"} <= set(nomes)
        for nome in nomes:
            preset = storage.carregar_preset(nome)
            assert preset.model.N_A == 6 and preset.model.N_B == 2
            assert preset.name == nome

    @pytest.mark.parametrize("nome, nu, gamma0, h, periodos", [
        ("anel_fechado", 5.0, 0.0, 0.0, 1),
        ("sem_corrente", 0.0, 0.2827, 0.0, 1),
        ("markoviano", 5.0, 0.2827, 0.0, 1),
        ("nao_markoviano", 5.0, 0.0, 0.5, 1),
        ("banhos_combinados", 5.0, 0.2827, 0.5, 1),
        ("magnetizacao_markoviana", 5.0, 0.2827, 0.0, 2),
        ("magnetizacao_nao_markoviana", 5.0, 0.0, 0.5, 2),
    ])
    def test_experimentos_de_referencia(self, nome, nu, gamma0, h, periodos):
        """Testa os parâmetros de cada experimento de referência distribuído."""
        preset = JsonStorage().carregar_preset(nome)
        assert (preset.model.tau, preset.model.H_field, preset.model.nu) == (0.42, 1.0, nu)
        assert (preset.bath.gamma0, preset.bath.h, preset.bath.z, preset.bath.M) == (gamma0, h, 0.1, 60)
        assert preset.run.periods == periodos
        assert preset.run.samples_per_period == 2000

    def test_preset_desconhecido(self):
        """Testa nome de preset inexistente."""
        with pytest.raises(ConfigError, match="preset desconhecido"):
            JsonStorage().carregar_preset("inexistente")

    def test_tabela_e_hash(self, tmp_path):
        """Testa o hash devolvido por salvar_tabela."""
        caminho = tmp_path / "sub" / "tabela.csv"
        sha = JsonStorage(str(tmp_path)).salvar_tabela(caminho, ["a", "b"], [[1, 2], [3, 4]])
        assert caminho.read_bytes() == b"a,b\n1,2\n3,4\n"
        assert sha == hashlib.sha256(caminho.read_bytes()).hexdigest()


class TestRunQuench:
    """Testes para o protocolo de quench."""

    def test_arquivos_escritos(self, gerenciador, cfg, tmp_path):
        """Testa CSV e manifesto com uma linha por amostra."""
        resultado = gerenciador.run_quench(cfg, tmp_path / "saida")
        linhas = _ler_csv(resultado.csv_path)
        assert linhas[0][:3] == ["t_over_T", "gamma_t", "lambda_t"]
        assert len(linhas) == 1 + 41
        assert float(linhas[-1][0]) == pytest.approx(1.0)
        assert resultado.manifest_path.exists()
        assert resultado.manifest.csv_sha256 == hashlib.sha256(resultado.csv_path.read_bytes()).hexdigest()

    def test_constantes_derivadas(self, gerenciador, cfg, tmp_path):
        """Testa as constantes gravadas no manifesto."""
        derivadas = gerenciador.run_quench(cfg, tmp_path).manifest.derived
        for chave in ("period", "max_gamma1", "min_gamma", "markovian", "J_0", "J_A_0", "J_B_0",
                      "ground_energy_A", "ground_energy_B", "P_crossings", "M_x_sign_changes"):
            assert chave in derivadas
        assert derivadas["ground_energy_A"] == pytest.approx(-0.42)
        assert derivadas["dim"] == 16

    def test_registros_validos(self, gerenciador, cfg, tmp_path):
        """Testa |Tr ρ − 1| ≤ 1e-9 em todas as amostras."""
        resultado = gerenciador.run_quench(cfg, tmp_path)
        assert resultado.records[0].rate_function == pytest.approx(0.0, abs=1e-12)
        assert all(r.trace_dev <= 1e-9 for r in resultado.records)
        assert all(r.purity <= 1.0 + 1e-9 for r in resultado.records)

    def test_deterministico(self, gerenciador, cfg, tmp_path):
        """Testa CSVs idênticos byte a byte para a mesma configuração."""
        primeiro = gerenciador.run_quench(cfg, tmp_path / "a").csv_path.read_bytes()
        segundo = gerenciador.run_quench(cfg, tmp_path / "b").csv_path.read_bytes()
        assert primeiro == segundo

    def test_reexecucao_pelo_manifesto(self, gerenciador, cfg, tmp_path):
        """Testa que a configuração ecoada no manifesto reproduz o CSV."""
        resultado = gerenciador.run_quench(cfg, tmp_path / "a")
        manifesto = gerenciador.storage.carregar_manifesto(resultado.manifest_path)
        refeito = gerenciador.run_quench(manifesto.config, tmp_path / "b")
        assert refeito.manifest.csv_sha256 == manifesto.csv_sha256

    def test_motores_comparados(self, gerenciador, dados_config, tmp_path):
        """Testa engine=both com a distância entre motores no manifesto."""
        dados_config["run"].update(engine="both", rk4_steps_per_sample=100)
        resultado = gerenciador.run_quench(ExperimentConfig.from_dict(dados_config), tmp_path)
        assert resultado.manifest.cross_check_distance is not None
        assert resultado.manifest.cross_check_distance <= 1e-6
        assert resultado.manifest.derived["lindblad_frame"] == "computational"

    def test_motores_comparados_no_referencial_proprio(self, gerenciador, dados_config, tmp_path):
        """Testa lindblad_frame=eigen registrado no manifesto."""
        dados_config["run"].update(engine="both", rk4_steps_per_sample=100, lindblad_frame="eigen")
        resultado = gerenciador.run_quench(ExperimentConfig.from_dict(dados_config), tmp_path)
        assert resultado.manifest.cross_check_distance <= 1e-6
        assert resultado.manifest.derived["lindblad_frame"] == "eigen"

    def test_motor_lindblad_no_referencial_computacional(self, gerenciador, dados_config, tmp_path):
        """Testa engine=lindblad com integração na base computacional."""
        dados_config["run"].update(
            engine="lindblad", rk4_steps_per_sample=1000, lindblad_frame="computational", samples_per_period=8
        )
        resultado = gerenciador.run_quench(ExperimentConfig.from_dict(dados_config), tmp_path)
        assert len(resultado.records) == 9
        assert resultado.manifest.cross_check_distance is None


class TestRunSweep:
    """Testes para a varredura de parâmetros."""

    def test_varredura_sequencial(self, gerenciador, cfg, tmp_path):
        """Testa um ponto por valor e o resumo das cúspides."""
        pontos, resumo = gerenciador.run_sweep(cfg, "bath.gamma0", [0.0, 0.2827], tmp_path, workers=1)
        assert [p.ok for p in pontos] == [True, True]
        assert all(p.csv_path for p in pontos)
        linhas = _ler_csv(resumo)
        assert linhas[0][:2] == ["value", "status"] and linhas[0][-1] == "error"
        assert [linha[1] for linha in linhas[1:]] == ["ok", "ok"]
        assert resumo.name == "teste_sweep_bath_gamma0.csv"

    def test_ponto_invalido_nao_interrompe(self, gerenciador, cfg, tmp_path):
        """Testa que um valor rejeitado é registrado e os demais rodam."""
        pontos, resumo = gerenciador.run_sweep(cfg, "bath.gamma0", [-1.0, 0.1], tmp_path, workers=1)
        assert [p.ok for p in pontos] == [False, True]
        assert "bath.gamma0" in pontos[0].erro
        assert _ler_csv(resumo)[1][1] == "failed"

    def test_eixo_inteiro(self, gerenciador, cfg, tmp_path):
        """Testa que valores de chaves inteiras são convertidos."""
        pontos, _ = gerenciador.run_sweep(cfg, "model.N_A", [2.0, 3.0], tmp_path, workers=1)
        assert [p.ok for p in pontos] == [True, True]

    def test_eixo_inexistente(self, gerenciador, cfg, tmp_path):
        """Testa que eixo inválido falha antes de qualquer ponto."""
        with pytest.raises(ConfigError, match="chave inexistente"):
            gerenciador.run_sweep(cfg, "bath.gama0", [0.1], tmp_path, workers=1)

    def test_lista_vazia(self, gerenciador, cfg, tmp_path):
        """Testa que a lista de valores não pode ser vazia."""
        with pytest.raises(ConfigError, match="vazia"):
            gerenciador.run_sweep(cfg, "bath.gamma0", [], tmp_path, workers=1)

    def test_pool_de_processos(self, gerenciador, cfg, tmp_path):
        """Testa a varredura em paralelo com o mesmo resultado da sequencial."""
        paralelo, _ = gerenciador.run_sweep(cfg, "bath.h", [0.3, 0.7], tmp_path / "p", workers=2)
        sequencial, _ = gerenciador.run_sweep(cfg, "bath.h", [0.3, 0.7], tmp_path / "s", workers=1)
        assert [p.cusp_times for p in paralelo] == [s.cusp_times for s in sequencial]


class TestWorkers:
    """Testes para o tamanho padrão do pool."""

    def test_variavel_de_ambiente(self, monkeypatch):
        """Testa DQPT_WORKERS acima de settings.json."""
        monkeypatch.setenv("DQPT_WORKERS", "3")
        assert _workers_padrao({"workers": 5}) == 3

    def test_settings(self, monkeypatch):
        """Testa workers de settings.json sem a variável."""
        monkeypatch.delenv("DQPT_WORKERS", raising=False)
        assert _workers_padrao({"workers": 5}) == 5

    def test_valor_invalido(self, monkeypatch):
        """Testa DQPT_WORKERS não numérico."""
        monkeypatch.setenv("DQPT_WORKERS", "muitos")
        with pytest.raises(ConfigError, match="DQPT_WORKERS"):
            _workers_padrao({})


class TestTaxasEValidacao:
    """Testes para rates e a bateria de invariantes."""

    def test_tabela_de_taxas(self, gerenciador, cfg, tmp_path):
        """Testa o CSV de taxas e a classificação do regime."""
        caminho, regime = gerenciador.rates(cfg, tmp_path, pontos_por_periodo=16)
        linhas = _ler_csv(caminho)
        assert linhas[0] == ["t_over_T", "gamma1", "gamma_t", "lambda_t", "Gamma_t", "Lambda_t"]
        assert len(linhas) == 1 + 17
        assert regime["markovian"] is False
        assert caminho.name == "teste_rates.csv"

    @pytest.mark.lento
    def test_bateria_completa(self, gerenciador):
        """Testa que todos os invariantes passam."""
        verificacoes = gerenciador.validate()
        assert all(v.passou for v in verificacoes), [v for v in verificacoes if not v.passou]

    @pytest.mark.lento
    def test_controle_negativo(self, gerenciador):
        """Testa que sem a ligação de fechamento a conservação falha."""
        verificacoes = {v.nome: v for v in gerenciador.validate(closure_bond=False)}
        assert not verificacoes["conservacao [H, J] = 0"].passou
