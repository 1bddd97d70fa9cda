"""
Módulo de Persistência - Leitura de configurações e presets em JSON e
escrita dos resultados (CSV de observáveis, manifestos, tabelas).
"""

import csv
import hashlib
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from ..models.configuracao import ExperimentConfig
from ..models.erros import ConfigError
from ..models.manifesto import RunManifest
from ..models.trajetoria import ObservableRecord

logger = logging.getLogger(__name__)

DATA_DIR_PADRAO = Path(__file__).resolve().parents[2] / "data"


class JsonStorage:
    """
    Classe responsável pelos arquivos do simulador.

    Attributes:
        data_dir: Diretório com settings.json e presets/
    """

    def __init__(self, data_dir: Optional[str] = None):
        self._data_dir = Path(data_dir) if data_dir is not None else DATA_DIR_PADRAO
        self._settings_file = self._data_dir / "settings.json"
        self._presets_dir = self._data_dir / "presets"

    # ==================== PROPRIEDADES ====================

    @property
    def data_dir(self) -> Path:
        """Retorna o diretório de dados."""
        return self._data_dir

    # ==================== CONFIGURAÇÕES ====================

    def carregar_configuracoes(self) -> dict[str, Any]:
        """
        Carrega as configurações globais de settings.json.

        Returns:
            Configurações do arquivo sobre os valores padrão
        """
        config = self._configuracoes_padrao()
        data = self._ler_json(self._settings_file) if self._settings_file.exists() else None
        if isinstance(data, dict):
            config.update(data)
        return config

    def _configuracoes_padrao(self) -> dict[str, Any]:
        """Retorna as configurações padrão do simulador."""
        return {
            "workers": None,
            "tolerancias": {
                "comutador": 1e-10,
                "motores": 1e-6,
            },
        }

    # ==================== EXPERIMENTOS E PRESETS ====================

    def carregar_experimento(self, caminho: str) -> ExperimentConfig:
        """
        Lê e valida um arquivo de experimento.

        Raises:
            ConfigError: Arquivo ilegível ou fora do esquema
        """
        arquivo = Path(caminho)
        if not arquivo.exists():
            raise ConfigError("", f"arquivo não encontrado: {arquivo}")
        return ExperimentConfig.from_dict(self._ler_json(arquivo))

    def listar_presets(self) -> list[str]:
        """Nomes dos presets disponíveis (sem extensão)."""
        if not self._presets_dir.exists():
            return []
        return sorted(p.stem for p in self._presets_dir.glob("*.json"))

    def carregar_preset(self, nome: str) -> ExperimentConfig:
        """Carrega um preset de data/presets pelo nome (ex. 'anel_fechado')."""
        arquivo = self._presets_dir / f"{nome}.json"
        if not arquivo.exists():
            raise ConfigError("", f"preset desconhecido: {nome!r}")
        return ExperimentConfig.from_dict(self._ler_json(arquivo))

    # ==================== RESULTADOS ====================

    def salvar_csv(
        self, caminho: Path, registros: Sequence[ObservableRecord], precisao: int
    ) -> str:
        """
        Escreve o CSV de observáveis.

        Returns:
            SHA-256 do conteúdo escrito
        """
        buffer = io.StringIO()
        escritor = csv.writer(buffer, lineterminator="\n")
        escritor.writerow(ObservableRecord.COLUNAS)
        for registro in registros:
            escritor.writerow(registro.to_row(precisao))
        return self._escrever_texto(caminho, buffer.getvalue())

    def salvar_tabela(
        self, caminho: Path, cabecalho: Sequence[str], linhas: Iterable[Sequence[Any]]
    ) -> str:
        """Escreve uma tabela CSV genérica (resumo de varredura, taxas)."""
        buffer = io.StringIO()
        escritor = csv.writer(buffer, lineterminator="\n")
        escritor.writerow(cabecalho)
        escritor.writerows(linhas)
        return self._escrever_texto(caminho, buffer.getvalue())

    def salvar_manifesto(self, caminho: Path, manifesto: RunManifest) -> None:
        self._escrever_json(caminho, manifesto.to_dict())

    def carregar_manifesto(self, caminho: Path) -> RunManifest:
        return RunManifest.from_dict(self._ler_json(Path(caminho)))

    # ==================== MÉTODOS AUXILIARES ====================

    def _ler_json(self, filepath: Path) -> Any:
        """
        Lê dados de um arquivo JSON.

        Raises:
            ConfigError: JSON inválido ou arquivo ilegível
        """
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                return json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            raise ConfigError("", f"erro ao ler {filepath}: {e}") from e

    def _escrever_json(self, filepath: Path, data: Any) -> None:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        try:
            with open(filepath, "w", encoding="utf-8") as f:
                json.dump(data, f, ensure_ascii=False, indent=2)
        except OSError as e:
            logger.error("Erro ao escrever %s: %s", filepath, e)
            raise

    def _escrever_texto(self, filepath: Path, texto: str) -> str:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        dados = texto.encode("utf-8")
        with open(filepath, "wb") as f:
            f.write(dados)
        logger.debug("Escrito %s (%d bytes)", filepath, len(dados))
        return hashlib.sha256(dados).hexdigest()
