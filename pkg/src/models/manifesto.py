"""
Módulo de Manifesto - Registro legível por máquina de uma execução.
"""

from datetime import datetime
from typing import Any, Optional

from .configuracao import ExperimentConfig


class RunManifest:
    """
    Manifesto de uma execução de quench.

    O eco da configuração basta para refazer a execução; o hash do CSV
    permite auditar o determinismo.

    Attributes:
        config: Configuração validada
        derived: Constantes derivadas (T, max γ₁, ⟨Ĵ(0)⟩, energias fundamentais, ...)
        cusp_times: Cúspides detectadas (t/T, meia largura)
        cross_check_distance: Máxima distância de traço entre motores (engine=both)
        csv_sha256: Hash do CSV escrito
        software_version: Versão do pacote
        wall_time: Duração em segundos
    """

    def __init__(
        self,
        config: ExperimentConfig,
        derived: dict[str, Any],
        software_version: str,
        wall_time: float,
        cusp_times: Optional[list[tuple[float, float]]] = None,
        cross_check_distance: Optional[float] = None,
        csv_sha256: Optional[str] = None,
        created_at: Optional[datetime] = None,
    ):
        if wall_time < 0:
            raise ValueError("wall_time não pode ser negativo.")
        self._config = config
        self._derived = dict(derived)
        self._software_version = software_version
        self._wall_time = float(wall_time)
        self._cusp_times = [(float(t), float(dt)) for t, dt in (cusp_times or [])]
        self._cross_check_distance = cross_check_distance
        self._csv_sha256 = csv_sha256
        self._created_at = created_at or datetime.now()

    # ==================== PROPRIEDADES ====================

    @property
    def config(self) -> ExperimentConfig:
        return self._config

    @property
    def derived(self) -> dict[str, Any]:
        return dict(self._derived)

    @property
    def software_version(self) -> str:
        return self._software_version

    @property
    def wall_time(self) -> float:
        return self._wall_time

    @property
    def cusp_times(self) -> list[tuple[float, float]]:
        return list(self._cusp_times)

    @property
    def cross_check_distance(self) -> Optional[float]:
        return self._cross_check_distance

    @property
    def csv_sha256(self) -> Optional[str]:
        return self._csv_sha256

    @csv_sha256.setter
    def csv_sha256(self, valor: str) -> None:
        if len(valor) != 64:
            raise ValueError("Hash SHA-256 deve ter 64 caracteres hexadecimais.")
        self._csv_sha256 = valor

    @property
    def created_at(self) -> datetime:
        return self._created_at

    def __repr__(self) -> str:
        return (
            f"RunManifest(name={self._config.name!r}, cusps={len(self._cusp_times)}, "
            f"wall_time={self._wall_time:.3f})"
        )

    # ==================== SERIALIZAÇÃO ====================

    def to_dict(self) -> dict:
        return {
            "config": self._config.to_dict(),
            "derived": self._derived,
            "cusp_times": [{"t_over_T": t, "half_step": dt} for t, dt in self._cusp_times],
            "cross_check_distance": self._cross_check_distance,
            "csv_sha256": self._csv_sha256,
            "software_version": self._software_version,
            "wall_time": self._wall_time,
            "created_at": self._created_at.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        return cls(
            config=ExperimentConfig.from_dict(data["config"]),
            derived=data.get("derived", {}),
            software_version=data.get("software_version", ""),
            wall_time=data.get("wall_time", 0.0),
            cusp_times=[(c["t_over_T"], c["half_step"]) for c in data.get("cusp_times", [])],
            cross_check_distance=data.get("cross_check_distance"),
            csv_sha256=data.get("csv_sha256"),
            created_at=datetime.fromisoformat(data["created_at"]) if data.get("created_at") else None,
        )
