# Módulo de persistência e serviço de experimentos
from .json_storage import JsonStorage
from .gerenciador_dados import GerenciadorExperimentos

__all__ = ["JsonStorage", "GerenciadorExperimentos"]
