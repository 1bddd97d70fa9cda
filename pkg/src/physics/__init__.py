# Módulo de física: operadores, modelo, banhos, preparação, motores e observáveis
from . import bathrates, engine, model, observables, prep, spinops

__all__ = ["spinops", "model", "bathrates", "prep", "engine", "observables"]
