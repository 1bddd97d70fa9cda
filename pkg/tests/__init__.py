# Módulo de testes
