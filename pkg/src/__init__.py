# DQPT em anel de Ising - Simulador de transições de fase quânticas dinâmicas
# com banhos de defasagem markoviano e não markoviano

__version__ = "1.0.0"
__author__ = "Grupo de Sistemas Quânticos Abertos"
