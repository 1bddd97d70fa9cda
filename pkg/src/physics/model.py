"""
Hamiltonianos e operadores de corrente do anel de Ising.

Ĥ^S = −τ Σ_{j=1}^{N} σ^x_j σ^x_{j+1} − H Σ_j σ^z_j, com σ_{N+1} ≡ σ_1.
Ĵ   = (Hτ/2) Σ_j σ^y_j (σ^x_{j−1} − σ^x_{j+1}), índices periódicos.

Os operadores das cadeias A e B são construídos nos seus próprios espaços
(2^{N_A} ou 2^{N_B}); use full_space=True para obtê-los no anel inteiro.
"""

from enum import Enum
from typing import Union

from ..models.erros import ContractViolationError
from ..models.operador import MAX_SPINS_PADRAO, Operator, verificar_numero_spins
from ..models.parametros import ModelParams
from .spinops import embed, pauli, pauli_string


class Segment(Enum):
    """Cadeia do anel."""
    A = "A"
    B = "B"


def _parse_segment(segment: Union[Segment, str]) -> Segment:
    if isinstance(segment, Segment):
        return segment
    try:
        return Segment(str(segment).upper())
    except ValueError:
        raise ValueError(f"Segmento inválido: {segment!r}. Use A ou B.") from None


def build_open_tfim(n: int, tau: float, campo: float, max_spins: int = MAX_SPINS_PADRAO) -> Operator:
    """−τ Σ_{j=1}^{n−1} σ^x_j σ^x_{j+1} − campo Σ_j σ^z_j numa cadeia aberta de n spins."""
    H = Operator.zeros(n)
    for j in range(1, n):
        H = H - tau * pauli_string({j: "x", j + 1: "x"}, n, max_spins)
    if campo != 0.0:
        for j in range(1, n + 1):
            H = H - campo * pauli("z", j, n, max_spins)
    return H


def _corrente_aberta(n: int, prefator: float, max_spins: int) -> Operator:
    """
    prefator × [Σ_interior σ^y_j(σ^x_{j−1} − σ^x_{j+1}) − σ^y_1 σ^x_2 + σ^y_n σ^x_{n−1}]
    numa cadeia aberta de n spins.
    """
    if n < 2:
        raise ContractViolationError("Corrente local exige segmento com pelo menos 2 sítios.")
    K = pauli_string({1: "y", 2: "x"}, n, max_spins) * -1.0
    K = K + pauli_string({n: "y", n - 1: "x"}, n, max_spins)
    for j in range(2, n):
        K = K + pauli_string({j: "y", j - 1: "x"}, n, max_spins)
        K = K - pauli_string({j: "y", j + 1: "x"}, n, max_spins)
    return prefator * K


def _no_anel(operador: Operator, p: ModelParams, segment: Segment) -> Operator:
    primeiro = 1 if segment is Segment.A else p.N_A + 1
    return embed(operador, primeiro, p.N)


def build_ring_hamiltonian(p: ModelParams, closure_bond: bool = True) -> Operator:
    """
    Hamiltoniano do anel Ĥ^S, incluindo a ligação de fechamento σ^x_N σ^x_1.

    Args:
        p: Parâmetros do modelo
        closure_bond: False remove a ligação de fechamento (controle negativo
            de depuração: Ĵ deixa de ser conservada)
    """
    N = verificar_numero_spins(p.N, p.max_spins)
    H = Operator.zeros(N)
    ultimo = N if closure_bond else N - 1
    for j in range(1, ultimo + 1):
        H = H - p.tau * pauli_string({j: "x", j + 1: "x"}, N, p.max_spins)
    for j in range(1, N + 1):
        H = H - p.H_field * pauli("z", j, N, p.max_spins)
    return H


def build_global_current(p: ModelParams) -> Operator:
    """Corrente de energia conservada Ĵ (unidades Ω²)."""
    N = verificar_numero_spins(p.N, p.max_spins)
    K = Operator.zeros(N)
    for j in range(1, N + 1):
        K = K + pauli_string({j: "y", j - 1: "x"}, N, p.max_spins)
        K = K - pauli_string({j: "y", j + 1: "x"}, N, p.max_spins)
    return (p.H_field * p.tau / 2.0) * K


def build_chain_A_hamiltonian(p: ModelParams, full_space: bool = False) -> Operator:
    """Ĥ^S_A = −τ Σ_{j=1}^{N_A−1} σ^x_j σ^x_{j+1} (cadeia aberta, sem campo)."""
    H_A = build_open_tfim(p.N_A, p.tau, 0.0, p.max_spins)
    return _no_anel(H_A, p, Segment.A) if full_space else H_A


def build_local_current(
    p: ModelParams,
    segment: Union[Segment, str],
    full_space: bool = False,
) -> Operator:
    """
    Corrente local Ĵ_A ou Ĵ_B com contorno aberto.

    Raises:
        ContractViolationError: Segmento com menos de 2 sítios
    """
    seg = _parse_segment(segment)
    n = p.N_A if seg is Segment.A else p.N_B
    J_local = _corrente_aberta(n, p.H_field * p.tau / 2.0, p.max_spins)
    return _no_anel(J_local, p, seg) if full_space else J_local


def build_chain_B_hamiltonian(p: ModelParams, full_space: bool = False) -> Operator:
    """Ĥ^S_B = −τ Σ σ^x σ^x − H Σ σ^z − ν Ĵ_B na cadeia B (fonte de corrente)."""
    H_B = build_open_tfim(p.N_B, p.tau, p.H_field, p.max_spins)
    if p.nu != 0.0:
        H_B = H_B - p.nu * build_local_current(p, Segment.B)
    return _no_anel(H_B, p, Segment.B) if full_space else H_B
