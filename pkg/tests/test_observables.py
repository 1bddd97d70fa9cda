"""
Testes para traço parcial, fidelidade, função taxa, magnetização,
eco de Loschmidt e detecção de cúspides.
"""

import math

import numpy as np
import pytest

from src.models.erros import (
    ContractViolationError,
    DegenerateNormalizationError,
    DimensionMismatchError,
)
from src.models.estados import DensityMatrix, PureState
from src.models.parametros import BathParams
from src.models.trajetoria import Branch
from src.physics import engine, model, observables, prep


def _estado_aleatorio(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


@pytest.fixture
def mais():
    return prep.chain_A_ground("+", 2).to_density_matrix()


@pytest.fixture
def menos():
    return prep.chain_A_ground("-", 2).to_density_matrix()


class TestTracoParcial:
    """Testes para partial_trace_B."""

    def test_estado_produto(self, anel_pequeno):
        """Testa Tr_B ρ(0) = |ψ_+⟩⟨ψ_+|."""
        rho_A = observables.partial_trace_B(prep.initial_density_matrix(anel_pequeno), 2, 2)
        referencia = prep.chain_A_ground("+", 2).to_density_matrix()
        assert np.allclose(rho_A.entries, referencia.entries, atol=1e-12)

    def test_traco_preservado(self):
        """Testa Tr ρ_A = 1, hermiticidade e positividade em 100 estados aleatórios."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            rho_A = observables.partial_trace_B(_estado_aleatorio(rng, 16), 2, 2)
            assert rho_A.trace == pytest.approx(1.0, abs=1e-12)
            assert np.allclose(rho_A.entries, rho_A.entries.conj().T, atol=1e-14)
            assert rho_A.min_eigenvalue >= -1e-12

    def test_estado_de_bell(self):
        """Testa que o traço parcial de um par de Bell é I/2."""
        bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)).to_density_matrix()
        rho_A = observables.partial_trace_B(bell, 1, 1)
        assert np.allclose(rho_A.entries, np.eye(2) / 2.0, atol=1e-14)

    def test_dimensao_incompativel(self, mais):
        """Testa que dim ρ precisa ser 2^(N_A + N_B)."""
        with pytest.raises(DimensionMismatchError):
            observables.partial_trace_B(mais, 2, 2)


class TestFidelidade:
    """Testes para fidelidade e distância de traço."""

    def test_fidelidade_consigo_mesmo(self, mais):
        """Testa F(ρ, ρ) = 1 para estado puro."""
        assert observables.fidelity(mais, mais) == pytest.approx(1.0, abs=1e-8)

    def test_simetria_e_limites(self):
        """Testa F(ρ, σ) = F(σ, ρ) ∈ [0, 1] em 100 pares aleatórios."""
        rng = np.random.default_rng(11)
        for _ in range(100):
            rho, sigma = _estado_aleatorio(rng, 4), _estado_aleatorio(rng, 4)
            f = observables.fidelity(rho, sigma)
            assert f == pytest.approx(observables.fidelity(sigma, rho), abs=1e-10)
            assert 0.0 <= f <= 1.0

    def test_referencia_pura(self):
        """Testa pure_fidelity = √⟨ψ|σ|ψ⟩ = fidelity com o projetor."""
        sigma = _estado_aleatorio(np.random.default_rng(3), 4)
        psi = prep.chain_A_ground("+", 2)
        assert observables.pure_fidelity(psi, sigma) == pytest.approx(
            observables.fidelity(psi.to_density_matrix(), sigma), abs=1e-10
        )

    def test_puro_contra_maximamente_misto(self):
        """Testa F(|0⟩⟨0|, I/2) = 1/√2."""
        zero = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
        misto = DensityMatrix.maximally_mixed(1)
        assert observables.fidelity(zero, misto) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
        assert observables.fidelity(misto, zero) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)

    def test_estados_ortogonais(self, mais, menos):
        """Testa fidelidade 0 e distância de traço 1."""
        assert observables.fidelity(mais, menos) == pytest.approx(0.0, abs=1e-6)
        assert observables.trace_distance(mais, menos) == pytest.approx(1.0)

    def test_dimensoes_incompativeis(self, mais):
        """Testa que as dimensões precisam coincidir."""
        with pytest.raises(DimensionMismatchError):
            observables.fidelity(mais, DensityMatrix.maximally_mixed(1))


class TestFuncaoTaxa:
    """Testes para rate_function e return_probabilities."""

    def test_ramo_mais(self, mais):
        """Testa ϖ = 0 no ramo + para ρ_A = |ψ_+⟩⟨ψ_+|."""
        valor, ramo = observables.rate_function(mais, 8)
        assert valor == pytest.approx(0.0, abs=1e-12)
        assert ramo is Branch.PLUS

    def test_ramo_menos(self, menos):
        """Testa ϖ = 0 no ramo − para ρ_A = |ψ_−⟩⟨ψ_−|."""
        valor, ramo = observables.rate_function(menos, 8)
        assert valor == pytest.approx(0.0, abs=1e-12)
        assert ramo is Branch.MINUS

    def test_empate_favorece_mais(self):
        """Testa que G_F,+ = G_F,− escolhe o ramo +."""
        valor, ramo = observables.rate_function(DensityMatrix.maximally_mixed(2), 2)
        assert ramo is Branch.PLUS
        assert valor == pytest.approx(-math.log(0.5) / 2)

    def test_taxa_infinita(self):
        """Testa ϖ = ∞ quando ρ_A é ortogonal a |ψ_±⟩."""
        ortogonal = PureState([0.5, -0.5, 0.5, -0.5]).to_density_matrix()
        valor, _ = observables.rate_function(ortogonal, 2)
        assert math.isinf(valor)
        with pytest.raises(DegenerateNormalizationError):
            observables.return_probabilities(ortogonal)

    def test_probabilidades_somam_um(self):
        """Testa P_+ + P_− = 1."""
        rho = _estado_aleatorio(np.random.default_rng(5), 4)
        p_mais, p_menos = observables.return_probabilities(rho)
        assert p_mais + p_menos == pytest.approx(1.0, abs=1e-12)

    def test_denominador_invalido(self, mais):
        """Testa que N_denom precisa ser positivo."""
        with pytest.raises(ValueError, match="N_denom"):
            observables.rate_function(mais, 0)


class TestMagnetizacaoECorrente:
    """Testes para M_x e ⟨Ĵ⟩."""

    def test_magnetizacao_dos_estados_de_referencia(self, mais, menos):
        """Testa M_x(ψ_±) = ±1."""
        assert observables.magnetization_x(mais, 2) == pytest.approx(1.0)
        assert observables.magnetization_x(menos, 2) == pytest.approx(-1.0)

    def test_corrente_real(self, anel_pequeno):
        """Testa ⟨Ĵ⟩ real e finito no estado inicial."""
        rho0 = prep.initial_density_matrix(anel_pequeno)
        valor = observables.current_expectation(rho0, model.build_global_current(anel_pequeno))
        assert math.isfinite(valor)


class TestLoschmidtFechado:
    """Testes para o eco de Loschmidt do quench fechado."""

    @pytest.fixture
    def quench(self):
        psi = prep.chain_A_ground("+", 4)
        outro = prep.chain_A_ground("-", 4)
        return psi, [psi, outro], model.build_open_tfim(4, 0.42, 1.0)

    def test_amplitude_inicial(self, quench):
        """Testa G(0) = 1 e ζ(0) = 0."""
        psi, _, H_f = quench
        G = observables.closed_loschmidt(psi, H_f, [0.0, 1.0])
        assert G[0] == pytest.approx(1.0)
        assert observables.closed_rate(G, 4)[0] == pytest.approx(0.0, abs=1e-14)
        assert np.all(observables.loschmidt_echo(G) <= 1.0 + 1e-12)

    def test_eco_simetrizado_e_interferometria(self, quench):
        """Testa L_sym ≤ 1 e G_I = G para estado puro."""
        psi, variedade, H_f = quench
        tempos = np.linspace(0.0, 6.0, 31)
        zeta, L_sym, G_I = observables.closed_rate_and_symmetric(psi, variedade, H_f, tempos)
        assert np.all(L_sym <= 1.0 + 1e-12)
        assert np.all(L_sym >= observables.loschmidt_echo(G_I) - 1e-12)
        assert np.allclose(G_I, observables.closed_loschmidt(psi, H_f, tempos), atol=1e-12)
        assert zeta.shape == (31,)

    def test_variedade_nao_ortonormal(self, quench):
        """Testa que a variedade fundamental precisa ser ortonormal."""
        psi, _, H_f = quench
        with pytest.raises(ContractViolationError, match="ortonormal"):
            observables.closed_rate_and_symmetric(psi, [psi, psi], H_f, [0.0])


class TestCuspides:
    """Testes para detect_cusps, sign_changes e crossings."""

    def test_trocas_de_ramo(self):
        """Testa ponto médio e meia largura das cúspides."""
        ramos = [Branch.PLUS, Branch.PLUS, Branch.MINUS, Branch.MINUS, Branch.PLUS]
        assert observables.detect_cusps([0.0, 1.0, 2.0, 3.0, 4.0], ramos) == [(1.5, 0.5), (3.5, 0.5)]

    def test_sem_trocas(self):
        """Testa série sem cúspides."""
        assert observables.detect_cusps([0.0, 1.0], [Branch.PLUS, Branch.PLUS]) == []

    def test_troca_de_sinal_interpolada(self):
        """Testa a interpolação linear do zero."""
        assert observables.sign_changes([0.0, 1.0, 2.0], [1.0, -3.0, -1.0]) == [pytest.approx(0.25)]

    def test_cruzamentos(self):
        """Testa P_+ = P_−."""
        assert observables.crossings([0.0, 1.0], [0.8, 0.4], [0.2, 0.6]) == [pytest.approx(0.75)]


class TestMedidor:
    """Testes para ObservableMeter."""

    def test_registro_inicial(self, anel_pequeno, operadores):
        """Testa o registro em t = 0: G_F,+ = 1, ϖ = 0, M_x = 1."""
        _, J, _, rho0 = operadores
        medidor = observables.ObservableMeter(anel_pequeno, BathParams(h=0.5), J)
        registro = medidor(0.0, rho0)
        assert registro.t == 0.0
        assert registro.G_F_plus == pytest.approx(1.0, abs=1e-12)
        assert registro.rate_function == pytest.approx(0.0, abs=1e-12)
        assert registro.rate_branch is Branch.PLUS
        assert registro.P_plus == pytest.approx(1.0, abs=1e-12)
        assert registro.M_x == pytest.approx(1.0)
        assert registro.purity == pytest.approx(1.0)
        assert registro.gamma_t == 0.0

    def test_tempo_em_unidades_de_T(self, anel_pequeno, operadores):
        """Testa que o registro guarda t/T."""
        _, J, _, rho0 = operadores
        b = BathParams()
        registro = observables.ObservableMeter(anel_pequeno, b, J)(b.period / 2, rho0)
        assert registro.t == pytest.approx(0.5)

    def test_linha_do_csv(self, anel_pequeno, operadores):
        """Testa o formato da linha com a precisão pedida."""
        _, J, _, rho0 = operadores
        linha = observables.ObservableMeter(anel_pequeno, BathParams(), J)(0.0, rho0).to_row(6)
        assert len(linha) == 13
        assert linha[0] == "0" and linha[4] == "+"

    def test_opcoes_invalidas(self, anel_pequeno, operadores):
        """Testa denominador e sítios desconhecidos."""
        _, J, _, _ = operadores
        with pytest.raises(ValueError, match="Denominador"):
            observables.ObservableMeter(anel_pequeno, BathParams(), J, denominator="B")
        with pytest.raises(ValueError, match="magnetização"):
            observables.ObservableMeter(anel_pequeno, BathParams(), J, magnetization_sites="B")

    @pytest.mark.parametrize("sitios", ["chain_A", "ring"])
    def test_registro_usa_as_funcoes_publicas(self, anel_pequeno, operadores, banho_nao_markoviano, sitios):
        """Testa que o registro coincide com rate_function, return_probabilities e magnetization_x."""
        _, J, eig, rho0 = operadores
        b = banho_nao_markoviano
        t = 0.3 * b.period
        rho = engine.evolve_exact(rho0, eig, b, [t], engine.StorePolicy.ALL).state_at(0)
        registro = observables.ObservableMeter(anel_pequeno, b, J, "chain_A", sitios)(t, rho)
        rho_A = observables.partial_trace_B(rho, 2, 2)
        taxa, ramo = observables.rate_function(rho_A, 2)
        P_mais, P_menos = observables.return_probabilities(rho_A)
        alvo, n = (rho_A, 2) if sitios == "chain_A" else (rho, 4)
        assert registro.rate_function == pytest.approx(taxa, abs=1e-14)
        assert registro.rate_branch is ramo
        assert (registro.P_plus, registro.P_minus) == (pytest.approx(P_mais), pytest.approx(P_menos))
        assert registro.M_x == pytest.approx(observables.magnetization_x(alvo, n), abs=1e-14)
