"""
Gerenciador de Experimentos - Camada de serviço entre a CLI e a física.

Executa o protocolo de quench (preparação, evolução, medição, escrita),
varreduras de parâmetros em um pool de processos, a bateria de
verificações de invariantes e as tabelas de taxas dos banhos.
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate

from .. import __version__
from ..models.configuracao import ExperimentConfig
from ..models.erros import ConfigError, SimulationError
from ..models.estados import DensityMatrix, PureState
from ..models.manifesto import RunManifest
from ..models.parametros import BathParams, ModelParams
from ..models.trajetoria import ObservableRecord, Trajectory
from ..physics import bathrates, engine, model, observables, prep
from ..physics.spinops import relative_commutator_norm
from .json_storage import JsonStorage

logger = logging.getLogger(__name__)

# Parâmetros dos presets de referência (unidades de Ω)
H_REFERENCIA = (0.3, 0.5, 0.7)
MAX_GAMMA1_REFERENCIA = (0.1018, 0.2827, 0.5542)


class ResultadoQuench(NamedTuple):
    """Saída de run_quench."""
    records: list[ObservableRecord]
    manifest: RunManifest
    csv_path: Path
    manifest_path: Path
    trajectory: Trajectory


class PontoVarredura(NamedTuple):
    """Um ponto da varredura: sucesso (cusps preenchidas) ou falha (erro preenchido)."""
    value: float
    ok: bool
    cusp_times: list[float]
    csv_path: Optional[str]
    erro: Optional[str]


class Verificacao(NamedTuple):
    """Resultado de um invariante da bateria de validação."""
    nome: str
    passou: bool
    detalhe: str


def _workers_padrao(configuracoes: dict[str, Any]) -> int:
    """DQPT_WORKERS > settings.json > número de CPUs."""
    valor = os.environ.get("DQPT_WORKERS") or configuracoes.get("workers")
    if valor:
        try:
            n = int(valor)
        except ValueError:
            raise ConfigError("DQPT_WORKERS", f"valor inválido: {valor!r}") from None
        if n < 1:
            raise ConfigError("DQPT_WORKERS", "deve ser pelo menos 1")
        return n
    return os.cpu_count() or 1


def _slug(valor: Any) -> str:
    return str(valor).replace(".", "p").replace("-", "m")


def _executar_ponto(dados: dict, saida: str) -> dict:
    """Executa um ponto da varredura em um processo do pool."""
    try:
        cfg = ExperimentConfig.from_dict(dados)
        resultado = GerenciadorExperimentos().run_quench(cfg, Path(saida))
    except (SimulationError, ArithmeticError, np.linalg.LinAlgError) as exc:
        # Exceções do simulador não são reconstruídas entre processos
        return {"erro": f"{type(exc).__name__}: {exc}"}
    return {
        "cusp_times": [t for t, _ in resultado.manifest.cusp_times],
        "csv_path": str(resultado.csv_path),
        "erro": None,
    }


class GerenciadorExperimentos:
    """
    Classe que orquestra os experimentos do simulador.

    Attributes:
        storage: Instância do JsonStorage para arquivos
    """

    def __init__(self, data_dir: Optional[str] = None):
        self._storage = JsonStorage(data_dir)
        self._configuracoes = self._storage.carregar_configuracoes()

    # ==================== PROPRIEDADES ====================

    @property
    def storage(self) -> JsonStorage:
        return self._storage

    @property
    def configuracoes(self) -> dict[str, Any]:
        return dict(self._configuracoes)

    # ==================== QUENCH ====================

    @staticmethod
    def grade_temporal(cfg: ExperimentConfig) -> np.ndarray:
        """Instantes físicos k·T/samples_per_period, k = 0..periods·samples_per_period."""
        T = cfg.bath_params.period
        return np.linspace(0.0, cfg.run.periods * T, cfg.n_samples)

    def constantes_derivadas(self, p: ModelParams, b: BathParams, rho0: DensityMatrix) -> dict[str, Any]:
        """Constantes gravadas no manifesto."""
        psi_B = prep.chain_B_ground(p)
        psi_A = prep.chain_A_ground("+", p.N_A)
        H_A = model.build_chain_A_hamiltonian(p)
        H_B = model.build_chain_B_hamiltonian(p)
        J = model.build_global_current(p)
        regime = bathrates.markovianity(b)
        return {
            "period": b.period,
            "dim": 2 ** p.N,
            "max_gamma1": regime["max_gamma1"],
            "min_gamma": regime["min_gamma"],
            "markovian": regime["markovian"],
            "J_0": observables.current_expectation(rho0, J),
            "J_A_0": observables.current_expectation(rho0, model.build_local_current(p, "A", full_space=True)),
            "J_B_0": observables.current_expectation(rho0, model.build_local_current(p, "B", full_space=True)),
            "ground_energy_A": float(np.vdot(psi_A.amplitudes, H_A.apply(psi_A.amplitudes)).real),
            "ground_energy_B": float(np.vdot(psi_B.amplitudes, H_B.apply(psi_B.amplitudes)).real),
        }

    def run_quench(self, cfg: ExperimentConfig, saida: Optional[Path] = None) -> ResultadoQuench:
        """
        Executa o protocolo de quench: prepara A em |ψ_+⟩ e B no fundamental
        de Ĥ^S_B, evolui sob o anel completo acoplado aos banhos via Ĵ e
        escreve o CSV de observáveis e o manifesto.

        Args:
            cfg: Configuração validada
            saida: Diretório de saída (padrão: output.path)

        Raises:
            SimulationError: Falhas físicas ou numéricas (com os parâmetros ecoados)
        """
        inicio = time.perf_counter()
        p, b = cfg.ring_params, cfg.bath_params
        logger.info("Quench %r: N=%d, engine=%s, %d amostras", cfg.name, p.N, cfg.run.engine, cfg.n_samples)

        H = model.build_ring_hamiltonian(p)
        J = model.build_global_current(p)
        rho0 = prep.initial_density_matrix(p)
        eig = engine.simultaneous_eigensystem(H, J)
        tempos = self.grade_temporal(cfg)
        medidor = observables.ObservableMeter(
            p, b, J, cfg.rate_function.denominator, cfg.magnetization.sites
        )
        registros: list[ObservableRecord] = []

        def medir(t: float, rho: DensityMatrix) -> None:
            registros.append(medidor(t, rho))

        store = engine.StorePolicy(cfg.run.store_states)
        frame = eig if cfg.run.lindblad_frame == "eigen" else None
        distancia = None
        if cfg.run.engine == "exact":
            trajetoria = engine.evolve_exact(rho0, eig, b, tempos, store, p, medir)
        elif cfg.run.engine == "lindblad":
            trajetoria = engine.evolve_lindblad(
                rho0, H, J, b, tempos, cfg.run.rk4_steps_per_sample, frame, store, p, medir
            )
        else:
            trajetoria, distancia = engine.compare_engines(
                rho0, H, J, eig, b, tempos, cfg.run.rk4_steps_per_sample, frame, store, p, medir
            )
        trajetoria.records = registros

        tempos_T = trajetoria.times_over_T
        cuspides = observables.detect_cusps(tempos_T, [r.rate_branch for r in registros])
        derivadas = self.constantes_derivadas(p, b, rho0)
        derivadas["P_crossings"] = observables.crossings(
            tempos_T, [r.P_plus for r in registros], [r.P_minus for r in registros]
        )
        derivadas["M_x_sign_changes"] = observables.sign_changes(tempos_T, [r.M_x for r in registros])
        if cfg.run.engine != "exact":
            derivadas["lindblad_frame"] = cfg.run.lindblad_frame

        diretorio = Path(saida) if saida is not None else Path(cfg.output.path)
        csv_path = diretorio / f"{cfg.name}.csv"
        manifest_path = diretorio / f"{cfg.name}.manifest.json"
        sha = self._storage.salvar_csv(csv_path, registros, cfg.output.precision)
        manifesto = RunManifest(
            config=cfg,
            derived=derivadas,
            software_version=__version__,
            wall_time=time.perf_counter() - inicio,
            cusp_times=cuspides,
            cross_check_distance=distancia,
            csv_sha256=sha,
        )
        self._storage.salvar_manifesto(manifest_path, manifesto)
        logger.info("Quench %r concluído: %d cúspides, %.1fs", cfg.name, len(cuspides), manifesto.wall_time)
        return ResultadoQuench(registros, manifesto, csv_path, manifest_path, trajetoria)

    # ==================== VARREDURA ====================

    def run_sweep(
        self,
        base: ExperimentConfig,
        axis: str,
        values: Sequence[float],
        saida: Optional[Path] = None,
        workers: Optional[int] = None,
    ) -> tuple[list[PontoVarredura], Path]:
        """
        Executa um quench por valor de `axis` e escreve o resumo das cúspides.

        Pontos que falham são registrados e não interrompem a varredura.

        Raises:
            ConfigError: Se `axis` não for uma chave numérica da configuração
        """
        if not values:
            raise ConfigError(axis, "a lista de valores está vazia")
        self._validar_eixo(base, axis)
        diretorio = Path(saida) if saida is not None else Path(base.output.path)
        n_workers = workers if workers is not None else _workers_padrao(self._configuracoes)
        logger.info("Varredura de %s em %d valores com %d processos", axis, len(values), n_workers)

        tarefas: list[tuple[float, Optional[dict], Optional[str]]] = []
        for valor in values:
            try:
                cfg = base.with_value(axis, self._tipar_valor(base, axis, valor))
                dados = cfg.to_dict()
                dados["name"] = f"{base.name}_{axis.replace('.', '_')}_{_slug(valor)}"
                tarefas.append((valor, dados, None))
            except ConfigError as exc:
                logger.warning("Ponto %s=%r rejeitado: %s", axis, valor, exc)
                tarefas.append((valor, None, str(exc)))

        pontos = self._executar_tarefas(tarefas, diretorio, n_workers)
        resumo = diretorio / f"{base.name}_sweep_{axis.replace('.', '_')}.csv"
        n_max = max((len(pt.cusp_times) for pt in pontos), default=0)
        cabecalho = ["value", "status"] + [f"cusp_{k + 1}" for k in range(n_max)] + ["error"]
        linhas = []
        for pt in pontos:
            cusps = [f"{t:.12g}" for t in pt.cusp_times] + [""] * (n_max - len(pt.cusp_times))
            linhas.append([f"{pt.value:.12g}", "ok" if pt.ok else "failed"] + cusps + [pt.erro or ""])
        self._storage.salvar_tabela(resumo, cabecalho, linhas)
        return pontos, resumo

    @staticmethod
    def _validar_eixo(base: ExperimentConfig, axis: str) -> None:
        """Falha com ConfigError antes de abrir o pool se o eixo não existir."""
        secao, _, chave = axis.partition(".")
        atual = base.to_dict().get(secao)
        if not isinstance(atual, dict) or chave not in atual:
            raise ConfigError(axis, "chave inexistente")
        base.with_value(axis, atual[chave])

    @staticmethod
    def _tipar_valor(base: ExperimentConfig, axis: str, valor: float) -> Any:
        secao, _, chave = axis.partition(".")
        atual = base.to_dict().get(secao, {}).get(chave)
        if isinstance(atual, int) and not isinstance(atual, bool) and float(valor).is_integer():
            return int(valor)
        return float(valor)

    def _executar_tarefas(
        self,
        tarefas: list[tuple[float, Optional[dict], Optional[str]]],
        diretorio: Path,
        n_workers: int,
    ) -> list[PontoVarredura]:
        pontos: list[PontoVarredura] = []
        if n_workers == 1:
            futuros = [None] * len(tarefas)
            executor = None
        else:
            executor = ProcessPoolExecutor(max_workers=n_workers)
            futuros = [
                executor.submit(_executar_ponto, dados, str(diretorio)) if dados is not None else None
                for _, dados, _ in tarefas
            ]
        try:
            for (valor, dados, erro), futuro in zip(tarefas, futuros):
                if dados is None:
                    pontos.append(PontoVarredura(valor, False, [], None, erro))
                    continue
                saida = _executar_ponto(dados, str(diretorio)) if futuro is None else futuro.result()
                if saida["erro"] is not None:
                    logger.warning("Ponto %r falhou: %s", valor, saida["erro"])
                    pontos.append(PontoVarredura(valor, False, [], None, saida["erro"]))
                else:
                    pontos.append(PontoVarredura(valor, True, saida["cusp_times"], saida["csv_path"], None))
        finally:
            if executor is not None:
                executor.shutdown()
        return pontos

    # ==================== TAXAS ====================

    def rates(
        self, cfg: ExperimentConfig, saida: Optional[Path] = None, pontos_por_periodo: Optional[int] = None
    ) -> tuple[Path, dict[str, Any]]:
        """
        Tabela de γ₁, γ, λ, Γ e Λ na grade do experimento.

        Returns:
            (caminho do CSV, classificação markoviana)
        """
        b = cfg.bath_params
        n = pontos_por_periodo or cfg.run.samples_per_period
        tempos = np.linspace(0.0, cfg.run.periods * b.period, cfg.run.periods * n + 1)
        tabela = bathrates.rate_table(b, tempos)
        colunas = list(tabela.keys())
        linhas = (
            [f"{tabela[c][k]:.{cfg.output.precision}g}" for c in colunas]
            for k in range(tempos.size)
        )
        diretorio = Path(saida) if saida is not None else Path(cfg.output.path)
        caminho = diretorio / f"{cfg.name}_rates.csv"
        self._storage.salvar_tabela(caminho, colunas, linhas)
        return caminho, bathrates.markovianity(b)

    # ==================== VALIDAÇÃO ====================

    def validate(self, closure_bond: bool = True, seed: int = 2024) -> list[Verificacao]:
        """
        Bateria de invariantes (comutadores, taxas, motores, observáveis).

        Args:
            closure_bond: False remove a ligação de fechamento do anel
                (controle negativo: a conservação de Ĵ deve falhar)
            seed: Semente dos sorteios aleatórios
        """
        rng = np.random.default_rng(seed)
        verificacoes = [
            self._verificar_conservacao(rng, closure_bond),
            *self._verificar_maximos_gamma1(),
            self._verificar_media_gamma1(),
            self._verificar_quadratura_gamma(),
            self._verificar_autossistema(closure_bond),
            self._verificar_divisibilidade(),
            self._verificar_motores(),
            self._verificar_fidelidade(rng),
            self._verificar_traco_parcial(),
            self._verificar_loschmidt(),
        ]
        for v in verificacoes:
            logger.info("%s: %s (%s)", v.nome, "ok" if v.passou else "FALHOU", v.detalhe)
        return verificacoes

    def _tolerancia(self, chave: str) -> float:
        return float(self._configuracoes["tolerancias"][chave])

    @staticmethod
    def _protegido(nome: str, funcao: Callable[[], Verificacao]) -> Verificacao:
        try:
            return funcao()
        except (SimulationError, ArithmeticError, np.linalg.LinAlgError) as exc:
            return Verificacao(nome, False, f"{type(exc).__name__}: {exc}")

    def _verificar_conservacao(self, rng: np.random.Generator, closure_bond: bool) -> Verificacao:
        def checar() -> Verificacao:
            pior = 0.0
            for N in range(4, 11):
                for _ in range(20):
                    tau, campo = rng.uniform(0.1, 2.0, size=2)
                    p = ModelParams(N // 2, N - N // 2, float(tau), float(campo))
                    H = model.build_ring_hamiltonian(p, closure_bond=closure_bond)
                    pior = max(pior, relative_commutator_norm(H, model.build_global_current(p)))
            passou = pior < self._tolerancia("comutador")
            return Verificacao("conservacao [H, J] = 0", passou, f"máximo relativo {pior:.3g}")
        return self._protegido("conservacao [H, J] = 0", checar)

    def _verificar_maximos_gamma1(self) -> list[Verificacao]:
        resultado = []
        for h, alvo in zip(H_REFERENCIA, MAX_GAMMA1_REFERENCIA):
            b = BathParams(h=h)
            maximo = bathrates.gamma1_max(b)
            t_max = self._argmax_gamma1(b)
            fechado = bathrates.gamma1_closed_form(t_max, b)
            passou = abs(maximo - alvo) <= 1e-3 and abs(fechado - maximo) <= 1e-3
            resultado.append(Verificacao(
                f"max γ₁ (h={h})", passou, f"{maximo:.5f} (forma fechada {fechado:.5f}, alvo {alvo})"
            ))
        return resultado

    @staticmethod
    def _argmax_gamma1(b: BathParams, samples: int = 4096) -> float:
        grade = np.linspace(0.0, b.period, samples, endpoint=False)
        return float(grade[int(np.argmax(bathrates.gamma1(grade, b)))])

    def _verificar_media_gamma1(self) -> Verificacao:
        integral = bathrates.gamma1_period_integral(BathParams(h=0.5))
        return Verificacao("∫ γ₁ dt = 0 em um período", abs(integral) <= 1e-9, f"{integral:.3g}")

    def _verificar_quadratura_gamma(self) -> Verificacao:
        b = BathParams(gamma0=0.2, h=0.5)
        tempos = np.linspace(0.0, b.period, 50)
        pior = 0.0
        for t in tempos:
            integral, _ = integrate.quad(lambda s: bathrates.gamma1(s, b), 0.0, t, limit=200)
            pior = max(pior, abs(bathrates.big_gamma(t, b) - b.gamma0 * t - integral))
        return Verificacao("Γ(t) − γ₀t = ∫ γ₁", pior <= 1e-9, f"máximo {pior:.3g}")

    def _verificar_autossistema(self, closure_bond: bool) -> Verificacao:
        def checar() -> Verificacao:
            p = ModelParams(6, 2, 0.42, 1.0, 5.0)
            H = model.build_ring_hamiltonian(p, closure_bond=closure_bond)
            J = model.build_global_current(p)
            eig = engine.simultaneous_eigensystem(H, J)
            residuo = max(engine.diagonalization_residual(eig, H), engine.diagonalization_residual(eig, J))
            return Verificacao("base simultânea (N=8)", residuo <= 1e-10, f"resíduo {residuo:.3g}")
        return self._protegido("base simultânea (N=8)", checar)

    def _verificar_divisibilidade(self) -> Verificacao:
        def checar() -> Verificacao:
            p = ModelParams(6, 2, 0.42, 1.0, 5.0)
            b = BathParams(gamma0=0.2827, h=0.5)
            eig = engine.simultaneous_eigensystem(model.build_ring_hamiltonian(p), model.build_global_current(p))
            rho0 = prep.initial_density_matrix(p)
            pior = 0.0
            for m in (2, 3):
                continuo = engine.evolve_exact(rho0, eig, b, [0.0, m * b.period], engine.StorePolicy.ALL)
                estrobo = engine.apply_period_map(rho0, eig, b, m)
                pior = max(pior, float(np.max(np.abs(continuo.state_at(1).entries - estrobo.entries))))
            return Verificacao("divisibilidade estroboscópica", pior <= 1e-8, f"máximo {pior:.3g}")
        return self._protegido("divisibilidade estroboscópica", checar)

    def _verificar_motores(self) -> Verificacao:
        def checar() -> Verificacao:
            p = ModelParams(2, 2, 0.42, 1.0, 5.0)
            b = BathParams(gamma0=0.2827, h=0.5)
            H, J = model.build_ring_hamiltonian(p), model.build_global_current(p)
            eig = engine.simultaneous_eigensystem(H, J)
            tempos = np.linspace(0.0, b.period, 21)
            _, distancia = engine.compare_engines(
                prep.initial_density_matrix(p), H, J, eig, b, tempos, 1000, store=engine.StorePolicy.NONE
            )
            passou = distancia <= self._tolerancia("motores")
            return Verificacao("motor exato × RK4", passou, f"distância {distancia:.3g}")
        return self._protegido("motor exato × RK4", checar)

    def _verificar_fidelidade(self, rng: np.random.Generator) -> Verificacao:
        pior_simetria, pior_limite = 0.0, 0.0
        for _ in range(100):
            rho, sigma = self._estado_aleatorio(rng, 4), self._estado_aleatorio(rng, 4)
            f1, f2 = observables.fidelity(rho, sigma), observables.fidelity(sigma, rho)
            pior_simetria = max(pior_simetria, abs(f1 - f2))
            pior_limite = max(pior_limite, f1 - 1.0, -f1)
        zero = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
        desvio_misto = abs(observables.fidelity(zero, DensityMatrix.maximally_mixed(1)) - 1.0 / math.sqrt(2.0))
        passou = pior_simetria < 1e-10 and pior_limite <= 1e-10 and desvio_misto <= 1e-12
        return Verificacao(
            "fidelidade simétrica e limitada", passou,
            f"assimetria {pior_simetria:.3g}, F(|0⟩⟨0|, I/2) − 1/√2 = {desvio_misto:.3g}",
        )

    @staticmethod
    def _estado_aleatorio(rng: np.random.Generator, dim: int) -> DensityMatrix:
        A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = A @ A.conj().T
        return DensityMatrix(rho / np.trace(rho).real)

    def _verificar_traco_parcial(self) -> Verificacao:
        p = ModelParams(6, 2, 0.42, 1.0, 5.0)
        rho_A = observables.partial_trace_B(prep.initial_density_matrix(p), p.N_A, p.N_B)
        referencia = prep.chain_A_ground("+", p.N_A).to_density_matrix()
        distancia = float(np.linalg.norm(rho_A.entries - referencia.entries))
        bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)).to_density_matrix()
        desvio_bell = float(np.linalg.norm(observables.partial_trace_B(bell, 1, 1).entries - np.eye(2) / 2.0))
        passou = distancia < 1e-12 and desvio_bell < 1e-12
        return Verificacao(
            "Tr_B ρ(0) = |ψ_+⟩⟨ψ_+|", passou, f"distância {distancia:.3g}, Bell {desvio_bell:.3g}"
        )

    def _verificar_loschmidt(self) -> Verificacao:
        p = ModelParams(6, 2, 0.42, 1.0)
        psi_mais = prep.chain_A_ground("+", p.N_A)
        psi_menos = prep.chain_A_ground("-", p.N_A)
        H_f = model.build_open_tfim(p.N_A, p.tau, p.H_field, p.max_spins)
        tempos = np.linspace(0.0, 2.0 * math.pi, 101)
        G = observables.closed_loschmidt(psi_mais, H_f, tempos)
        _, L_sym, G_I = observables.closed_rate_and_symmetric(psi_mais, [psi_mais, psi_menos], H_f, tempos)
        desvio = float(np.max(np.abs(G - G_I)))
        passou = desvio <= 1e-12 and bool(np.all(L_sym <= 1.0 + 1e-12))
        return Verificacao("eco de Loschmidt fechado", passou, f"|G − G_I| máximo {desvio:.3g}")
