#!/usr/bin/env python3
"""
Dynamical R-Matrix Lab - CLI principal

Comandos:
    verify-qdybe       resíduo da equação de Yang-Baxter dinâmica (Felder ou --rmatrix)
    gauge              twist | reparam | scale | check-exact
    solve-difference   solução em série de f(pz) = G(f(z)) e verificação de cruzamento
    export-samples     grade (u, λ) de uma R-matriz em JSON
    diagnose           verificação do ambiente

Códigos de saída: 0 pass, 1 fail, 2 inconclusivo, 64 uso, 65 dados, 70 erro numérico.

Execute: python main.py verify-qdybe --n 2 --samples 100
"""

import argparse
import importlib
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from dotenv import dotenv_values

from config.settings import Config, current_config
from src.difference_solver import (AnalyticGerm, difference_residual, growth_bound_check,
                                   multilinear_amplitude, solve_difference, verify_crossing_series)
from src.errors import (ConvergenceError, DomainError, PoleError, ResonanceError,
                        SingularMatrixError)
from src.felder import FelderParams, felder_rmatrix, felder_sample_filter
from src.gauge import (closedness_residual, d_gamma, exactness_witness, form_deviation,
                       gauge_reparam, gauge_scale, gauge_twist, inversion_residual,
                       sigma_two_form, random_diagonal_one_form, random_two_form,
                       staircase_rho, twist_equivalence)
from src.power_series import from_pairs, series_from_json, series_to_json, to_pairs
from src.qdybe import basic_rep, qdybe_residual, qdybe_sides, rep_residual
from src.reporting import VerificationReport
from src.sampling import STREAMS, Sample, SampleStream, all_of, evaluation_probe
from src.trigonometric import DUAL_COXETER_GL2, RHO_GL2, trigonometric_fixture
from src.weight_core import DynamicalOperator, WeightedSpace, equivariance_defect, product_space

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Argumentos ou configuração inválidos (saída 64)"""


class DataError(Exception):
    """Arquivo de entrada ilegível ou inválido (saída 65)"""


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser que sinaliza erros de uso com UsageError em vez de sair com 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_complex(text) -> complex:
    """Aceita '[re, im]', '0.31+0.07i', '2j' ou números reais"""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    value = str(text).strip()
    try:
        if value.startswith('['):
            re, im = json.loads(value)
            return complex(float(re), float(im))
        return complex(value.replace(' ', '').replace('i', 'j'))
    except (ValueError, TypeError) as e:
        raise UsageError(f"Número complexo inválido: {text!r}") from e


def _number(kind):
    def convert(text):
        try:
            return kind(text)
        except (ValueError, TypeError) as e:
            raise UsageError(f"Valor inválido: {text!r}") from e
    return convert


# Campos do RunConfig e seus conversores (flags, arquivo --config e padrões)
FIELDS = {
    'n': _number(int),
    'tau': parse_complex,
    'gamma': parse_complex,
    'q': parse_complex,
    'kappa': parse_complex,
    'samples': _number(int),
    'seed': _number(int),
    'tol_pass': _number(float),
    'tol_fail': _number(float),
    'order': _number(int),
    'out': str,
}


@dataclass
class RunConfig:
    command: str
    n: int = Config.DEFAULT_N
    tau: complex = Config.DEFAULT_TAU
    gamma: complex = Config.DEFAULT_GAMMA
    q: complex = Config.DEFAULT_Q
    kappa: complex = Config.DEFAULT_KAPPA
    samples: int = Config.DEFAULT_SAMPLES
    seed: int = Config.DEFAULT_SEED
    tol_pass: float = Config.TOL_PASS
    tol_fail: float = Config.TOL_FAIL
    order: int = Config.DEFAULT_ORDER
    out: Optional[str] = None

    def validate(self) -> 'RunConfig':
        if not self.tol_pass < self.tol_fail:
            raise UsageError(f"tol_pass ({self.tol_pass}) deve ser menor que tol_fail ({self.tol_fail})")
        if self.samples < 1:
            raise UsageError(f"samples deve ser ≥ 1, recebido {self.samples}")
        if self.order < 1:
            raise UsageError(f"order deve ser ≥ 1, recebido {self.order}")
        return self

    def as_dict(self) -> dict:
        return asdict(self)


def load_config_file(path) -> dict:
    """Arquivo key=value: chaves com '-' ou '_'"""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"Arquivo de configuração não encontrado: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        key = key.strip().lower().replace('-', '_')
        if key not in FIELDS:
            raise UsageError(f"Chave desconhecida no arquivo de configuração: {key}")
        if value is not None:
            values[key] = FIELDS[key](value)
    return values


def build_run_config(args) -> RunConfig:
    """Padrões do Config ← arquivo --config ← flags explícitas"""
    values = load_config_file(args.config) if args.config else {}
    for key in FIELDS:
        explicit = getattr(args, key, None)
        if explicit is not None:
            values[key] = explicit
    return RunConfig(command=args.command, **values).validate()


# ============= AUXILIARES =============


def _felder(config: RunConfig):
    params = FelderParams(config.n, config.tau, config.gamma)
    return params, felder_rmatrix(params)


def _load_rmatrix(target: str, config: RunConfig) -> DynamicalOperator:
    """Importa 'modulo:callable'; o callable recebe o RunConfig e devolve um DynamicalOperator"""
    module_name, _, attribute = target.partition(':')
    if not module_name or not attribute:
        raise UsageError(f"--rmatrix deve ter a forma modulo:callable, recebido {target!r}")
    try:
        factory = getattr(importlib.import_module(module_name), attribute)
    except (ImportError, AttributeError) as e:
        raise DataError(f"Não foi possível carregar {target}: {e}") from e
    operator = factory(config)
    if not isinstance(operator, DynamicalOperator):
        raise DataError(f"{target} não devolveu um DynamicalOperator")
    return operator


def _qdybe_probe(R: DynamicalOperator):
    return evaluation_probe(lambda sample: qdybe_sides(R, *sample.u[:3], sample.lam))


def _select_rmatrix(config: RunConfig, args, probe):
    """Felder por padrão ou --rmatrix; devolve o operador e o filtro de amostras"""
    if getattr(args, 'rmatrix', None):
        R = _load_rmatrix(args.rmatrix, config)
        return R, probe(R)
    params, R = _felder(config)
    return R, felder_sample_filter(params)


def _weight_defect(R: DynamicalOperator, samples) -> float:
    """Maior entrada de R entre vetores de pesos totais diferentes"""
    space = product_space(R.factors)
    return max(equivariance_defect(R(s.u[0] - s.u[1], s.lam), space, space) for s in samples)


def _max_condition(R: DynamicalOperator, samples) -> float:
    return max(float(np.linalg.cond(R(s.u[0] - s.u[1], s.lam))) for s in samples)


def _report(config: RunConfig) -> VerificationReport:
    return VerificationReport(config.command, config.as_dict(), config.tol_pass, config.tol_fail)


def _output_path(config: RunConfig, default_name: str, folder: Path = None) -> Path:
    if config.out:
        return Path(config.out)
    return Path(folder or current_config.REPORTS_PATH) / default_name


def _finish(report: VerificationReport, config: RunConfig, args) -> int:
    report.finish()
    path = _output_path(config, f"{config.command}.json")
    report.export_json(path, include_timing=args.timing)
    report.export_txt(path.with_suffix('.txt'))
    report.print_summary()
    print(f"💾 Relatório salvo: {path}")
    return report.exit_code


# ============= COMANDOS =============


def cmd_verify_qdybe(config: RunConfig, args) -> int:
    """Resíduo de Yang-Baxter dinâmico da R-matriz de Felder ou de --rmatrix"""
    stream = SampleStream(config.seed, STREAMS['verify-qdybe'])
    R, accept = _select_rmatrix(config, args, _qdybe_probe)
    print(f"🔍 Verificando a equação de Yang-Baxter dinâmica para {R.name}...")
    samples = stream.draw(config.samples, 3, R.factors[0].rank, accept=accept)
    report = _report(config)
    report.log_check('qdybe', qdybe_residual(R, samples),
                     details={'max_condition': _max_condition(R, samples)})
    report.log_check('total_weight', _weight_defect(R, samples))
    return _finish(report, config, args)


def _gauge_samples(config: RunConfig, params: FelderParams, R: DynamicalOperator, stagger: float = 0.0):
    stream = SampleStream(config.seed, STREAMS['gauge'], lam_real=0.4, lam_imag=0.1, stagger=stagger)
    accept = all_of(felder_sample_filter(params), _qdybe_probe(R))
    return stream.draw(config.samples, 3, config.n, accept=accept)


def _gauge_twist(config, args, report, params, R):
    gamma = params.gamma
    if args.form == 'sigma':
        phi = sigma_two_form(config.q, config.kappa, config.n, gamma)
    elif args.form == 'exact':
        rng = SampleStream(config.seed, STREAMS['gauge']).generator(0)
        phi = d_gamma(random_diagonal_one_form(rng, config.n), gamma)
    else:
        rng = SampleStream(config.seed, STREAMS['gauge']).generator(0)
        phi = random_two_form(rng, config.n)

    form_samples = SampleStream(config.seed, STREAMS['gauge'], lam_real=0.4, lam_imag=0.1).draw(
        config.samples, 1, config.n, accept=felder_sample_filter(params))
    report.log_check('inversion', inversion_residual(phi, form_samples))
    closed = report.log_check('closedness', closedness_residual(phi, gamma, form_samples))
    if closed.verdict != Config.VERDICT_PASS:
        report.log_status('twist', False, message=f"{phi.name} não é γ-fechada; torção não aplicada")
        return

    twisted = gauge_twist(R, phi)
    samples = _gauge_samples(config, params, twisted)
    report.log_check('qdybe', qdybe_residual(twisted, samples),
                     details={'max_condition': _max_condition(twisted, samples)})


def _gauge_reparam(config, args, report, params, R):
    mu = None if args.mu is None else [parse_complex(value) for value in args.mu.split(';')]
    moved = gauge_reparam(R, args.a, args.b, mu)
    shift = np.zeros(config.n) if mu is None else np.asarray(mu, dtype=complex)
    original = felder_sample_filter(params)

    def accept(sample):
        # a amostra vista pela R original: (au, bλ + μ)
        return original(Sample(tuple(args.a * u for u in sample.u), args.b * sample.lam + shift))

    stream = SampleStream(config.seed, STREAMS['gauge'])
    samples = stream.draw(config.samples, 3, config.n, accept=all_of(accept, _qdybe_probe(moved)))
    report.log_check('qdybe', qdybe_residual(moved, samples))
    report.artifacts['step'] = moved.step
    print(f"   ↪ novo passo γ/b = {moved.step}")


def _gauge_scale(config, args, report, params, R):
    a, b = args.a, args.b
    moved = gauge_scale(R, lambda u: b * np.exp(a * u))
    samples = _gauge_samples(config, params, moved)
    report.log_check('qdybe', qdybe_residual(moved, samples))


def _gauge_check_exact(config, args, report, params, R):
    gamma = params.gamma
    phi = sigma_two_form(config.q, config.kappa, config.n, gamma)
    psi = exactness_witness(config.q, config.kappa, config.n, gamma)
    stream = SampleStream(config.seed, STREAMS['gauge'], lam_real=0.4, lam_imag=0.1, stagger=0.3)
    form_samples = stream.draw(config.samples, 1, config.n,
                               accept=evaluation_probe(lambda s: [phi(idx, s.lam) for idx in phi.tuples()]))
    report.log_check('exactness', form_deviation(phi, d_gamma(psi, gamma), form_samples))
    report.log_check('closedness', closedness_residual(phi, gamma, form_samples))

    twisted = gauge_twist(R, phi)
    rep = twist_equivalence(basic_rep(R), psi)
    samples = _gauge_samples(config, params, twisted, stagger=0.3)
    report.log_check('twist_equivalence', rep_residual(rep, twisted, samples))


GAUGE_ACTIONS = {
    'twist': _gauge_twist,
    'reparam': _gauge_reparam,
    'scale': _gauge_scale,
    'check-exact': _gauge_check_exact,
}


def cmd_gauge(config: RunConfig, args) -> int:
    """Aplica um movimento de gauge e verifica o resultado"""
    params, R = _felder(config)
    report = _report(config)
    report.config['action'] = args.action
    print(f"🔧 Gauge {args.action} sobre {R.name}...")
    GAUGE_ACTIONS[args.action](config, args, report, params, R)
    return _finish(report, config, args)


def _read_json(path) -> dict:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"Não foi possível ler {path}: {e}") from e


def load_germ(path):
    """
    Germe em JSON: {"p": [re, im], "seed": [[re, im], ...],
    "coefficients": [g₁, g₂, ...]} ou {"polynomial": [a₁, a₂, ...]} escalar.
    """
    payload = _read_json(path)
    try:
        if 'polynomial' in payload:
            germ = AnalyticGerm.from_scalar_polynomial(list(from_pairs(payload['polynomial'])))
        else:
            germ = AnalyticGerm.from_multilinear([from_pairs(g) for g in payload['coefficients']])
        p = complex(*payload['p']) if 'p' in payload else None
        seed = from_pairs(payload['seed']) if 'seed' in payload else None
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"Germe inválido em {path}: {e}") from e
    return germ, p, seed


def _write_series(series, config: RunConfig, name: str) -> Path:
    report_path = _output_path(config, f"{config.command}.json")
    path = report_path.with_name(f"{report_path.stem}_{name}.json") if config.out \
        else Path(current_config.SERIES_PATH) / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(series_to_json(series), f, ensure_ascii=False, indent=2)
    return path


def _solve_germ(config, args, report):
    if args.germ:
        germ, p, seed = load_germ(args.germ)
    else:
        germ, p, seed = AnalyticGerm.from_scalar_polynomial([3, 1]), 3, np.array([1.0])
    if args.p is not None:
        p = args.p
    if p is None:
        raise UsageError("Informe p com --p ou no arquivo do germe")

    series = solve_difference(germ, p, config.order, seed)
    residuals = difference_residual(germ, p, series)
    report.log_check('difference_residual', float(residuals.max()), details={'per_order': residuals})
    if germ.multilinear is not None:
        growth = growth_bound_check(series, multilinear_amplitude(germ.multilinear), p)
        report.log_status('growth_bound', growth.passed, message=f"k0={growth.k0}",
                          details=growth.to_dict())
    report.artifacts['series_file'] = str(_write_series(series, config, 'series'))


def _solve_crossing(config, args, report):
    if args.series:
        try:
            series = series_from_json(_read_json(args.series))
        except (DomainError, ValueError) as e:
            raise DataError(f"Série inválida em {args.series}: {e}") from e
        n = int(round(math.sqrt(series.value_shape[0]))) if series.value_shape else 0
        if series.value_shape != (n * n, n * n):
            raise DataError(f"A série deve ter coeficientes n²×n², recebido {series.value_shape}")
        V = WeightedSpace.standard(n)
        rho, h_dual = staircase_rho(n).real, n
    else:
        series, V, _ = trigonometric_fixture(config.q, config.order, seed=config.seed)
        rho, h_dual = RHO_GL2, DUAL_COXETER_GL2

    crossing = verify_crossing_series(series, config.q, 1, h_dual, rho, V, V)
    report.log_check('crossing', crossing.max_residual, message=crossing.orientation,
                     details=crossing.to_dict())
    report.artifacts['series_file'] = str(_write_series(crossing.solution, config, 'crossing'))


def cmd_solve_difference(config: RunConfig, args) -> int:
    """Resolve f(pz) = G(f(z)) em série e verifica resíduo e cota de crescimento"""
    report = _report(config)
    crossing = args.series or args.fixture == 'crossing'
    print(f"🧮 Resolvendo equação de diferenças ({'cruzamento' if crossing else 'germe'})...")
    if crossing:
        _solve_crossing(config, args, report)
    else:
        _solve_germ(config, args, report)
    return _finish(report, config, args)


def cmd_export_samples(config: RunConfig, args) -> int:
    """Avalia a R-matriz de Felder (ou de --rmatrix) numa grade (u, λ) e salva em JSON"""
    if args.grid_u < 1 or args.grid_lambda < 1:
        raise UsageError("A grade deve ter ao menos um valor de u e um de λ")
    R, accept = _select_rmatrix(
        config, args, lambda op: evaluation_probe(lambda sample: op(sample.u[0], sample.lam)))
    rank = R.factors[0].rank
    stream = SampleStream(config.seed, STREAMS['export-samples'])
    draws = stream.draw(max(args.grid_u, args.grid_lambda), 1, rank, accept=accept)
    us = [sample.u[0] for sample in draws[:args.grid_u]]
    lams = [sample.lam for sample in draws[:args.grid_lambda]]

    records = []
    for u in us:
        for lam in lams:
            records.append({
                'u': [u.real, u.imag],
                'lambda': to_pairs(lam),
                'entries': to_pairs(R(u, lam).ravel()),
            })
    payload = {'operator': R.name, 'n': rank, 'seed': config.seed,
               'shape': [int(np.prod(R.out_dims)), int(np.prod(R.in_dims))], 'records': records}

    path = _output_path(config, f"{R.name}_grid.json", current_config.GRIDS_PATH)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
    print(f"📤 {len(records)} pontos exportados para {path}")
    return Config.EXIT_CODES[Config.VERDICT_PASS]


def cmd_diagnose(config: RunConfig, args) -> int:
    """Verificação do ambiente"""
    from system_checker import SystemChecker

    checker = SystemChecker()
    report = checker.run_all_checks()
    checker.print_summary_report(report)
    if config.out:
        checker.save_detailed_report(report, config.out)
    return Config.EXIT_CODES[Config.VERDICT_FAIL] if report['errors'] else Config.EXIT_CODES[Config.VERDICT_PASS]


COMMANDS = {
    'verify-qdybe': cmd_verify_qdybe,
    'gauge': cmd_gauge,
    'solve-difference': cmd_solve_difference,
    'export-samples': cmd_export_samples,
    'diagnose': cmd_diagnose,
}


# ============= ARGUMENTOS =============


def build_parser() -> argparse.ArgumentParser:
    shared = LabArgumentParser(add_help=False)
    shared.add_argument('--n', type=FIELDS['n'], help='posto n de gl_n')
    shared.add_argument('--tau', type=parse_complex, help='módulo elíptico τ (Im τ > 0)')
    shared.add_argument('--gamma', type=parse_complex, help='passo dinâmico γ')
    shared.add_argument('--q', type=parse_complex, help='parâmetro q')
    shared.add_argument('--kappa', type=parse_complex, help='nível κ')
    shared.add_argument('--samples', type=FIELDS['samples'], help='número de amostras')
    shared.add_argument('--seed', type=FIELDS['seed'], help='semente')
    shared.add_argument('--tol-pass', dest='tol_pass', type=FIELDS['tol_pass'])
    shared.add_argument('--tol-fail', dest='tol_fail', type=FIELDS['tol_fail'])
    shared.add_argument('--order', type=FIELDS['order'], help='ordem de truncamento')
    shared.add_argument('--out', help='arquivo de saída')
    shared.add_argument('--config', help='arquivo key=value com os mesmos campos das flags')
    shared.add_argument('--log-level', dest='log_level', default=None)
    shared.add_argument('--timing', action='store_true', help='grava o tempo de execução no JSON')

    parser = LabArgumentParser(prog='main.py', description=Config.DESCRIPTION)
    commands = parser.add_subparsers(dest='command', parser_class=LabArgumentParser)
    commands.required = True

    verify = commands.add_parser('verify-qdybe', parents=[shared])
    verify.add_argument('--rmatrix', help='modulo:callable que devolve um DynamicalOperator')

    gauge = commands.add_parser('gauge', parents=[shared])
    gauge.add_argument('action', choices=sorted(GAUGE_ACTIONS))
    gauge.add_argument('--form', choices=['sigma', 'exact', 'random'], default='sigma')
    gauge.add_argument('--a', type=parse_complex, default=1.0)
    gauge.add_argument('--b', type=parse_complex, default=1.0)
    gauge.add_argument('--mu', help="coordenadas de μ separadas por ';'")

    solve = commands.add_parser('solve-difference', parents=[shared])
    solve.add_argument('--fixture', choices=['scalar', 'crossing'], default='scalar')
    solve.add_argument('--germ', help='germe G em JSON')
    solve.add_argument('--series', help='série R(z) em JSON para verificar o cruzamento')
    solve.add_argument('--p', type=parse_complex)

    export = commands.add_parser('export-samples', parents=[shared])
    export.add_argument('--grid-u', dest='grid_u', type=FIELDS['n'], default=5)
    export.add_argument('--grid-lambda', dest='grid_lambda', type=FIELDS['n'], default=5)
    export.add_argument('--rmatrix', help='modulo:callable que devolve um DynamicalOperator')

    commands.add_parser('diagnose', parents=[shared])
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = build_run_config(args)
    except UsageError as e:
        print(f"❌ {e}", file=sys.stderr)
        return Config.EXIT_CODES['usage']
    except DataError as e:
        print(f"❌ {e}", file=sys.stderr)
        return Config.EXIT_CODES['data']

    Config.configure_logging(args.log_level or current_config.LOG_LEVEL)
    try:
        return COMMANDS[config.command](config, args)
    except (UsageError, DomainError) as e:
        print(f"❌ Parâmetros inválidos: {e}", file=sys.stderr)
        return Config.EXIT_CODES['usage']
    except DataError as e:
        print(f"❌ Entrada inválida: {e}", file=sys.stderr)
        return Config.EXIT_CODES['data']
    except ResonanceError as e:
        print(f"❌ Ressonância na ordem {e.order}: {e}", file=sys.stderr)
        return Config.EXIT_CODES['numerical']
    except (ConvergenceError, PoleError, SingularMatrixError) as e:
        print(f"❌ Erro numérico: {e}", file=sys.stderr)
        return Config.EXIT_CODES['numerical']


if __name__ == "__main__":
    sys.exit(main())
