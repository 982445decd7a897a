#!/usr/bin/env python3
"""
Sistema de Verificação do Dynamical R-Matrix Lab
Testa dependências, estrutura e o núcleo numérico e gera relatório de status
Execute: python system_checker.py  (ou python main.py diagnose)
"""

import json
import sys
from datetime import datetime
from pathlib import Path

import numpy as np

from config.settings import Config


class SystemChecker:
    """Verificador do ambiente e do núcleo numérico"""

    def __init__(self, samples: int = 5, seed: int = None):
        self.samples = samples
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        self.report = {
            'timestamp': datetime.now(),
            'project': Config.get_project_info(),
            'status': 'INICIANDO',
            'tests': {},
            'warnings': [],
            'errors': [],
            'recommendations': []
        }

    def log_test(self, test_name: str, status: str, message: str, details: dict = None):
        """Registra resultado de um teste"""
        self.report['tests'][test_name] = {
            'status': status,
            'message': message,
            'details': details or {}
        }

        if status == 'ERROR':
            self.report['errors'].append(f"{test_name}: {message}")
        elif status == 'WARNING':
            self.report['warnings'].append(f"{test_name}: {message}")

    def _numerical(self, test_name: str, residual: float, label: str):
        if residual <= Config.TOL_PASS:
            self.log_test(test_name, 'SUCCESS', f"{label}: resíduo {residual:.2e}", {'residual': residual})
        elif residual < Config.TOL_FAIL:
            self.log_test(test_name, 'WARNING', f"{label}: resíduo inconclusivo {residual:.2e}",
                          {'residual': residual})
        else:
            self.log_test(test_name, 'ERROR', f"{label}: resíduo {residual:.2e}", {'residual': residual})

    # ============= AMBIENTE =============

    def check_project_structure(self):
        """Verifica estrutura do projeto"""
        print("📁 Verificando estrutura do projeto...")

        required = ['main.py', 'requirements.txt', 'config/settings.py', 'src/__init__.py',
                    'src/errors.py', 'src/special_functions.py', 'src/weight_core.py',
                    'src/sampling.py', 'src/felder.py', 'src/qdybe.py', 'src/gauge.py',
                    'src/power_series.py', 'src/difference_solver.py', 'src/trigonometric.py',
                    'src/reporting.py']
        missing = [name for name in required if not (Config.BASE_DIR / name).exists()]

        if not missing:
            self.log_test('project_structure', 'SUCCESS', f"Estrutura completa: {len(required)} arquivos")
        else:
            self.log_test('project_structure', 'ERROR', f"Faltam: {', '.join(missing)}", {'missing': missing})

    def check_dependencies(self):
        """Verifica dependências Python"""
        print("📦 Verificando dependências...")

        required_deps = {'numpy': 'numpy', 'pandas': 'pandas', 'python-dotenv': 'dotenv'}
        optional_deps = {'pytest': 'pytest'}

        deps_report = {'required_missing': [], 'optional_missing': []}
        for dep, module in required_deps.items():
            try:
                __import__(module)
            except ImportError:
                deps_report['required_missing'].append(dep)
        for dep, module in optional_deps.items():
            try:
                __import__(module)
            except ImportError:
                deps_report['optional_missing'].append(dep)

        if deps_report['required_missing']:
            self.log_test('dependencies', 'ERROR',
                          f"Faltam dependências: {', '.join(deps_report['required_missing'])}", deps_report)
        elif deps_report['optional_missing']:
            self.log_test('dependencies', 'WARNING', "pytest não instalado: a suíte de testes não roda",
                          deps_report)
        else:
            self.log_test('dependencies', 'SUCCESS', "Todas as dependências instaladas", deps_report)

    def check_configuration(self):
        """Verifica a consistência das configurações"""
        print("⚙️ Verificando configuração...")

        problems = []
        if not Config.TOL_PASS < Config.TOL_FAIL:
            problems.append("TOL_PASS deve ser menor que TOL_FAIL")
        if Config.POLE_MARGIN <= 0:
            problems.append("POLE_MARGIN deve ser positivo")
        if Config.DEFAULT_SAMPLES < 1:
            problems.append("DEFAULT_SAMPLES deve ser ≥ 1")

        if problems:
            self.log_test('configuration', 'ERROR', '; '.join(problems))
        elif not Config.ENV_FILE.exists():
            self.log_test('configuration', 'WARNING', "Arquivo .env não encontrado (usando padrões)")
        else:
            self.log_test('configuration', 'SUCCESS', "Configuração consistente")

    # ============= NÚCLEO NUMÉRICO =============

    def check_theta(self):
        """Quase-periodicidade de θ₁"""
        print("🌀 Verificando θ₁...")
        from src.special_functions import theta1

        rng = np.random.default_rng(self.seed)
        tau = 1j
        worst = 0.0
        for _ in range(self.samples):
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
            value = theta1(z, tau)
            worst = max(worst, abs(theta1(z + 1, tau) + value))
            expected = -np.exp(-1j * np.pi * tau - 2j * np.pi * z) * value
            worst = max(worst, abs(theta1(z + tau, tau) - expected))
        self._numerical('theta_quasi_periodicity', worst, "θ₁(z+1), θ₁(z+τ)")

    def check_qgamma(self):
        """Γ_p(x+1) = [x]_p Γ_p(x)"""
        print("Γ Verificando Γ_p...")
        from src.special_functions import complex_power, qgamma

        rng = np.random.default_rng(self.seed)
        p = 0.3
        worst = 0.0
        for _ in range(self.samples):
            x = complex(rng.uniform(0.2, 2.0), rng.uniform(-0.5, 0.5))
            bracket = (1 - complex_power(p, x)) / (1 - p)
            worst = max(worst, abs(qgamma(x + 1, p) - bracket * qgamma(x, p)))
        self._numerical('qgamma_functional_equation', worst, "Γ_p(x+1) = [x]_p Γ_p(x)")

    def check_felder(self):
        """Yang-Baxter dinâmica para Felder n=2 em poucas amostras"""
        print("🔍 Verificando R-matriz de Felder...")
        from src.felder import FelderParams, felder_rmatrix, felder_sample_filter
        from src.qdybe import qdybe_residual
        from src.sampling import STREAMS, SampleStream

        params = FelderParams(2, Config.DEFAULT_TAU, Config.DEFAULT_GAMMA)
        samples = SampleStream(self.seed, STREAMS['diagnose']).draw(
            self.samples, 3, 2, accept=felder_sample_filter(params))
        self._numerical('felder_qdybe', qdybe_residual(felder_rmatrix(params), samples), "QDYBE n=2")

    def check_series(self):
        """Inversa formal de uma série matricial"""
        print("🧮 Verificando séries de potências...")
        from src.power_series import MatrixPowerSeries

        rng = np.random.default_rng(self.seed)
        coefficients = rng.normal(size=(6, 3, 3)) + 1j * rng.normal(size=(6, 3, 3))
        coefficients[0] += 3 * np.eye(3)
        series = MatrixPowerSeries(coefficients)
        product = series * series.reciprocal()
        identity = MatrixPowerSeries.constant(np.eye(3), series.order)
        residual = float(np.max(np.abs((product - identity).c)))
        self._numerical('series_inversion', residual, "A·A⁻¹ = 1")

    def generate_recommendations(self):
        """Gera recomendações a partir dos testes"""
        tests = self.report['tests']
        if tests.get('dependencies', {}).get('status') != 'SUCCESS':
            self.report['recommendations'].append("Execute: pip install -r requirements.txt")
        if tests.get('configuration', {}).get('status') == 'WARNING':
            self.report['recommendations'].append("Crie um .env a partir de .env.template para ajustar tolerâncias")
        if any(name in tests and tests[name]['status'] != 'SUCCESS'
               for name in ('theta_quasi_periodicity', 'qgamma_functional_equation',
                            'felder_qdybe', 'series_inversion')):
            self.report['recommendations'].append("Revise TRUNCATION_EPS e POLE_TOL no .env")

    def run_all_checks(self):
        """Executa todas as verificações"""
        print("🚀 Iniciando verificação completa do sistema...")
        print("=" * 60)

        self.check_project_structure()
        self.check_dependencies()
        self.check_configuration()
        for check in (self.check_theta, self.check_qgamma, self.check_felder, self.check_series):
            try:
                check()
            except Exception as e:
                self.log_test(check.__name__.replace('check_', ''), 'ERROR', f"Falha inesperada: {e}")
        self.generate_recommendations()

        statuses = [test['status'] for test in self.report['tests'].values()]
        error_count = statuses.count('ERROR')
        warning_count = statuses.count('WARNING')

        if error_count == 0 and warning_count == 0:
            self.report['status'] = 'EXCELLENT'
        elif error_count == 0:
            self.report['status'] = 'GOOD'
        elif error_count <= 2:
            self.report['status'] = 'NEEDS_ATTENTION'
        else:
            self.report['status'] = 'CRITICAL'

        print("\n" + "=" * 60)
        print("📋 RELATÓRIO FINAL")
        print("=" * 60)

        return self.report

    def print_summary_report(self, report):
        """Imprime relatório resumido"""
        status_colors = {
            'EXCELLENT': '🟢',
            'GOOD': '🟡',
            'NEEDS_ATTENTION': '🟠',
            'CRITICAL': '🔴'
        }

        print(f"\n{status_colors.get(report['status'], '⚪')} STATUS GERAL: {report['status']}")

        print("\n📊 RESUMO DOS TESTES:")
        for test_name, test_data in report['tests'].items():
            status_icon = {'SUCCESS': '✅', 'WARNING': '⚠️', 'ERROR': '❌'}.get(test_data['status'], '❓')
            print(f"   {status_icon} {test_name}: {test_data['message']}")

        if report['errors']:
            print("\n❌ ERROS CRÍTICOS:")
            for error in report['errors']:
                print(f"   • {error}")

        if report['warnings']:
            print("\n⚠️ AVISOS:")
            for warning in report['warnings']:
                print(f"   • {warning}")

        if report['recommendations']:
            print("\n💡 RECOMENDAÇÕES:")
            for rec in report['recommendations']:
                print(f"   • {rec}")

    def save_detailed_report(self, report, filename="system_check_report.json"):
        """Salva relatório detalhado em JSON"""
        try:
            report_copy = report.copy()
            report_copy['timestamp'] = report['timestamp'].isoformat()
            Path(filename).parent.mkdir(parents=True, exist_ok=True)

            with open(filename, 'w', encoding='utf-8') as f:
                json.dump(report_copy, f, ensure_ascii=False, indent=2, default=str)

            print(f"\n💾 Relatório detalhado salvo: {filename}")
            return True
        except OSError as e:
            print(f"\n❌ Erro ao salvar relatório: {e}")
            return False


def main():
    """Função principal"""
    print("🔍 VERIFICADOR DO DYNAMICAL R-MATRIX LAB")
    print("=" * 60)

    checker = SystemChecker()
    report = checker.run_all_checks()
    checker.print_summary_report(report)
    checker.save_detailed_report(report)

    if report['errors']:
        print("\n🚨 AÇÃO REQUERIDA - Resolva os erros críticos antes de prosseguir")
        return 1
    print("\n🎉 Sistema pronto. Execute: python main.py verify-qdybe")
    return 0


if __name__ == "__main__":
    sys.exit(main())
