"""
Relatórios de verificação: resíduos, vereditos e exportação JSON/texto.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from config.settings import Config
from src.errors import DomainError

logger = logging.getLogger(__name__)

VERDICT_ICONS = {
    Config.VERDICT_PASS: '✅',
    Config.VERDICT_INCONCLUSIVE: '⚠️',
    Config.VERDICT_FAIL: '❌',
}


def to_serializable(obj):
    """Converte recursivamente tipos numpy e complexos para JSON ([re, im])"""
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return to_serializable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class CheckResult:
    """Resultado de uma verificação individual"""
    name: str
    residual: float
    tol_pass: float
    tol_fail: float
    verdict: str
    message: str = ''
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'residual': None if self.residual != self.residual else self.residual,
            'tol_pass': self.tol_pass,
            'tol_fail': self.tol_fail,
            'verdict': self.verdict,
            'message': self.message,
            'details': to_serializable(self.details),
        }


class VerificationReport:
    """
    Relatório de um comando do CLI.

    Args:
        command: nome do comando
        config: parâmetros efetivos da execução (ecoados no relatório)
        tol_pass: tolerância de aprovação padrão das verificações
        tol_fail: tolerância de reprovação padrão
    """

    def __init__(self, command: str, config: Optional[Dict] = None,
                 tol_pass: float = None, tol_fail: float = None):
        self.command = command
        self.config = dict(config or {})
        self.tol_pass = Config.TOL_PASS if tol_pass is None else tol_pass
        self.tol_fail = Config.TOL_FAIL if tol_fail is None else tol_fail
        if not self.tol_pass < self.tol_fail:
            raise DomainError(f"tol_pass ({self.tol_pass}) deve ser menor que tol_fail ({self.tol_fail})")
        self.checks: List[CheckResult] = []
        self.artifacts: Dict = {}
        self._started = time.perf_counter()
        self.wall_time: Optional[float] = None

    def log_check(self, name: str, residual: float, message: str = '',
                  details: Dict = None, tol_pass: float = None, tol_fail: float = None) -> CheckResult:
        """Registra um resíduo e o classifica"""
        tol_pass = self.tol_pass if tol_pass is None else tol_pass
        tol_fail = self.tol_fail if tol_fail is None else tol_fail
        residual = float(residual)
        verdict = Config.classify(residual, tol_pass, tol_fail)
        result = CheckResult(name, residual, tol_pass, tol_fail, verdict, message, details or {})
        self.checks.append(result)
        logger.info("%s: resíduo %.3e → %s", name, residual, verdict)
        return result

    def log_status(self, name: str, passed: bool, message: str = '', details: Dict = None) -> CheckResult:
        """Registra uma verificação booleana (sem resíduo numérico)"""
        verdict = Config.VERDICT_PASS if passed else Config.VERDICT_FAIL
        result = CheckResult(name, 0.0 if passed else float('nan'), self.tol_pass, self.tol_fail,
                             verdict, message, details or {})
        self.checks.append(result)
        logger.info("%s: %s", name, verdict)
        return result

    @property
    def verdict(self) -> str:
        verdicts = {check.verdict for check in self.checks}
        if Config.VERDICT_FAIL in verdicts:
            return Config.VERDICT_FAIL
        if Config.VERDICT_INCONCLUSIVE in verdicts:
            return Config.VERDICT_INCONCLUSIVE
        return Config.VERDICT_PASS

    @property
    def exit_code(self) -> int:
        return Config.EXIT_CODES[self.verdict]

    def finish(self) -> 'VerificationReport':
        self.wall_time = time.perf_counter() - self._started
        return self

    def to_dict(self, include_timing: bool = False) -> Dict:
        report = {
            'command': self.command,
            'config': to_serializable(self.config),
            'verdict': self.verdict,
            'checks': [check.to_dict() for check in self.checks],
            'artifacts': to_serializable(self.artifacts),
        }
        if include_timing:
            report['wall_time'] = self.wall_time
        return report

    # ============= EXPORTAÇÃO =============

    def export_json(self, path, include_timing: bool = False) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(include_timing), f, ensure_ascii=False, indent=2)
        logger.info("Relatório JSON salvo em %s", path)
        return path

    def to_frame(self) -> pd.DataFrame:
        rows = [{
            'check': c.name,
            'residual': c.residual,
            'tol_pass': c.tol_pass,
            'tol_fail': c.tol_fail,
            'verdict': c.verdict,
            'message': c.message,
        } for c in self.checks]
        return pd.DataFrame(rows, columns=['check', 'residual', 'tol_pass', 'tol_fail', 'verdict', 'message'])

    def export_txt(self, path) -> Path:
        """Tabela legível das verificações, floats com 17 algarismos significativos"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        table = self.to_frame().to_string(index=False, float_format=lambda x: f"{x:.17g}")
        with open(path, 'w', encoding='utf-8') as f:
            f.write(f"{self.command}: {self.verdict}\n\n{table}\n")
        return path

    def print_summary(self):
        """Resumo no console"""
        icon = VERDICT_ICONS.get(self.verdict, '❓')
        print(f"\n{icon} {self.command}: {self.verdict.upper()}")
        for check in self.checks:
            check_icon = VERDICT_ICONS.get(check.verdict, '❓')
            line = f"   {check_icon} {check.name}: {check.residual:.3e}"
            if check.message:
                line += f" ({check.message})"
            print(line)
        if self.wall_time is not None:
            print(f"⏱️ {self.wall_time:.2f}s")
