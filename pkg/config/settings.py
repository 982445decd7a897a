import os
import logging
from pathlib import Path
from dotenv import load_dotenv

# Carregar variáveis de ambiente
load_dotenv()


def _env_float(key, default):
    return float(os.getenv(key, str(default)))


def _env_int(key, default):
    return int(os.getenv(key, str(default)))


class Config:
    """Configurações centralizadas do verificador de R-matrizes dinâmicas"""

    # ============= INFORMAÇÕES DO PROJETO =============
    PROJECT_NAME = "Dynamical R-Matrix Lab"
    VERSION = "1.0.0"
    DESCRIPTION = ("Verificação numérica da equação de Yang-Baxter quântica dinâmica, "
                   "transformações de gauge e simetria de cruzamento")

    # ============= ESTRUTURA DE PASTAS =============
    BASE_DIR = Path(__file__).parent.parent

    DATA_DIR = BASE_DIR / "data"

    # Relatórios, séries e grades exportadas
    REPORTS_PATH = DATA_DIR / "reports"
    SERIES_PATH = DATA_DIR / "series"
    GRIDS_PATH = DATA_DIR / "grids"

    ENV_FILE = BASE_DIR / ".env"

    # ============= FUNÇÕES ESPECIAIS =============

    # Critério de truncamento das séries de theta e dos produtos q-Gamma
    TRUNCATION_EPS = _env_float('TRUNCATION_EPS', 1e-15)
    MAX_TERMS = _env_int('MAX_TERMS', 10000)

    # Um fator de denominador abaixo disso conta como polo
    POLE_TOL = _env_float('POLE_TOL', 1e-12)

    # γ não pode estar no reticulado ℤ+τℤ
    LATTICE_TOL = 1e-12

    # ============= PESOS E OPERADORES =============

    WEIGHT_TOL = 1e-9

    # Acima disso a matriz é tratada como singular
    SINGULAR_CONDITION = 1e12

    # Amostras com número de condição acima disso são rejeitadas
    SAMPLE_CONDITION_LIMIT = 1e8

    # ============= AMOSTRAGEM =============

    DEFAULT_SEED = _env_int('DEFAULT_SEED', 20240601)
    DEFAULT_SAMPLES = _env_int('DEFAULT_SAMPLES', 100)

    # u uniforme no disco |u| < raio
    SPECTRAL_RADIUS = 1.0

    # λ uniforme na caixa [-re, re] + i[-im, im]
    LAMBDA_REAL_BOX = 0.5
    LAMBDA_IMAG_BOX = 0.2

    # Distância mínima ao reticulado ℤ+τℤ para pontos de Felder
    POLE_MARGIN = _env_float('POLE_MARGIN', 0.05)

    MAX_RESAMPLE_ATTEMPTS = 1000

    # ============= PARÂMETROS PADRÃO DO CLI =============

    DEFAULT_N = 2
    DEFAULT_TAU = 2j
    DEFAULT_GAMMA = 0.31 + 0.07j
    DEFAULT_Q = 0.6
    DEFAULT_KAPPA = 3.0

    # ============= VEREDITOS =============

    TOL_PASS = _env_float('TOL_PASS', 1e-9)
    TOL_FAIL = _env_float('TOL_FAIL', 1e-6)

    VERDICT_PASS = 'pass'
    VERDICT_FAIL = 'fail'
    VERDICT_INCONCLUSIVE = 'inconclusive'

    # Códigos de saída do CLI
    EXIT_CODES = {
        VERDICT_PASS: 0,
        VERDICT_FAIL: 1,
        VERDICT_INCONCLUSIVE: 2,
        'usage': 64,
        'data': 65,
        'numerical': 70,
    }

    # ============= SOLVER DE DIFERENÇAS =============

    RESONANCE_LIMIT = 1e12
    DEFAULT_ORDER = 8
    SEED_TOL = 1e-8
    FIXED_POINT_TOL = 1e-9

    # Folga multiplicativa nas constantes da cota de crescimento
    GROWTH_SLACK = 1.01

    # ============= FORMAS MULTIPLICATIVAS =============

    FORM_TOL = 1e-10

    # ============= CONFIGURAÇÕES DE LOGGING =============

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

    # ============= MÉTODOS UTILITÁRIOS =============

    @classmethod
    def get_project_info(cls):
        """Retorna informações do projeto"""
        return {
            'name': cls.PROJECT_NAME,
            'version': cls.VERSION,
            'description': cls.DESCRIPTION,
            'base_dir': str(cls.BASE_DIR),
            'debug': cls.DEBUG,
        }

    @classmethod
    def classify(cls, residual, tol_pass=None, tol_fail=None):
        """Veredito de um resíduo: pass se ≤ tol_pass, fail se ≥ tol_fail"""
        tol_pass = cls.TOL_PASS if tol_pass is None else tol_pass
        tol_fail = cls.TOL_FAIL if tol_fail is None else tol_fail
        if residual != residual:  # NaN
            return cls.VERDICT_FAIL
        if residual <= tol_pass:
            return cls.VERDICT_PASS
        if residual >= tol_fail:
            return cls.VERDICT_FAIL
        return cls.VERDICT_INCONCLUSIVE

    @classmethod
    def configure_logging(cls, level=None):
        """Configura o logging raiz com o formato do projeto"""
        logging.basicConfig(
            level=getattr(logging, str(level or cls.LOG_LEVEL).upper(), logging.INFO),
            format=cls.LOG_FORMAT,
            datefmt=cls.LOG_DATE_FORMAT,
        )


# ============= CONFIGURAÇÕES ESPECÍFICAS POR AMBIENTE =============


class DevelopmentConfig(Config):
    """Configurações para desenvolvimento"""
    DEBUG = True
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    """Configurações para produção"""
    DEBUG = False
    LOG_LEVEL = 'INFO'


class TestingConfig(Config):
    """Configurações para testes"""
    DEBUG = True
    LOG_LEVEL = 'WARNING'
    # Pastas temporárias para testes
    DATA_DIR = Config.BASE_DIR / "test_data"
    REPORTS_PATH = DATA_DIR / "reports"
    SERIES_PATH = DATA_DIR / "series"
    GRIDS_PATH = DATA_DIR / "grids"


# ============= SELEÇÃO DE CONFIGURAÇÃO =============


def get_config():
    """Retorna a configuração baseada na variável de ambiente"""
    env = os.getenv('ENVIRONMENT', 'development').lower()

    if env == 'production':
        return ProductionConfig
    elif env == 'testing':
        return TestingConfig
    else:
        return DevelopmentConfig


# Instância padrão
current_config = get_config()
