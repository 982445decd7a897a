#!/usr/bin/env python3
"""
Script de configuração do Dynamical R-Matrix Lab
Executa: python setup_lab.py [--no-install]
"""

import subprocess
import sys
from pathlib import Path

ENV_TEMPLATE = """# Tolerâncias dos vereditos (pass ≤ TOL_PASS < inconclusivo < TOL_FAIL ≤ fail)
TOL_PASS=1e-9
TOL_FAIL=1e-6

# Truncamento das séries de theta e dos produtos q-Gamma
TRUNCATION_EPS=1e-15
MAX_TERMS=10000
POLE_TOL=1e-12

# Amostragem
DEFAULT_SEED=20240601
DEFAULT_SAMPLES=100
POLE_MARGIN=0.05

# development | production | testing
ENVIRONMENT=development
LOG_LEVEL=INFO
"""


def create_project_structure(base: Path = Path('.')):
    """Cria as pastas de saída do projeto"""
    print("📁 Criando estrutura de pastas...")

    folders = ['data/reports', 'data/series', 'data/grids']
    for folder in folders:
        (base / folder).mkdir(parents=True, exist_ok=True)
        print(f"  ✅ {folder}/")
    return folders


def create_env_template(base: Path = Path('.')):
    """Cria .env.template e, se não existir, .env"""
    print("⚙️ Criando template .env...")

    (base / '.env.template').write_text(ENV_TEMPLATE, encoding='utf-8')
    env_file = base / '.env'
    if not env_file.exists():
        env_file.write_text(ENV_TEMPLATE, encoding='utf-8')
        print("  ✅ .env criado (ajuste as tolerâncias se precisar)")
    else:
        print("  ℹ️ .env já existe (mantendo configuração atual)")


def install_dependencies():
    """Instala dependências do Python"""
    print("🚀 Instalando dependências...")

    try:
        subprocess.check_call([sys.executable, '-m', 'pip', 'install', '-r', 'requirements.txt'])
        print("  ✅ Dependências instaladas com sucesso!")
        return True
    except subprocess.CalledProcessError:
        print("  ❌ Erro ao instalar dependências")
        print("     Execute manualmente: pip install -r requirements.txt")
        return False


def main(argv=None):
    """Função principal de configuração"""
    argv = sys.argv[1:] if argv is None else argv
    print("🚀 Configurando Dynamical R-Matrix Lab...")
    print("=" * 50)

    try:
        create_project_structure()
        create_env_template()
        if '--no-install' not in argv:
            install_dependencies()
    except OSError as e:
        print(f"❌ Erro durante configuração: {e}")
        return 1

    print("\n✅ CONFIGURAÇÃO CONCLUÍDA!")
    print("📋 PRÓXIMOS PASSOS:")
    print("1. python main.py diagnose")
    print("2. python main.py verify-qdybe --n 2 --samples 100")
    print("3. pytest")
    return 0


if __name__ == "__main__":
    sys.exit(main())
