from setup_lab import ENV_TEMPLATE, create_env_template, create_project_structure


def test_structure_and_env(tmp_path):
    folders = create_project_structure(tmp_path)
    assert all((tmp_path / folder).is_dir() for folder in folders)

    create_env_template(tmp_path)
    assert (tmp_path / '.env').read_text(encoding='utf-8') == ENV_TEMPLATE

    (tmp_path / '.env').write_text('TOL_PASS=1e-8\n', encoding='utf-8')
    create_env_template(tmp_path)
    assert (tmp_path / '.env').read_text(encoding='utf-8') == 'TOL_PASS=1e-8\n'
    assert (tmp_path / '.env.template').exists()
