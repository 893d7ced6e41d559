import pytest

from config.settings import get_config, validate_environment


def test_defaults(fresh_config):
    config = get_config()
    assert config.work_budget == 10 ** 8
    assert config.json_indent == 2
    assert config.cache_path is None
    assert fresh_config.get_budget_config()['cubic_discriminant_limit'] == 10 ** 6


def test_environment_overrides(fresh_config, monkeypatch):
    monkeypatch.setenv('CLASSFORGE_BUDGET', '5000')
    monkeypatch.setenv('CLASSFORGE_SWEEP_RADIUS', 'wide')
    monkeypatch.setenv('CLASSFORGE_CACHE', '/tmp/classforge.json')
    monkeypatch.setenv('CLASSFORGE_LOG_LEVEL', 'info')
    fresh_config.reload_config()
    config = get_config()
    assert config.work_budget == 5000
    assert config.cubic_sweep_radius == 3
    assert config.cache_path == '/tmp/classforge.json'
    assert config.log_level == 'INFO'


def test_update_rejects_unknown_keys(fresh_config):
    with pytest.raises(KeyError):
        fresh_config.update_config_value('no_such_setting', 1)


def test_validate_environment_warnings(fresh_config):
    assert validate_environment() == []
    fresh_config.update_config_value('work_budget', 10)
    fresh_config.update_config_value('cubic_sweep_radius', 50)
    warnings = validate_environment()
    assert len(warnings) == 2


def test_result_overrides_list_only_changed_limits(fresh_config):
    assert fresh_config.get_result_overrides() == {}
    fresh_config.update_config_value('work_budget', 500)
    fresh_config.update_config_value('cache_path', '/tmp/other.json')
    fresh_config.update_config_value('log_level', 'DEBUG')
    fresh_config.update_config_value('specialization_u_max', 10)
    assert fresh_config.get_result_overrides() == {'work_budget': 500, 'specialization_u_max': 10}
