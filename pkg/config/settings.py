import os
import logging
from typing import Dict, Any, Optional, List
from dataclasses import dataclass, fields


logger = logging.getLogger(__name__)


@dataclass
class AppConfig:
    """Application configuration settings."""

    # Work budgets
    work_budget: int = 10 ** 8
    trial_division_bound: int = 10 ** 6
    factor_bit_limit: int = 128

    # Elliptic curves
    point_count_prime_cap: int = 10 ** 5
    mazur_order_bound: int = 12
    reduction_check_primes: int = 3

    # Quadratic fields
    quad_discriminant_limit: int = 10 ** 8
    quad_structure_class_limit: int = 10 ** 4

    # Cubic fields
    cubic_discriminant_limit: int = 10 ** 6
    cubic_sweep_radius: int = 3
    cubic_max_sweep_radius: int = 24

    # Descent and scans
    point_search_limit: int = 10 ** 6
    descent_character_limit: int = 64
    specialization_u_max: int = 10 ** 3

    # Report settings
    cache_path: Optional[str] = None
    log_level: str = "WARNING"
    json_indent: int = 2


class ConfigManager:
    """Manage application configuration from defaults and environment variables."""

    # Not part of a request's identity in the result cache
    _presentation_settings = ('cache_path', 'log_level')

    _int_settings = {
        'work_budget': 'CLASSFORGE_BUDGET',
        'trial_division_bound': 'CLASSFORGE_TRIAL_DIVISION_BOUND',
        'point_count_prime_cap': 'CLASSFORGE_POINT_COUNT_CAP',
        'quad_discriminant_limit': 'CLASSFORGE_QUAD_LIMIT',
        'cubic_discriminant_limit': 'CLASSFORGE_CUBIC_LIMIT',
        'cubic_sweep_radius': 'CLASSFORGE_SWEEP_RADIUS',
        'cubic_max_sweep_radius': 'CLASSFORGE_MAX_SWEEP_RADIUS',
        'specialization_u_max': 'CLASSFORGE_U_MAX',
        'descent_character_limit': 'CLASSFORGE_CHARACTER_LIMIT',
    }

    def __init__(self):
        self._config: Optional[AppConfig] = None
        self._load_config()

    def _load_config(self):
        """Load configuration from environment variables and defaults."""
        config_data = {}
        self._load_from_env(config_data)
        self._config = AppConfig(**config_data)

    def _load_from_env(self, config_data):
        """Load from environment variables, ignoring malformed integers."""
        for key, env_name in self._int_settings.items():
            raw = os.getenv(env_name)
            if raw is None:
                continue
            try:
                config_data[key] = int(raw)
            except ValueError:
                logger.warning("ignoring %s=%r: not an integer", env_name, raw)

        config_data['cache_path'] = os.getenv('CLASSFORGE_CACHE') or None
        config_data['log_level'] = os.getenv('CLASSFORGE_LOG_LEVEL', 'WARNING').upper()

    def get_config(self) -> AppConfig:
        """Get the current configuration."""
        if self._config is None:
            self._load_config()
        return self._config

    def reload_config(self):
        """Reload configuration from sources."""
        self._load_config()

    def update_config_value(self, key: str, value: Any):
        """Update a configuration value for the rest of the process."""
        if not hasattr(self._config, key):
            raise KeyError(key)
        setattr(self._config, key, value)

    def get_budget_config(self) -> Dict[str, Any]:
        """Get budget-related configuration."""
        config = self.get_config()
        return {
            'work_budget': config.work_budget,
            'quad_discriminant_limit': config.quad_discriminant_limit,
            'cubic_discriminant_limit': config.cubic_discriminant_limit,
            'point_search_limit': config.point_search_limit,
        }

    def get_result_overrides(self) -> Dict[str, Any]:
        """Settings that differ from the defaults and can change a report or its exit code."""
        config = self.get_config()
        defaults = AppConfig()
        return {
            item.name: getattr(config, item.name)
            for item in fields(AppConfig)
            if item.name not in self._presentation_settings
            and getattr(config, item.name) != getattr(defaults, item.name)
        }


# Global configuration instance
_config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """Get the global configuration manager instance."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager


def get_config() -> AppConfig:
    """Get the current application configuration."""
    return get_config_manager().get_config()


# Environment validation
def validate_environment() -> List[str]:
    """Validate environment configuration and return list of warnings."""
    warnings = []
    config = get_config()

    if config.work_budget < 10 ** 4:
        warnings.append(f"Work budget {config.work_budget} is very low; most reports will hit limit-exceeded")

    if config.cubic_sweep_radius > config.cubic_max_sweep_radius:
        warnings.append("Cubic sweep radius exceeds the maximum radius; relation search will stop immediately")

    if config.specialization_u_max < 1:
        warnings.append("Specialization U_max below 1 disables norm-power specialization in scans")

    if config.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        warnings.append(f"Unknown log level {config.log_level}; falling back to WARNING")

    return warnings
