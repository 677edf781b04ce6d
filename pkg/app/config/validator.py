"""Preset file validation"""

import yaml
import logging

from app.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class ConfigValidator:
    """Validates preset files for correctness"""

    REQUIRED_SECTIONS = ['model', 'train']
    REQUIRED_MODEL_FIELDS = {
        'embed_dim': int,
        'mp_steps': int,
        'transformer_layers': int,
        'attention_heads': int,
        'mlp_layers': int,
    }
    REQUIRED_TRAIN_FIELDS = {
        'learning_rate': float,
        'weight_decay': float,
        'epochs': int,
        'restart_period': int,
    }

    @staticmethod
    def validate_presets_config(presets_path: str) -> bool:
        """
        Validate presets.yaml structure and required fields

        Args:
            presets_path: Path to presets.yaml

        Returns:
            True if valid

        Raises:
            ConfigurationError: If validation fails
        """
        logger.info(f"Validating presets: {presets_path}")

        try:
            with open(presets_path, 'r', encoding='utf-8') as f:
                presets = yaml.safe_load(f)
        except Exception as e:
            raise ConfigurationError(f"Failed to load YAML: {e}", config_file="presets.yaml")

        if not isinstance(presets, dict) or not presets:
            raise ConfigurationError("Presets file must map names to presets", config_file="presets.yaml")

        for name, preset in presets.items():
            if not isinstance(preset, dict):
                raise ConfigurationError(
                    f"Preset '{name}' must be a dictionary",
                    config_file="presets.yaml",
                    field=name
                )

            for section in ConfigValidator.REQUIRED_SECTIONS:
                if section not in preset:
                    raise ConfigurationError(
                        f"Preset '{name}' missing required section: {section}",
                        config_file="presets.yaml",
                        field=f"{name}.{section}"
                    )

            ConfigValidator._check_fields(name, 'model', preset['model'], ConfigValidator.REQUIRED_MODEL_FIELDS)
            ConfigValidator._check_fields(name, 'train', preset['train'], ConfigValidator.REQUIRED_TRAIN_FIELDS)

            model = preset['model']
            if model['embed_dim'] % model['attention_heads'] != 0:
                raise ConfigurationError(
                    f"Preset '{name}' embed_dim must be divisible by attention_heads",
                    config_file="presets.yaml",
                    field=f"{name}.model.embed_dim"
                )

            if preset['train']['learning_rate'] <= 0:
                raise ConfigurationError(
                    f"Preset '{name}' learning_rate must be positive",
                    config_file="presets.yaml",
                    field=f"{name}.train.learning_rate"
                )

        logger.info(f"Presets valid ({len(presets)} presets)")
        return True

    @staticmethod
    def _check_fields(name: str, section: str, data: dict, required: dict):
        for field, expected in required.items():
            if field not in data:
                raise ConfigurationError(
                    f"Preset '{name}' missing required field: {field}",
                    config_file="presets.yaml",
                    field=f"{name}.{section}.{field}"
                )
            value = data[field]
            # ints are acceptable where floats are expected, bools never are
            ok = isinstance(value, expected) or (expected is float and isinstance(value, int))
            if isinstance(value, bool) or not ok:
                raise ConfigurationError(
                    f"Preset '{name}' {field} must be a {expected.__name__}",
                    config_file="presets.yaml",
                    field=f"{name}.{section}.{field}"
                )
            if expected is int and value < 1:
                raise ConfigurationError(
                    f"Preset '{name}' {field} must be >= 1",
                    config_file="presets.yaml",
                    field=f"{name}.{section}.{field}"
                )

    @staticmethod
    def validate_all() -> bool:
        """
        Validate all configuration files

        Returns:
            True if all valid

        Raises:
            ConfigurationError: If any validation fails
        """
        from app.config.settings import settings

        ConfigValidator.validate_presets_config(settings.PRESETS_CONFIG)
        return True
