"""Preset manager with caching"""

import yaml
import logging
from typing import Dict, Optional, Tuple
from datetime import datetime

from app.config.settings import settings
from app.exceptions import ConfigurationError
from app.models.model_config import ModelConfig
from app.models.train_config import TrainConfig

logger = logging.getLogger(__name__)


class ConfigManager:
    """Singleton access to the hyper-parameter presets with caching"""

    _instance: Optional['ConfigManager'] = None
    _presets: Optional[Dict] = None
    _last_reload: Optional[datetime] = None

    def __new__(cls):
        """Ensure only one instance exists"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            logger.debug("ConfigManager singleton created")
        return cls._instance

    @property
    def presets(self) -> Dict:
        """Get cached presets"""
        if self._presets is None:
            self._load_presets()
        return self._presets

    @property
    def last_reload(self) -> Optional[datetime]:
        """Get timestamp of last reload"""
        return self._last_reload

    def _load_presets(self):
        logger.debug(f"Loading presets from {settings.PRESETS_CONFIG}")

        with open(settings.PRESETS_CONFIG, 'r', encoding='utf-8') as f:
            self._presets = yaml.safe_load(f)

        self._last_reload = datetime.now()

    def reload(self):
        """Force reload presets (useful for development)"""
        logger.info("Reloading presets")
        self._presets = None
        self._load_presets()

    def get_preset(self, name: str) -> Optional[Dict]:
        """
        Get a preset by name

        Args:
            name: Preset identifier (e.g., 'reference')

        Returns:
            Preset dict, or None if not found
        """
        return self.presets.get(name)

    def build_configs(self, name: str, **overrides) -> Tuple[ModelConfig, TrainConfig]:
        """
        Build validated model/train configs from a preset plus overrides

        Args:
            name: Preset identifier
            **overrides: Field overrides; keys are routed to whichever config declares them

        Returns:
            (ModelConfig, TrainConfig)

        Raises:
            ConfigurationError: Unknown preset, unknown key or invalid value
        """
        preset = self.get_preset(name)
        if preset is None:
            raise ConfigurationError(
                f"Unknown preset '{name}' (available: {', '.join(sorted(self.presets))})",
                config_file=str(settings.PRESETS_CONFIG)
            )

        model_fields = dict(preset.get('model', {}))
        train_fields = dict(preset.get('train', {}))
        train_fields.update(preset.get('graph', {}))

        for key, value in overrides.items():
            if value is None:
                continue
            if key in ModelConfig.model_fields:
                model_fields[key] = value
            elif key in TrainConfig.model_fields:
                train_fields[key] = value
            else:
                raise ConfigurationError(f"Unknown configuration key '{key}'", field=key)

        try:
            return ModelConfig(**model_fields), TrainConfig(**train_fields)
        except ValueError as e:
            raise ConfigurationError(str(e).replace("\n", "; "), field=name) from e


# Global singleton instance
config_manager = ConfigManager()
