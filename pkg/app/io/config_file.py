"""
Plain-text `key = value` configuration files

    # comment
    base-n = 16
    variant = full
    homogeneous = true

Keys use the CLI flag spelling; `-` and `_` are interchangeable. Values are
parsed as int, float or bool where possible and kept as strings otherwise.
"""
from pathlib import Path
from typing import Any, Dict, Union

from app.core.logging import get_logger
from app.exceptions import ConfigurationError

logger = get_logger(__name__)

TRUE_WORDS = {"true", "yes", "on"}
FALSE_WORDS = {"false", "no", "off"}


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def parse_value(text: str) -> Any:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    lowered = text.lower()
    if lowered in TRUE_WORDS:
        return True
    if lowered in FALSE_WORDS:
        return False
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, Any]:
    """
    Parse config text into {normalized_key: value}

    Raises:
        ConfigurationError: A non-comment line without '=' or with an empty key
    """
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got '{raw.strip()}'", config_file=source)
        key = normalize_key(key)
        if key in values:
            logger.warning(f"{source}:{lineno}: '{key}' set twice, last value wins")
        values[key] = parse_value(value)
    return values


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError("file not found", config_file=str(path))
    with open(path, "r", encoding="utf-8") as f:
        return parse_config_text(f.read(), source=str(path))
