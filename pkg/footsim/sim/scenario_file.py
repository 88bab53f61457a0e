"""
Scenario files: TOML text validated into a ScenarioConfig.
See design_notes.md for the grammar.
"""

__all__ = [
    "bundled_scenario_path",
    "parse_override",
    "apply_overrides",
    "parse_scenario",
    "load_scenario",
]

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from pydantic import ValidationError

from footsim.errors import DomainError, ScenarioParseError
from footsim.models import ScenarioConfig

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"
_TOML_POSITION = re.compile(r"\(at line (\d+), column (\d+)\)")


def bundled_scenario_path(name: str) -> Optional[Path]:
    """Path of a scenario shipped with the package, or None."""
    path = SCENARIO_DIR / f"{name}.toml"
    return path if path.is_file() else None


def parse_override(text: str) -> Tuple[Tuple[str, ...], Any]:
    """'section.key=value' -> (('section', 'key'), value); value parsed as TOML, else kept as text."""
    if "=" not in text:
        raise DomainError(f"override {text!r} must look like section.key=value")
    key, raw = text.split("=", 1)
    parts = tuple(p.strip() for p in key.strip().split("."))
    if not all(parts):
        raise DomainError(f"override {text!r} has an empty key")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return parts, value


def apply_overrides(data: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    for text in overrides:
        parts, value = parse_override(text)
        node = data
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise DomainError(f"override {text!r}: {part!r} is not a table")
            node = child
        node[parts[-1]] = value
        logger.debug("Override %s = %r", ".".join(parts), value)
    return data


def _locate(text: str, loc: Tuple[Any, ...]) -> Tuple[Optional[int], Optional[int]]:
    """Best-effort line/column of the innermost key named in a validation error location."""
    keys = [k for k in loc if isinstance(k, str)]
    for key in reversed(keys):
        pattern = re.compile(rf"^(\s*)(\[\[?)?\s*([\w.]*\.)?{re.escape(key)}\b")
        for lineno, line in enumerate(text.splitlines(), start=1):
            match = pattern.match(line)
            if match:
                return lineno, len(match.group(1)) + 1
    return None, None


def parse_scenario(text: str, overrides: Iterable[str] = (), source: str = "<scenario>") -> ScenarioConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _TOML_POSITION.search(str(e))
        line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
        message = _TOML_POSITION.sub("", str(e)).strip()
        raise ScenarioParseError(f"{source}: {message}", line, column) from None

    data = apply_overrides(data, overrides)
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "scenario"
        line, column = _locate(text, first["loc"])
        raise ScenarioParseError(f"{source}: {where}: {first['msg']}", line, column) from None


def load_scenario(path_or_name: Union[str, Path], overrides: Iterable[str] = ()) -> ScenarioConfig:
    """Loads a scenario file, or a bundled scenario by name."""
    path = Path(path_or_name)
    if not path.is_file():
        bundled = bundled_scenario_path(str(path_or_name))
        if bundled is None:
            raise FileNotFoundError(f"scenario not found: {path_or_name}")
        path = bundled
    text = path.read_text(encoding="utf-8")
    logger.info("Loading scenario %s", path)
    return parse_scenario(text, overrides, source=str(path))
