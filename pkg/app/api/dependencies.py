"""
Dependency per i comandi della CLI: caricamento della configurazione.

Legge il file INI dell'esperimento, lo valida con gli schemi Pydantic e
produce l'echo canonico usato per l'hash della directory di run.

Formato:
    [sim]
    h = 0.05
    n_steps = 6000
    transient_steps = 2000
    k = 0.5
    x0 = 0.999, 0.899, 0.799
    y0 = 1.0, 1.0, 1.0
    disabled_terms =

    [sigma]
    s1 = 1.0
    s2 = 1.0
    s3 = 1.0

    [comms]
    amplitude = 0.01
    ...

    [stability]
    bounds_steps = 40000
    M = 21.0        (opzionali, tutti e tre insieme)
"""
import configparser
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import ValidationError as PydanticValidationError

from app.core.exceptions import ConfigError, ValidationError
from app.schemas.comms import CommsOptions
from app.schemas.experiment import ExperimentConfig
from app.schemas.simulation import SimConfig, StabilityOptions
from app.utils.logger import get_logger

logger = get_logger(__name__)

SECTIONS: Dict[str, Tuple[str, ...]] = {
    "sim": ("h", "n_steps", "transient_steps", "k", "x0", "y0", "disabled_terms"),
    "sigma": ("s1", "s2", "s3"),
    "comms": ("amplitude", "offset", "injection", "n_steps", "transient_steps", "band_half_bins"),
    "stability": ("bounds_steps", "M", "N", "P"),
}

_TRIPLE_KEYS = ("x0", "y0")


# --- UTILITY ---

def _key_line(text: str, section: str, key: str) -> Optional[int]:
    """Numero di riga (1-based) di key dentro [section], se presente."""
    current = None
    header = re.compile(r"^\s*\[([^\]]+)\]\s*$")
    entry = re.compile(rf"^\s*{re.escape(key)}\s*[=:]", re.IGNORECASE)
    for number, line in enumerate(text.splitlines(), start=1):
        match = header.match(line)
        if match:
            current = match.group(1).strip()
        elif current == section and entry.match(line):
            return number
    return None


def _split(value: str) -> list:
    return [part.strip() for part in value.split(",") if part.strip()]


def _raise_validation(exc: PydanticValidationError, text: str, section: str) -> None:
    """
    Converte il primo errore Pydantic in ValidationError con contesto INI.

    Il loc ("sigma", i) di SimConfig viene riportato alla chiave s{i+1}
    della sezione [sigma].
    """
    error = exc.errors()[0]
    loc = error.get("loc", ())
    key = str(loc[0]) if loc else None
    if section == "sim" and key == "sigma":
        section = "sigma"
        key = f"s{int(loc[1]) + 1}" if len(loc) > 1 else "s1"
    line = _key_line(text, section, key) if key else None

    raise ValidationError(
        message=f"Valore non valido in [{section}]" + (f" {key}" if key else "") + f": {error.get('msg')}",
        details={"section": section, "key": key, "line": line, "reason": error.get("msg")}
    ) from exc


# --- PARSING ---

def parse_config_text(text: str) -> ExperimentConfig:
    """
    Valida il testo INI e restituisce la configurazione dell'esperimento.

    Args:
        text: Contenuto del file INI (sezioni e chiavi assenti -> default)

    Returns:
        ExperimentConfig: Configurazione risolta

    Raises:
        ConfigError: Sintassi INI errata o sezione sconosciuta
        ValidationError: Chiave sconosciuta o valore non valido (con sezione,
                         chiave e riga nei details)
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(
            message="File di configurazione malformato",
            details={"reason": str(exc), "line": getattr(exc, "lineno", None)}
        ) from exc

    values: Dict[str, Dict[str, str]] = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(
                message=f"Sezione sconosciuta [{section}]",
                details={"section": section, "allowed": list(SECTIONS)}
            )
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ValidationError(
                    message=f"Chiave sconosciuta '{key}' in [{section}]",
                    details={"section": section, "key": key, "line": _key_line(text, section, key)}
                )
            values[section][key] = raw.strip()

    sim_values: Dict[str, Any] = {}
    for key, raw in values.get("sim", {}).items():
        if key in _TRIPLE_KEYS:
            sim_values[key] = _split(raw)
        elif key == "disabled_terms":
            sim_values[key] = tuple(_split(raw))
        elif raw:
            sim_values[key] = raw
    sigma_section = values.get("sigma", {})
    if sigma_section:
        defaults = SimConfig.model_fields["sigma"].default
        sim_values["sigma"] = [
            sigma_section.get(f"s{index + 1}", defaults[index]) for index in range(3)
        ]

    try:
        sim = SimConfig(**sim_values)
    except PydanticValidationError as exc:
        _raise_validation(exc, text, "sim")

    sections: Dict[str, Any] = {}
    for name, schema in (("comms", CommsOptions), ("stability", StabilityOptions)):
        options = {key: raw for key, raw in values.get(name, {}).items() if raw}
        try:
            sections[name] = schema(**options)
        except PydanticValidationError as exc:
            _raise_validation(exc, text, name)

    return ExperimentConfig(sim=sim, **sections)


def load_config(path: Optional[Union[str, Path]]) -> Tuple[ExperimentConfig, str]:
    """
    Carica la configurazione da file (o i default se path è None).

    Returns:
        (config, canonical): configurazione e suo echo canonico

    Raises:
        ConfigError: File illeggibile o malformato
        ValidationError: Valori non validi
    """
    if path is None:
        config = ExperimentConfig()
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(
                message="Impossibile leggere il file di configurazione",
                details={"path": str(path), "reason": str(exc)}
            ) from exc
        config = parse_config_text(text)
        logger.debug("Configurazione caricata", extra={"path": str(path)})
    return config, render_config(config)


# --- ECHO CANONICO ---

def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: ExperimentConfig) -> str:
    """
    Echo INI canonico della configurazione.

    Parsare l'echo restituisce una configurazione uguale; i float sono
    scritti in repr per il round-trip esatto.
    """
    sim = config.sim
    lines = [
        "[sim]",
        f"h = {_fmt(sim.h)}",
        f"n_steps = {sim.n_steps}",
        f"transient_steps = {sim.transient_steps}",
        f"k = {_fmt(sim.k)}",
        "x0 = " + ", ".join(_fmt(v) for v in sim.x0),
        "y0 = " + ", ".join(_fmt(v) for v in sim.y0),
        "disabled_terms = " + ", ".join(sim.disabled_terms),
        "",
        "[sigma]",
    ]
    lines.extend(f"s{index + 1} = {_fmt(value)}" for index, value in enumerate(sim.sigma))

    comms = config.comms
    lines.extend([
        "",
        "[comms]",
        f"amplitude = {_fmt(comms.amplitude)}",
        f"offset = {_fmt(comms.offset)}",
        f"injection = {comms.injection}",
        f"n_steps = {comms.n_steps}",
        f"transient_steps = {comms.transient_steps}",
        f"band_half_bins = {_fmt(comms.band_half_bins)}",
        "",
        "[stability]",
        f"bounds_steps = {config.stability.bounds_steps}",
    ])
    if config.stability.has_override:
        lines.extend(
            f"{name} = {_fmt(getattr(config.stability, name))}" for name in ("M", "N", "P")
        )
    return "\n".join(lines) + "\n"
