"""
Comando stability: report JSON delle condizioni di definitezza positiva.
"""
import argparse

from pydantic import ValidationError as PydanticValidationError

from app.api.commands.run_context import RunContext
from app.api.dependencies import load_config
from app.core.exceptions import ConfigError
from app.schemas.reports import RunManifest
from app.schemas.simulation import StabilityOptions
from app.services.stability_service import StabilityService


def parse_bounds(text: str) -> StabilityOptions:
    """
    Converte "M,N,P" nelle opzioni con override dei bound.

    Raises:
        ConfigError: Formato errato o valori negativi
    """
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(message="--bounds richiede M,N,P", details={"bounds": text})
    try:
        return StabilityOptions(M=parts[0], N=parts[1], P=parts[2])
    except PydanticValidationError as exc:
        raise ConfigError(
            message="Bound non validi",
            details={"bounds": text, "reason": exc.errors()[0].get("msg")}
        ) from exc


def cmd_stability(args: argparse.Namespace) -> RunManifest:
    """
    Calcola e scrive stability_report.json.

    Con --bounds M,N,P la simulazione del master viene saltata.
    """
    config, _ = load_config(args.config)
    if args.bounds:
        override = parse_bounds(args.bounds)
        config = config.model_copy(update={
            "stability": override.model_copy(update={"bounds_steps": config.stability.bounds_steps})
        })
    context = RunContext("stability", config, args.out)

    report = StabilityService().stability_report(config)
    context.repository.write_json("stability_report.json", report.model_dump(mode="json"))
    manifest = context.finish()

    print(f"bounds M={report.bounds.M!r} N={report.bounds.N!r} P={report.bounds.P!r} ({report.bounds_source})")
    for label, conditions in (("symbolic", report.symbolic), ("k_poly", report.k_poly)):
        summary = " ".join(
            f"({roman})={'ok' if item.holds else 'fail'}:{item.margin!r}"
            for roman, item in zip(("i", "ii", "iii"), conditions)
        )
        print(f"{label} {summary}")
    print(f"pd_worstcase={'ok' if report.pd_worstcase.holds else 'fail'} min_minor={report.pd_worstcase.min_minor!r}")
    if report.saddle_fraction is not None:
        print(f"saddle_fraction={report.saddle_fraction!r}")
    print(f"run_dir={context.run_dir}")
    return manifest
