"""
Entry point della CLI - Presentation Layer.

Sottocomandi: simulate | sweep | stability | comms | spectrum.

Ogni sottocomando registra il proprio handler; main() lo esegue dentro
handle_errors, che traduce le eccezioni in exit code. Gli errori di
utilizzo (argomenti mancanti, caso fuori range) escono con codice 2
tramite argparse.
"""
import argparse
from typing import List, Optional

from app.api.commands.comms import cmd_comms
from app.api.commands.simulate import cmd_simulate
from app.api.commands.spectrum import cmd_spectrum
from app.api.commands.stability import cmd_stability
from app.api.commands.sweep import cmd_sweep
from app.api.middleware.error_handler import handle_errors
from app.core.config import APP_NAME, APP_VERSION, DEFAULT_OUTPUT_DIR, DEFAULT_WORKERS
from app.utils.logger import configure_root_logger


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("deve essere >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    """
    Costruisce il parser con le opzioni comuni e i cinque sottocomandi.

    --workers esiste solo per sweep, l'unico comando con un pool di processi.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="File INI dell'esperimento (default: valori di default)")
    common.add_argument("--out", default=DEFAULT_OUTPUT_DIR, help="Directory radice dei run")

    parser = argparse.ArgumentParser(
        prog="gls-sync",
        description=f"{APP_NAME}: sincronizzazione e anti-sincronizzazione di sistemi di Lorenz generalizzati",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", parents=[common], help="Run accoppiato master/slave")
    simulate.set_defaults(handler=cmd_simulate)

    sweep = subparsers.add_parser("sweep", parents=[common], help="Sweep delle metriche su una griglia di sigma")
    sweep.add_argument("--preset", choices=("literal", "figure"), default="figure")
    sweep.add_argument("--sigma", default=None, help="start:stop:step oppure tre componenti separate da virgola")
    sweep.add_argument("--workers", type=_positive_int, default=DEFAULT_WORKERS, help="Worker del pool di processi")
    sweep.set_defaults(handler=cmd_sweep)

    stability = subparsers.add_parser("stability", parents=[common], help="Report delle condizioni di stabilità")
    stability.add_argument("--bounds", default=None, help="Override M,N,P (salta la simulazione)")
    stability.set_defaults(handler=cmd_stability)

    comms = subparsers.add_parser("comms", parents=[common], help="Pipeline di mascheramento caotico")
    comms.add_argument("--case", type=int, choices=(1, 2, 3, 4), required=True)
    comms.add_argument("--regime", choices=("positive", "zero", "negative"), default="positive")
    comms.add_argument("--preset", choices=("literal", "figure"), default="figure")
    comms.set_defaults(handler=cmd_comms)

    spectrum = subparsers.add_parser("spectrum", parents=[common], help="Frequenza di risonanza del master")
    spectrum.set_defaults(handler=cmd_spectrum)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Esegue la CLI e restituisce l'exit code.

    Example:
        >>> main(["simulate", "--out", "runs"])
        0
    """
    configure_root_logger()
    args = build_parser().parse_args(argv)
    return handle_errors(args.handler)(args)
