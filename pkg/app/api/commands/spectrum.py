"""
Comando spectrum: frequenza di risonanza f_r del master libero.

Artefatto: spectrum_x3.csv "freq,power".
"""
import argparse

from app.api.commands.run_context import RunContext
from app.api.dependencies import load_config
from app.schemas.reports import RunManifest
from app.services.comms_service import resonance_frequency


def cmd_spectrum(args: argparse.Namespace) -> RunManifest:
    """
    Integra il master per [comms] n_steps passi, scarta il transitorio di
    [sim] e stampa il picco dominante dello spettro di x3.
    """
    config, _ = load_config(args.config)
    context = RunContext("spectrum", config, args.out)

    f_r, spectrum = resonance_frequency(config.sim, n_steps=config.comms.n_steps)
    context.repository.write_spectrum(spectrum.freq, spectrum.power, name="spectrum_x3.csv")
    manifest = context.finish()

    print(f"resonance_frequency={f_r!r} bin_width={spectrum.bin_width!r}")
    print(f"run_dir={context.run_dir}")
    return manifest
