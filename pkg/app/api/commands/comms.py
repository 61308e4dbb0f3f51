"""
Comando comms: pipeline di codifica/decodifica per un caso e un regime.

Artefatti:
- residual.csv  "t,residual"
- spectrum.csv  "freq,power"
- peaks.csv     "message_index,target,freq,distance_bins,within_tolerance"
- fits.json     lista di {"message_index", "freq", "amplitude", "phase", "offset", "adj_r2"}
"""
import argparse

from app.api.commands.run_context import RunContext
from app.api.dependencies import load_config
from app.schemas.reports import RunManifest
from app.services.comms_service import CommsService, residual_lines

PEAKS_HEADER = ("message_index", "target", "freq", "distance_bins", "within_tolerance")


def cmd_comms(args: argparse.Namespace) -> RunManifest:
    """
    Esegue run_case e scrive residuo, spettro, picchi e fit.

    Raises:
        InvalidInputError: Caso o regime sconosciuti
        IntegrationDivergedError: Run divergente
    """
    config, _ = load_config(args.config)
    context = RunContext(
        "comms", config, args.out,
        {"case": str(args.case), "regime": args.regime, "preset": args.preset},
    )

    comms_config, decoded = CommsService().run_case(
        args.case, args.regime, config.sim, config.comms, preset=args.preset,
    )

    repository = context.repository
    repository.write_csv("residual.csv", ("t", "residual"), zip(decoded.t, decoded.residual))
    repository.write_spectrum(decoded.spectrum.freq, decoded.spectrum.power)
    repository.write_csv(
        "peaks.csv", PEAKS_HEADER,
        (
            (index, match.target, match.freq, match.distance_bins, match.within_tolerance)
            for index, match in enumerate(decoded.peaks, start=1)
        ),
    )
    repository.write_json("fits.json", [fit.model_dump() for fit in decoded.fits])
    manifest = context.finish()

    print(f"case={args.case} regime={args.regime} sigma={comms_config.sim.sigma}")
    for fit, match in zip(decoded.fits, decoded.peaks):
        print(
            f"m{fit.message_index} target={match.target!r} peak={match.freq!r} "
            f"within={match.within_tolerance} fit_freq={fit.freq!r} "
            f"amplitude={fit.amplitude!r} adj_r2={fit.adj_r2!r}"
        )
    lines = residual_lines(decoded.residual, decoded.spectrum.sample_rate)
    print(f"lines={lines.tolist()!r}")
    print(f"run_dir={context.run_dir}")
    return manifest
