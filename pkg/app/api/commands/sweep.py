"""
Comando sweep: metriche di sincronizzazione su una griglia di sigma.

Artefatto: sweep.csv "s1,s2,s3,pair,m,dm,s_q,r0,conv_time", una riga per
(sigma, coppia), in ordine di griglia.
"""
import argparse

from app.api.commands.run_context import RunContext
from app.api.dependencies import load_config
from app.repositories.artifact_repository import SWEEP_HEADER
from app.schemas.reports import RunManifest
from app.services.sync_service import SyncService, sigma_grid


def cmd_sweep(args: argparse.Namespace) -> RunManifest:
    """
    Esegue lo sweep richiesto da --preset/--sigma.

    Raises:
        ConfigError: Griglia vuota o malformata
        IntegrationDivergedError: Un punto diverge
    """
    config, _ = load_config(args.config)
    grid = sigma_grid(args.preset, args.sigma)
    context = RunContext(
        "sweep", config, args.out,
        {"preset": args.preset, "sigma": args.sigma},
    )

    result = SyncService(workers=args.workers).sweep_sigma(config.sim, grid)
    rows = result.rows()
    context.repository.write_csv("sweep.csv", SWEEP_HEADER, rows)
    manifest = context.finish()

    print(f"sigma_points={len(result.points)} rows={len(rows)}")
    print(f"run_dir={context.run_dir}")
    return manifest
