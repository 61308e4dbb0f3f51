"""
Comando simulate: run accoppiato master/slave.

Artefatti:
- trajectory.csv   "t,x1,x2,x3,y1,y2,y3,E1,E2,E3"
- sync_metrics.csv "s1,s2,s3,pair,m,dm,s_q,r0,conv_time" (un solo sigma)
"""
import argparse

from app.api.commands.run_context import RunContext
from app.api.dependencies import load_config
from app.repositories.artifact_repository import SWEEP_HEADER
from app.schemas.reports import RunManifest, SweepPoint, SweepResult
from app.services.integrator import integrate_coupled
from app.services.sync_service import compute_sync_metrics


def cmd_simulate(args: argparse.Namespace) -> RunManifest:
    """
    Integra il sistema accoppiato e scrive traiettoria e metriche.

    Process:
    1. Carica la configurazione (default se --config manca)
    2. Integra master e slave
    3. Calcola le metriche delle tre coppie dopo il transitorio
    4. Stampa i tempi di convergenza di E1, E2, E3

    Raises:
        ConfigError / ValidationError: Configurazione non valida
        IntegrationDivergedError: Run divergente
        ArtifactIOError: Scrittura fallita
    """
    config, _ = load_config(args.config)
    context = RunContext("simulate", config, args.out)

    traj = integrate_coupled(config.sim)
    metrics = compute_sync_metrics(traj, config.sim.transient_steps)

    context.repository.write_trajectory(traj)
    sweep = SweepResult(points=[SweepPoint(sigma=config.sim.sigma, metrics=metrics)])
    context.repository.write_csv("sync_metrics.csv", SWEEP_HEADER, sweep.rows())
    manifest = context.finish()

    for index, metric in enumerate(metrics, start=1):
        conv = "never" if metric.conv_time is None else repr(metric.conv_time)
        print(f"E{index} convergence_time={conv} m={metric.m!r} r0={metric.r0!r}")
    print(f"run_dir={context.run_dir}")
    return manifest
