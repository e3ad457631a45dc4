"""Command line front end: ``dof-atlas region|alloc|verify|simulate|sweep-residual``.

Machine artifacts (JSON or CSV) go to ``--out``; without it they are written
to stdout. A short rich table summarizes the result on stdout whenever an
artifact file is written.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 64 unknown
flags or commands.
"""
import logging # Import logging to report engine errors on stderr
import sys # Import sys to hand the exit code to the shell

import click # Import click to parse commands and flags
import pandas as pd # Import pandas to stack region tables
from rich.console import Console # Import Console to print summaries
from rich.table import Table # Import Table for the summary layout

from application.config import Config # Import defaults read from the environment
from application.dof.allocation import allocate # Import the recommended allocation
from application.dof.channels import residual_slope, snapshot # Import the residual sweep and the matrix snapshot
from application.dof.errors import DofAtlasError # Import the engine error base class
from application.dof.oracle import require_passed, run_verification # Import the grid oracle
from application.dof.ratesim import predicted_slopes # Import the DoF the fitted slopes should approach
from application.dof.regimes import classify # Import the regime classifier
from application.dof.regions import no_csit_region, perfect_csit_region, reorient # Import reference regions and the user-order flip
from application.logging_config import configure_logging # Import the rich logging setup
from application.utils.export import (allocation_frame, checks_frame, dump_matrices, region_frame,
                                      to_csv, to_json, write_text) # Import artifact writers
from application.utils.numeric import parse_snr_range # Import the lo:hi:step parser
from application.utils.scenario import build_scenario, choose_policy, parse_alpha, simulate, user_verdict # Import input handling shared with the API

logger = logging.getLogger(__name__)

# Process exit codes
EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFICATION = 3
EXIT_USAGE = 64


# Flags shared by every command that takes a configuration
def scenario_options(fn):
    fn = click.option("--alpha", "alpha", default="0,0", show_default=True,
                      help="CSIT qualities alpha1,alpha2 in [0, 1].")(fn)
    fn = click.option("--antennas", required=True, help="M,N1,N2 for bc or M1,M2,N1,N2 for ic.")(fn)
    fn = click.option("--channel", type=click.Choice(["bc", "ic"]), required=True)(fn)
    return fn


# Output format and destination flags
def output_options(fn):
    fn = click.option("--out", "out", type=click.Path(dir_okay=False), default=None,
                      help="Write the artifact here instead of stdout.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                      show_default=True)(fn)
    return fn


# SNR range, trial count and seed flags of the Monte Carlo commands
def sweep_options(fn):
    fn = click.option("--seed", type=click.IntRange(min=0), default=Config.MC_SEED, show_default=True)(fn)
    fn = click.option("--trials", type=click.IntRange(min=1), default=Config.MC_TRIALS, show_default=True)(fn)
    fn = click.option("--snr-db", "snr_db", default=Config.SNR_DB, show_default=True,
                      help="SNR range lo:hi:step in dB.")(fn)
    return fn


# Write the artifact to --out or stdout; returns True when a file was written
def _emit(payload, frame, fmt, out):
    text = to_json(payload) if fmt == "json" else to_csv(frame)
    if out is None:
        click.echo(text, nl=False)
        return False
    write_text(text, out)
    return True


# Print a two-column rich table
def _summary(title, rows):
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name, value in rows:
        table.add_row(name, f"{value:.6g}" if isinstance(value, float) else str(value))
    Console().print(table)


def _schemas():
    # Response schemas live with the API blueprints
    from application.blueprints.alloc.schemas import allocation_schema, power_policy_schema
    from application.blueprints.region.schemas import config_schema, region_schema, verdict_schema
    from application.blueprints.simulate.schemas import slope_estimate_schema
    from application.blueprints.verify.schemas import verification_report_schema
    return {
        "allocation": allocation_schema, "policy": power_policy_schema, "config": config_schema,
        "region": region_schema, "verdict": verdict_schema, "estimate": slope_estimate_schema,
        "report": verification_report_schema,
    }


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help="Logging level (default from DOF_ATLAS_LOG_LEVEL).")
def cli(log_level):
    """DoF regions, power allocation and Monte Carlo checks for two-user MIMO BC/IC with imperfect CSIT."""
    configure_logging(log_level or Config.LOG_LEVEL)


@cli.command()
@scenario_options
@output_options
@click.option("--reference/--no-reference", default=False, help="Also emit the no-CSIT and perfect-CSIT regions.")
def region(channel, antennas, alpha, fmt, out, reference):
    """Achievable and outer DoF regions with the optimality verdict."""
    scenario = build_scenario(channel, antennas, alpha)
    verdict = user_verdict(scenario)
    regime = classify(scenario.config, scenario.alpha)
    schemas = _schemas()

    # Reference regions are computed in engine order and reported in the order typed
    regions = {"achievable": verdict.achievable, "outer": verdict.outer}
    if reference:
        extra = {"no_csit": no_csit_region(scenario.config)}
        if scenario.config.is_bc:
            extra["perfect_csit"] = perfect_csit_region(scenario.config)
        regions.update({name: reorient(r) if scenario.swapped else r for name, r in extra.items()})

    # Alpha is echoed as typed
    payload = {
        "config": schemas["config"].dump(scenario.config),
        "alpha": list(parse_alpha(alpha).as_tuple()),
        "regime": regime.tag.value,
        "optimal": verdict.optimal.value,
        "rationale": verdict.rationale,
        "regions": {name: schemas["region"].dump(r) for name, r in regions.items()},
    }
    # One CSV table with a region column
    frame = pd.concat([region_frame(r).assign(region=name) for name, r in regions.items()],
                      ignore_index=True)[["region", "vertex", "d1", "d2", "labels"]]
    if _emit(payload, frame, fmt, out):
        _summary(f"{channel.upper()} {scenario.raw.label()} regions", [
            ("regime", regime.tag.value),
            ("optimal", verdict.optimal.value),
            ("achievable vertices", len(verdict.achievable.vertices)),
            ("outer vertices", len(verdict.outer.vertices)),
        ])
    return EXIT_OK


@cli.command()
@scenario_options
@output_options
@click.option("--samples", type=click.IntRange(min=2, max=201), default=Config.LAMBDA_SAMPLES, show_default=True,
              help="Lambda samples on the Case II boundary.")
def alloc(channel, antennas, alpha, fmt, out, samples):
    """Recommended power exponents and the DoF tuple they achieve."""
    scenario = build_scenario(channel, antennas, alpha)
    allocation = allocate(scenario.config, scenario.alpha, samples)
    payload = _schemas()["allocation"].dump(allocation)
    if _emit(payload, allocation_frame(allocation), fmt, out):
        rows = [("regime", allocation.regime.value)]
        # Case II allocations have a boundary instead of a single tuple
        if allocation.dof is not None:
            rows += [("scheme", allocation.policy.scheme), ("rho", allocation.policy.rho),
                     ("sum DoF", allocation.dof.sum_dof)]
        else:
            rows += [("boundary points", len(allocation.boundary)),
                     ("d2 at lambda=0", allocation.boundary[0].d2)]
        _summary(f"allocation {scenario.raw.label()}", rows)
    return EXIT_OK


@cli.command()
@scenario_options
@output_options
@click.option("--grid-step", type=float, default=Config.GRID_STEP, show_default=True)
@click.option("--tolerance", type=float, default=Config.ORACLE_TOLERANCE, show_default=True)
@click.option("--samples", type=click.IntRange(min=2, max=201), default=Config.LAMBDA_SAMPLES, show_default=True)
def verify(channel, antennas, alpha, fmt, out, grid_step, tolerance, samples):
    """Compare every applicable closed form with its brute-force grid maximum."""
    scenario = build_scenario(channel, antennas, alpha)
    report = run_verification(scenario.config, scenario.alpha, step=grid_step, tolerance=tolerance,
                              samples=samples)
    payload = _schemas()["report"].dump(report)
    if _emit(payload, checks_frame(report), fmt, out):
        _summary(f"verification {scenario.raw.label()}", [
            ("checks", len(report.checks)),
            ("max deviation", report.max_deviation),
            ("tolerance", report.tolerance),
            ("branches", ",".join(sorted(report.branch_coverage)) or "-"),
        ])
    # Exit 3 on failure, after the report is written
    require_passed(report)
    return EXIT_OK


@cli.command("simulate")
@scenario_options
@output_options
@sweep_options
@click.option("--rho", type=click.FloatRange(0.0, 1.0), default=None, help="Space-time fraction of the (alpha2, 1) slot.")
@click.option("--a1", "A1", type=click.FloatRange(0.0, 1.0), default=None)
@click.option("--a2", "A2", type=click.FloatRange(0.0, 1.0), default=None)
@click.option("--a2p", "A2p", type=click.FloatRange(0.0, 1.0), default=None)
@click.option("--lam", type=click.FloatRange(min=0.0), default=0.0, show_default=True,
              help="Boundary point whose policy Case II configurations simulate.")
@click.option("--dump-matrices", "dump_path", type=click.Path(dir_okay=False), default=None,
              help="Write channels, estimates and precoders of trial 0 at the top SNR.")
def simulate_cmd(channel, antennas, alpha, fmt, out, snr_db, trials, seed, rho, A1, A2, A2p, lam, dump_path):
    """Monte Carlo message rates over an SNR sweep and their fitted DoF slopes."""
    scenario = build_scenario(channel, antennas, alpha)
    snr_points = parse_snr_range(snr_db)
    # Explicit exponents, a space-time fraction or the recommended policy
    policy = choose_policy(scenario, A1=A1, A2=A2, A2p=A2p, rho=rho, lam=lam)
    estimate = simulate(scenario, policy, snr_points, trials, seed, Config.THREADS)

    # Matrices of trial 0 at the top SNR point
    if dump_path is not None:
        top = max(range(len(snr_points)), key=lambda i: snr_points[i])
        P = 10.0 ** (snr_points[top] / 10.0)
        dump_matrices(snapshot(scenario.config, scenario.alpha, policy, seed, P, index=top), dump_path)

    schemas = _schemas()
    payload = {
        "policy": schemas["policy"].dump(policy),
        "predicted": predicted_slopes(scenario.config, scenario.alpha, policy),
        "estimate": schemas["estimate"].dump(estimate),
    }
    if _emit(payload, estimate.rates, fmt, out):
        _summary(f"slopes {scenario.raw.label()} ({trials} trials, seed {seed})",
                 [(s.message, s.slope) for s in estimate.slopes])
    return EXIT_OK


@cli.command("sweep-residual")
@click.option("--alpha", type=click.FloatRange(0.0, 1.0), required=True, help="CSIT quality of the single link.")
@output_options
@sweep_options
def sweep_residual(alpha, fmt, out, snr_db, trials, seed):
    """Slope of zero-forcing leakage power against log2 P; the expected value is -alpha."""
    estimate = residual_slope(alpha, parse_snr_range(snr_db), trials, seed, Config.THREADS)
    payload = {"alpha": alpha, "expected_slope": -alpha,
               "estimate": _schemas()["estimate"].dump(estimate)}
    if _emit(payload, estimate.rates, fmt, out):
        _summary("residual interference", [("alpha", alpha), ("slope", estimate.slope("residual"))])
    return EXIT_OK


def run(argv=None):
    """Run the command line on ``argv`` and return the process exit code."""
    # With standalone_mode=False click raises instead of exiting
    try:
        code = cli.main(args=argv, prog_name="dof-atlas", standalone_mode=False)
    except click.BadParameter as e:
        # Bad values: exit 2
        e.show()
        return EXIT_INVALID
    except click.UsageError as e:
        # Unknown flags or commands: exit 64
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_INVALID
    except DofAtlasError as e:
        # Engine errors carry their own exit code
        logger.error("%s: %s", e.title, e)
        return e.exit_code
    return EXIT_OK if code is None else int(code)


def main():
    sys.exit(run())
