import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from app.exceptions import UnitRootException
from app.models.cli.run_manifest_model import RunManifest
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.experiment_kind import ExperimentKind
from app.models.enum.method import Method
from app.models.enum.statistic import Statistic
from app.models.enum.step_two_form import StepTwoForm
from app.models.montecarlo.experiment_model import (
    CriticalValueTable,
    ExperimentConfig,
    ExperimentReport
)
from app.models.simulation.dgp_config_model import DgpConfig, SeedSpec
from app.models.unitroot.unit_root_result_model import UnitRootResult
from app.services.csv_service import STDOUT, csv_service, format_validation_error
from app.services.montecarlo_service import montecarlo_service
from app.services.simulation_service import simulation_service
from app.services.unitroot_service import unitroot_service
from config import APP_NAME, APP_VERSION, DEFAULT_BASE_SEED, URKIT_THREADS
from util import Utils


# Get logger
logger = logging.getLogger(__name__)

DECISION_LEVELS = (0.01, 0.05, 0.1)
AUTO = "auto"


class UrkitArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for degenerate statistics."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def lag_order(text: str):
    if text == AUTO:
        return AUTO
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be a nonnegative integer or '{AUTO}', got '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError(f"k must be nonnegative, got {value}")
    return value


def float_list(text: str) -> List[float]:
    try:
        return Utils.parse_float_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def threads(args) -> int:
    return args.threads if args.threads is not None else URKIT_THREADS


def fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return Utils.format_number(value)
    return str(value)


def print_frame(frame):
    print(frame.to_string(index=False, float_format=Utils.format_number))


# -- test ------------------------------------------------------------------

def report_result(result: UnitRootResult, cv: Optional[CriticalValueTable]):
    star = "*" if result.method == Method.ZERO_PADDED else ""
    rows = [
        ("method", result.method.value),
        ("form", result.form.value if result.form else None),
        ("deterministics", result.spec),
        ("rho_hat", result.rho_hat),
        ("se(rho_hat)", result.se_rho),
        (f"t_DF{star}", result.t_df),
        ("F", result.f_stat),
        ("chi", result.chi),
        (f"t_LM{star}", result.t_lm),
        ("k", result.k),
        ("T_eff", result.t_effective),
        ("m", result.m),
    ]
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        print(f"{label:<{width}}  {fmt(value)}")

    if result.gamma_structural is not None:
        print("structural gamma:")
        for label, value in zip(result.det_labels, result.gamma_structural):
            print(f"  {label:<{width - 2}}  {fmt(float(value))}")
    print(f"design ({result.design.m} columns): {', '.join(result.design.column_labels)}")

    if cv is None:
        logger.info("No critical value table supplied; decisions and p-values are not reported")
        return
    print("decisions (left tail):")
    for statistic, value in ((Statistic.T_DF, result.t_df), (Statistic.T_LM, result.t_lm)):
        for level in DECISION_LEVELS:
            critical = cv.lookup(result.method, statistic, level)
            verdict = "reject" if value < critical else "accept"
            print(f"  {statistic.value} at {level:.0%}: cv {fmt(critical)} -> {verdict}")


def check_table_matches(path: str, result: UnitRootResult):
    manifest = csv_service.read_manifest(path)
    if manifest is None:
        return
    config = manifest.config
    if config.get("spec") not in (None, result.spec) or config.get("T") not in (None, result.n_obs):
        logger.warning(
            f"Critical values in {path} were simulated for spec={config.get('spec')}, T={config.get('T')}; "
            f"the test uses spec={result.spec}, T={result.n_obs}"
        )


def cmd_test(args) -> int:
    series = csv_service.read_series(args.data)
    spec = DetSpec.parse(args.det)
    k = Utils.schwert_lags(series.values.size) if args.k == AUTO else args.k
    method = Method(args.method)
    logger.info(f"Testing {series.values.size} observations from {args.data}: {method.value}, spec={spec}, k={k}")

    result = unitroot_service.run(method, series.values, spec, k, StepTwoForm(args.form))
    cv = None
    if args.cv:
        cv = csv_service.read_table(args.cv)
        check_table_matches(args.cv, result)
    report_result(result, cv)

    if args.out:
        manifest = RunManifest(command="test", config=vars_config(args, k=k), seed=None)
        csv_service.write_result(args.out, result, manifest)
    return 0


def vars_config(args, **overrides) -> Dict:
    config = {key: value for key, value in vars(args).items() if key != "handler"}
    config.update(overrides)
    return config


# -- simulate --------------------------------------------------------------

SIMULATE_FIELDS = ("alpha", "sigma", "gamma", "det", "error_ar", "z0", "burn_in", "innovation", "df", "initial")


def resolve_dgp(args) -> DgpConfig:
    values = {}
    if args.config:
        values = csv_service.load_dgp_config(args.config).model_dump(mode="json")
    for field in SIMULATE_FIELDS:
        value = getattr(args, field)
        if value is not None:
            values[field] = value
    return DgpConfig.model_validate(values)


def cmd_simulate(args) -> int:
    dgp = resolve_dgp(args)
    seed = args.seed if args.seed is not None else DEFAULT_BASE_SEED
    y = simulation_service.simulate(dgp, args.T, SeedSpec(base_seed=seed, replication_index=0))
    manifest = RunManifest(
        command="simulate",
        config={"dgp": dgp.model_dump(mode="json"), "T": args.T},
        seed=seed
    )
    csv_service.write_series(args.out, y, manifest)
    return 0


# -- cv / experiment -------------------------------------------------------

def resolve_experiment(args) -> ExperimentConfig:
    config = csv_service.load_experiment_config(args.config)
    if args.seed is not None and args.seed != config.base_seed:
        config = ExperimentConfig.model_validate({**config.summary(), "base_seed": args.seed})
    return config


def experiment_manifest(command: str, config: ExperimentConfig) -> RunManifest:
    return RunManifest(command=command, config=config.summary(), seed=config.base_seed)


def cmd_cv(args) -> int:
    config = resolve_experiment(args)
    table = montecarlo_service.tabulate_critical_values(config, threads(args))
    csv_service.write_table(args.out, table, experiment_manifest("cv", config))
    if args.out != STDOUT:
        print_frame(csv_service.table_frame(table))
    return 0


def power_curve_path(out: str) -> str:
    path = Path(out)
    return str(path.with_name(f"{path.stem}_power{path.suffix or '.csv'}"))


def cmd_experiment(args) -> int:
    config = resolve_experiment(args)
    manifest = experiment_manifest("experiment", config)
    n_jobs = threads(args)

    if args.cv and config.kind == ExperimentKind.SIZE_POWER:
        result = montecarlo_service.size_power(config, csv_service.read_table(args.cv), n_jobs)
    else:
        result = montecarlo_service.run_experiment(config, n_jobs)

    if isinstance(result, CriticalValueTable):
        csv_service.write_table(args.out, result, manifest)
        frame = csv_service.table_frame(result)
    else:
        csv_service.write_report(args.out, result, manifest)
        frame = csv_service.report_frame(result)
        write_power_curves(args.out, result, manifest)

    if args.out != STDOUT:
        print_frame(frame)
    return 0


def write_power_curves(out: str, report: ExperimentReport, manifest: RunManifest):
    if not report.rejection_rates:
        return
    if out == STDOUT:
        logger.info("Power-curve data is only written alongside a report file (--out)")
        return
    csv_service.write_power_curves(power_curve_path(out), report, manifest)


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = UrkitArgumentParser(
        prog=APP_NAME,
        description="Dickey-Fuller unit root tests, simulation and Monte Carlo experiments"
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    test = commands.add_parser("test", help="Test a series for a unit root")
    test.add_argument("--data", required=True, help="Series CSV (one column, or time label and value)")
    test.add_argument("--method", choices=[m.value for m in Method], default=Method.ZERO_PADDED.value)
    test.add_argument("--det", default="c", help="Deterministic spec: none, c, ct, poly:r, break:TB[:trend], custom:file.csv")
    test.add_argument("--k", type=lag_order, default=AUTO, help="Augmentation lags, or 'auto' for floor(4 (T/100)^(1/4))")
    test.add_argument("--form", choices=[f.value for f in StepTwoForm], default=StepTwoForm.LEVELS.value)
    test.add_argument("--cv", help="Critical value table CSV written by 'cv'")
    test.add_argument("--out", help="Also write the result as CSV")
    test.set_defaults(handler=cmd_test)

    simulate = commands.add_parser("simulate", help="Simulate a series from a DGP")
    simulate.add_argument("--config", help="INI file with a [dgp] section; flags override it")
    simulate.add_argument("--T", type=int, required=True)
    simulate.add_argument("--alpha", type=float)
    simulate.add_argument("--sigma", type=float)
    simulate.add_argument("--gamma", type=float_list)
    simulate.add_argument("--det")
    simulate.add_argument("--error-ar", dest="error_ar", type=float_list)
    simulate.add_argument("--z0", type=float)
    simulate.add_argument("--burn-in", dest="burn_in", type=int)
    simulate.add_argument("--innovation", choices=["gaussian", "student_t"])
    simulate.add_argument("--df", type=float, help="Student-t degrees of freedom")
    simulate.add_argument("--initial", choices=["fixed", "stationary"])
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--out", default=STDOUT)
    simulate.set_defaults(handler=cmd_simulate)

    for name, handler, help_text in (
        ("cv", cmd_cv, "Tabulate critical values under the unit-root null"),
        ("experiment", cmd_experiment, "Run a size/power, variance or efficiency experiment"),
    ):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("--config", required=True, help="INI experiment config, or a CSV written by a previous run")
        command.add_argument("--seed", type=int, help="Override the config's base seed")
        command.add_argument("--threads", type=int, help="Worker count (defaults to URKIT_THREADS)")
        command.add_argument("--out", default=STDOUT)
        if name == "experiment":
            command.add_argument("--cv", help="Use this critical value table instead of simulating one")
        command.set_defaults(handler=handler)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except UnitRootException as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {format_validation_error(e)}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
