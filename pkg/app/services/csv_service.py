import configparser
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.exceptions.data.series_file_exception import SeriesFileError
from app.exceptions.montecarlo.montecarlo_exceptions import ExperimentConfigError
from app.models.cli.run_manifest_model import RunManifest, SeriesFile
from app.models.montecarlo.experiment_model import (
    CriticalValueEntry,
    CriticalValueTable,
    ExperimentConfig,
    ExperimentReport
)
from app.models.simulation.dgp_config_model import DgpConfig
from app.models.unitroot.unit_root_result_model import UnitRootResult
from singleton import SingletonMeta
from util import Utils


# Get logger
logger = logging.getLogger(__name__)

MANIFEST_PREFIX = "# manifest: "
STDOUT = "-"
LIST_FIELDS = {"gamma", "error_ar", "methods", "quantiles"}
DGP_SECTION_PREFIX = "alt."


def format_validation_error(error: ValidationError) -> str:
    """One 'field: message' line per pydantic error."""
    lines = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get("loc", ())) or "config"
        lines.append(f"{location}: {item.get('msg')}")
    return "; ".join(lines)


class CsvService(metaclass=SingletonMeta):
    """
    Reads and writes every file the toolkit touches: series CSVs, critical
    value tables, experiment reports and INI experiment configs. Output
    files start with '#' metadata lines, one of them the run manifest.
    """

    # -- headers ----------------------------------------------------------

    def _header_lines(self, title: str, manifest: RunManifest, extra: Dict[str, Any] = None) -> List[str]:
        lines = [f"# {title}", MANIFEST_PREFIX + manifest.model_dump_json()]
        for key, value in (extra or {}).items():
            lines.append(f"# {key}: {value}")
        return lines

    def _write(self, path: str, header: List[str], frame: pd.DataFrame):
        """Header plus CSV body; path "-" writes to stdout."""
        if path == STDOUT:
            sys.stdout.write("\n".join(header) + "\n")
            frame.to_csv(sys.stdout, index=False, lineterminator="\n")
            return
        file_path = Path(path)
        if file_path.parent and not file_path.parent.exists():
            file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", newline="") as handle:
            handle.write("\n".join(header) + "\n")
            frame.to_csv(handle, index=False, lineterminator="\n")
        logger.info(f"Wrote {len(frame)} rows to {file_path}")

    def read_manifest(self, path: str) -> Optional[RunManifest]:
        with open(path) as handle:
            for line in handle:
                if not line.startswith("#"):
                    break
                if line.startswith(MANIFEST_PREFIX):
                    return RunManifest.model_validate_json(line[len(MANIFEST_PREFIX):].strip())
        return None

    # -- series -----------------------------------------------------------

    def read_series(self, path: str) -> SeriesFile:
        """
        One numeric column (optional header) or two columns (time label,
        value). Any missing or non-numeric cell is an error; nothing is imputed.
        """
        file_path = Path(path)
        if not file_path.exists():
            raise SeriesFileError(detail=f"Series file not found: {path}")
        try:
            frame = pd.read_csv(
                file_path, header=None, comment="#", dtype=str,
                skip_blank_lines=True, keep_default_na=False
            )
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise SeriesFileError(detail=f"Could not parse {path}: {str(e)}")

        if frame.shape[1] not in (1, 2):
            raise SeriesFileError(detail=f"{path}: expected 1 or 2 columns, found {frame.shape[1]}")

        value_column = frame.shape[1] - 1
        first_row = 0
        if frame.shape[0] and pd.isna(pd.to_numeric(frame.iat[0, value_column].strip(), errors="coerce")):
            first_row = 1  # header line

        body = frame.iloc[first_row:]
        raw_values = body.iloc[:, value_column].str.strip()
        values = pd.to_numeric(raw_values, errors="coerce")
        bad = np.flatnonzero(values.isna().to_numpy() | ~np.isfinite(values.fillna(0).to_numpy()))
        if bad.size:
            row = int(bad[0]) + first_row + 1
            raise SeriesFileError(
                detail=f"{path}: row {row}, column {value_column + 1}: "
                       f"'{raw_values.iloc[bad[0]]}' is missing or not numeric"
            )

        labels = body.iloc[:, 0].str.strip().tolist() if value_column == 1 else None
        try:
            return SeriesFile(path=str(path), time_labels=labels, values=values.to_numpy(dtype=float))
        except ValidationError as e:
            raise SeriesFileError(detail=f"{path}: {format_validation_error(e)}")

    def write_series(self, path: str, values: np.ndarray, manifest: RunManifest):
        frame = pd.DataFrame({"t": np.arange(1, len(values) + 1), "y": np.asarray(values, dtype=float)})
        self._write(path, self._header_lines("urkit simulated series", manifest), frame)

    # -- unit root results ------------------------------------------------

    def result_frame(self, result: UnitRootResult) -> pd.DataFrame:
        rows = [
            ("method", result.method.value),
            ("spec", result.spec),
            ("rho_hat", result.rho_hat),
            ("se_rho", result.se_rho),
            ("t_df", result.t_df),
            ("f_stat", result.f_stat),
            ("chi", result.chi),
            ("t_lm", result.t_lm),
            ("k", result.k),
            ("t_effective", result.t_effective),
            ("m", result.m),
            ("sigma2", result.sigma2),
        ]
        rows.extend((f"beta_{j + 1}", value) for j, value in enumerate(result.beta))
        if result.gamma_structural is not None:
            rows.extend(
                (f"gamma_{label}", value)
                for label, value in zip(result.det_labels, result.gamma_structural)
            )
        return pd.DataFrame(rows, columns=["field", "value"])

    def write_result(self, path: str, result: UnitRootResult, manifest: RunManifest):
        self._write(path, self._header_lines("urkit unit root test", manifest), self.result_frame(result))

    # -- critical values --------------------------------------------------

    def table_frame(self, table: CriticalValueTable) -> pd.DataFrame:
        return pd.DataFrame(
            [(e.method.value, e.statistic.value, e.quantile, e.value) for e in table.entries],
            columns=["method", "statistic", "quantile", "value"]
        )

    def write_table(self, path: str, table: CriticalValueTable, manifest: RunManifest):
        extra = {
            "config_hash": table.config.fingerprint() if table.config else "n/a",
            "seed": table.base_seed,
            "reps": table.reps,
            "dropped": table.dropped,
            "publishable": table.publishable,
            "mean_abs_lm_gap": json.dumps({m.value: v for m, v in table.mean_abs_lm_gap.items()}),
        }
        header = self._header_lines("urkit critical values", manifest, extra)
        self._write(path, header, self.table_frame(table))

    def read_table(self, path: str) -> CriticalValueTable:
        if not Path(path).exists():
            raise SeriesFileError(detail=f"Critical value table not found: {path}")
        meta: Dict[str, str] = {}
        with open(path) as handle:
            for line in handle:
                if not line.startswith("#"):
                    break
                if ": " in line and not line.startswith(MANIFEST_PREFIX):
                    key, _, value = line[2:].partition(": ")
                    meta[key.strip()] = value.strip()
        try:
            frame = pd.read_csv(path, comment="#")
            entries = [
                CriticalValueEntry(
                    method=row["method"], statistic=row["statistic"],
                    quantile=float(row["quantile"]), value=float(row["value"])
                )
                for _, row in frame.iterrows()
            ]
            return CriticalValueTable(
                entries=entries,
                reps=int(meta.get("reps", 1)),
                base_seed=int(meta.get("seed", 0)),
                dropped=int(meta.get("dropped", 0)),
                publishable=meta.get("publishable", "True") == "True"
            )
        except (KeyError, ValueError, pd.errors.ParserError) as e:
            raise SeriesFileError(detail=f"{path} is not a critical value table: {str(e)}")

    # -- experiment reports -----------------------------------------------

    def report_frame(self, report: ExperimentReport) -> pd.DataFrame:
        if report.rejection_rates:
            return pd.DataFrame([row.model_dump(mode="json") for row in report.rejection_rates])
        if report.variance_comparison:
            return pd.DataFrame([row.model_dump(mode="json") for row in report.variance_comparison])
        return pd.DataFrame([row.model_dump(mode="json") for row in report.gamma_mse])

    def write_report(self, path: str, report: ExperimentReport, manifest: RunManifest):
        extra = {
            "kind": report.kind.value,
            "config_hash": report.config.fingerprint(),
            "seed": report.config.base_seed,
            "reps": report.reps,
            "dropped": report.dropped,
        }
        if report.standard_error_of_rate is not None:
            extra["standard_error_of_rate"] = repr(report.standard_error_of_rate)
        header = self._header_lines("urkit experiment report", manifest, extra)
        self._write(path, header, self.report_frame(report))

    def write_power_curves(self, path: str, report: ExperimentReport, manifest: RunManifest):
        frame = pd.DataFrame(
            [
                (r.method.value, r.statistic.value, r.alpha, r.rate, r.mc_se)
                for r in sorted(report.rejection_rates, key=lambda r: (r.method.value, r.statistic.value, -r.alpha))
            ],
            columns=["method", "statistic", "alpha", "rate", "mc_se"]
        )
        self._write(path, self._header_lines("urkit power curves", manifest), frame)

    # -- configuration files ----------------------------------------------

    def _section_dict(self, section: configparser.SectionProxy) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        for key, raw in section.items():
            text = raw.strip()
            if key in LIST_FIELDS:
                # entries stay strings; pydantic converts them and names the failing index
                values[key] = [item.strip() for item in text.split(",") if item.strip()]
            else:
                values[key] = text
        return values

    def parse_dgp_section(self, section: configparser.SectionProxy, name: str) -> DgpConfig:
        values = self._section_dict(section)
        values.setdefault("name", name)
        try:
            return DgpConfig.model_validate(values)
        except ValidationError as e:
            raise ExperimentConfigError(detail=f"[{section.name}] {format_validation_error(e)}")

    def load_dgp_config(self, path: str, section: str = "dgp") -> DgpConfig:
        parser = self._read_ini(path)
        if not parser.has_section(section):
            raise ExperimentConfigError(detail=f"{path}: missing [{section}] section")
        return self.parse_dgp_section(parser[section], section)

    def _read_ini(self, path: str) -> configparser.ConfigParser:
        if not Path(path).exists():
            raise ExperimentConfigError(detail=f"Config file not found: {path}")
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        parser.optionxform = str
        try:
            parser.read(path)
        except configparser.Error as e:
            raise ExperimentConfigError(detail=f"{path}: {str(e)}")
        return parser

    def load_experiment_config(self, path: str) -> ExperimentConfig:
        """
        INI file with [experiment], optional [null] and any number of
        [alt.<name>] sections; or a CSV written by a previous run, whose
        manifest holds the resolved config.
        """
        if Path(path).suffix.lower() == ".csv":
            if not Path(path).exists():
                raise ExperimentConfigError(detail=f"Config file not found: {path}")
            manifest = self.read_manifest(path)
            if manifest is None:
                raise ExperimentConfigError(detail=f"{path} has no run manifest")
            return self._validate_experiment(manifest.config, path)

        parser = self._read_ini(path)
        if not parser.has_section("experiment"):
            raise ExperimentConfigError(detail=f"{path}: missing [experiment] section")
        values = self._section_dict(parser["experiment"])
        if "det" in values:
            values["spec"] = values.pop("det")
        if "seed" in values:
            values["base_seed"] = values.pop("seed")
        if str(values.get("k", "")).lower() == "auto":
            values.pop("k")
            values["k_rule"] = "schwert"
        if parser.has_section("null"):
            values["dgp_null"] = self.parse_dgp_section(parser["null"], "null")
        values["dgp_alts"] = [
            self.parse_dgp_section(parser[name], name[len(DGP_SECTION_PREFIX):])
            for name in parser.sections()
            if name.startswith(DGP_SECTION_PREFIX)
        ]
        return self._validate_experiment(values, path)

    def _validate_experiment(self, values: Dict[str, Any], path: str) -> ExperimentConfig:
        try:
            config = ExperimentConfig.model_validate(values)
        except ValidationError as e:
            raise ExperimentConfigError(detail=f"{path}: {format_validation_error(e)}")
        logger.info(f"Loaded experiment '{config.name}' ({Utils.config_hash(config.summary())}) from {path}")
        return config


csv_service = CsvService()
