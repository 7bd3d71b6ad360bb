from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd
from marshmallow import Schema, fields, validate

from tsf.exceptions import ContractError
from tsf.utils.storage import RunStore

ANALYSIS_KINDS = ("noise_attention", "edge_histograms", "route_spectra")


class AnalysisReportSchema(Schema):
    kind = fields.Str(required=True, validate=validate.OneOf(ANALYSIS_KINDS))
    parameters = fields.Dict(keys=fields.Str())
    tables = fields.Dict(keys=fields.Str(), values=fields.Str())


@dataclass
class AnalysisReport:
    """Result of one interpretability study: the parameters used and the CSV tables written."""

    kind: str
    parameters: dict = field(default_factory=dict)
    tables: dict[str, Path] = field(default_factory=dict)

    def verify(self) -> "AnalysisReport":
        """Every referenced table must exist and parse back."""
        for name, path in self.tables.items():
            if not Path(path).is_file():
                raise ContractError(f"{self.kind}: table {name} missing at {path}")
            try:
                self.load(name)
            except (ValueError, pd.errors.ParserError) as exc:
                raise ContractError(f"{self.kind}: table {name} does not parse ({exc})") from exc
        return self

    def load(self, name: str) -> pd.DataFrame:
        return RunStore.read_table(self.tables[name])

    def as_dict(self) -> dict:
        return AnalysisReportSchema().dump({
            "kind": self.kind,
            "parameters": self.parameters,
            "tables": {name: str(path) for name, path in self.tables.items()},
        })
