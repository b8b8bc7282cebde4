"""Append-only JSONL results ledger and the batch experiment runner."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TextIO

from . import __version__
from .bounds import bound_report
from .errors import ParameterError, VerificationError
from .family import SetFamily
from .profile import IntersectionProfile, is_valid, parse_profile
from .search import SearchBudget, certify, max_family

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerRecord:
    timestamp: str
    n: int
    p: int | None
    profile: str
    max_size: int
    exhausted: bool
    infeasible: bool
    witness: list[list[int]] | None
    bounds: list[dict]
    tightest: int | None
    nodes_visited: int
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        obj = {
            "schema_version": self.schema_version,
            "timestamp": self.timestamp,
            "n": self.n,
            "p": self.p,
            "profile": self.profile,
            "max_size": self.max_size,
            "exhausted": self.exhausted,
            "infeasible": self.infeasible,
            "witness": self.witness,
            "bounds": self.bounds,
            "tightest": self.tightest,
            "nodes_visited": self.nodes_visited,
            "tool_version": self.tool_version,
        }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, line: str) -> LedgerRecord:
        obj = json.loads(line)
        if not isinstance(obj, dict):
            raise ParameterError("ledger line is not a JSON object")
        try:
            return cls(
                timestamp=obj["timestamp"],
                n=obj["n"],
                p=obj["p"],
                profile=obj["profile"],
                max_size=obj["max_size"],
                exhausted=obj["exhausted"],
                infeasible=obj["infeasible"],
                witness=obj["witness"],
                bounds=obj["bounds"],
                tightest=obj["tightest"],
                nodes_visited=obj["nodes_visited"],
                tool_version=obj["tool_version"],
                schema_version=obj["schema_version"],
            )
        except KeyError as exc:
            raise ParameterError(f"ledger record lacks field {exc}") from exc

    @property
    def gap(self) -> int | None:
        return None if self.tightest is None else self.tightest - self.max_size

    def audit(self) -> None:
        """Re-verify the witness and check the size against recomputed bounds."""
        prof = parse_profile(self.profile)
        if self.witness is not None:
            fam = SetFamily.from_lists(self.n, self.witness)
            if len(fam) != self.max_size:
                raise VerificationError(
                    f"witness has {len(fam)} members, record claims {self.max_size}"
                )
            if not is_valid(fam, prof):
                raise VerificationError(f"witness does not verify under {self.profile}")
        elif not self.infeasible:
            raise VerificationError("feasible record without a witness")
        tightest = bound_report(self.n, prof.modulus, prof).tightest
        if tightest != self.tightest:
            raise VerificationError(f"recorded tightest bound {self.tightest}, recomputed {tightest}")
        if self.exhausted and tightest is not None and self.max_size > tightest:
            raise VerificationError(f"max_size {self.max_size} exceeds proven bound {tightest}")


def record_from_outcome(outcome, timestamp: str | None = None) -> LedgerRecord:
    prof: IntersectionProfile = outcome.profile
    if not certify(outcome):
        raise VerificationError("search outcome failed certification")
    report = bound_report(outcome.n, prof.modulus, prof)
    return LedgerRecord(
        timestamp=timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        n=outcome.n,
        p=prof.modulus,
        profile=str(prof),
        max_size=outcome.max_size,
        exhausted=outcome.exhausted,
        infeasible=outcome.infeasible,
        witness=None if outcome.witness is None else outcome.witness.to_lists(),
        bounds=[{"name": e.name, "value": e.value} for e in report.applicable],
        tightest=report.tightest,
        nodes_visited=outcome.nodes_visited,
    )


def ledger_append(path: str | Path, records: list[LedgerRecord]) -> None:
    with open(path, "a") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def ledger_load(
    path: str | Path, lenient: bool = False, problems: list[str] | None = None
) -> list[LedgerRecord]:
    """Parse and audit every record.

    A bad line raises (naming the line number) unless ``lenient``, in which
    case it is skipped and described in ``problems``.
    """
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = LedgerRecord.from_json(line)
                rec.audit()
            except json.JSONDecodeError as exc:
                msg = f"{path}:{lineno}: malformed JSON ({exc.msg})"
                if not lenient:
                    raise ParameterError(msg) from exc
            except (ParameterError, VerificationError) as exc:
                msg = f"{path}:{lineno}: {exc}"
                if not lenient:
                    raise type(exc)(msg) from exc
            else:
                records.append(rec)
                continue
            log.warning("skipping %s", msg)
            if problems is not None:
                problems.append(msg)
    return records


@dataclass(frozen=True)
class ExperimentSpec:
    ns: tuple[int, ...]
    profiles: tuple[str, ...]
    ps: tuple[int | None, ...] = (None,)
    budget: SearchBudget = field(default_factory=SearchBudget)
    ledger: str | Path | None = None
    table_format: str = "csv"
    canonical: bool = False
    use_bounds: bool = False

    def grid(self) -> list[tuple[int, IntersectionProfile]]:
        """Instantiate templates (``{p}`` is replaced by each modulus) over all n."""
        if not self.ns or not self.profiles:
            raise ParameterError("experiment grid is empty")
        if self.table_format not in ("csv", "json"):
            raise ParameterError(f"unknown table format {self.table_format!r}")
        profiles: list[IntersectionProfile] = []
        for template in self.profiles:
            for p in self.ps:
                if "{p}" in template:
                    if p is None:
                        raise ParameterError(f"template {template!r} needs a modulus grid")
                    text = template.replace("{p}", str(p))
                else:
                    text = template
                prof = parse_profile(text)
                if prof not in profiles:
                    profiles.append(prof)
        return [(n, prof) for prof in profiles for n in self.ns]


def run_experiment(spec: ExperimentSpec, table: TextIO | None = None) -> list[LedgerRecord]:
    """Search every grid point, certify, append to the ledger, emit a summary table."""
    points = spec.grid()
    if spec.ledger is not None:
        # fail on an unwritable ledger before any search starts
        with open(spec.ledger, "a"):
            pass
    records = []
    for n, prof in points:
        outcome = max_family(
            n, prof, spec.budget, canonical=spec.canonical, use_bounds=spec.use_bounds
        )
        rec = record_from_outcome(outcome)
        if spec.ledger is not None:
            ledger_append(spec.ledger, [rec])
        records.append(rec)
    if table is not None:
        table.write(summary_table(records, spec.table_format))
    return records


SUMMARY_FIELDS = ("n", "p", "profile", "max_size", "exhausted", "tightest", "gap")


def summary_table(records: list[LedgerRecord], fmt: str = "csv") -> str:
    rows = [
        {
            "n": r.n,
            "p": r.p,
            "profile": r.profile,
            "max_size": r.max_size,
            "exhausted": r.exhausted,
            "tightest": r.tightest,
            "gap": r.gap,
        }
        for r in records
    ]
    if fmt == "json":
        return json.dumps(rows) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
