import json
import logging
import os
import threading

from config.settings import RESULTS_DIR, VERSION
from congruence.tate import CongruenceReport
from utils.errors import StorageError


class ResultStore:
    """
    Append-only cache of per-prime congruence reports.

    One file per quotient, ``scan-<r>_<s>_<t>.jsonl``, holding one JSON record
    per line with the fields r, s, t, ell, method, residues, weight,
    precision, bound and version. Records written by another version are
    ignored on read.
    """
    write_lock = threading.Lock()

    def __init__(self, directory=RESULTS_DIR, version=VERSION):
        self.logger = logging.getLogger(__name__)
        self.directory = directory
        self.version = version
        self.hits = 0

    def path_for(self, spec):
        return os.path.join(self.directory, f"scan-{spec.r}_{spec.s}_{spec.t}.jsonl")

    def put(self, report, bound):
        """Append one report; ``bound`` is the sweep limit it was computed under."""
        record = dict(report.to_dict(), bound=bound, version=self.version)
        line = json.dumps(record, sort_keys=True)
        with self.write_lock:
            try:
                os.makedirs(self.directory, exist_ok=True)
                with open(self.path_for(report.spec), "a", encoding="utf-8") as handle:
                    handle.write(line + "\n")
            except OSError as e:
                self.logger.error(f"Could not write to {self.directory}: {e}")
                raise StorageError(f"cannot write results to {self.directory}: {e}") from e

    def put_result(self, result, reports=None):
        """Append the reports of a sweep, or only ``reports`` when given."""
        if reports is None:
            reports = result.reports + result.sampled_above
        for report in reports:
            self.put(report, result.bound)

    def records(self, spec):
        """Every readable record of the current version for a quotient, in file order."""
        path = self.path_for(spec)
        if not os.path.exists(path):
            return []
        try:
            with open(path, encoding="utf-8") as handle:
                lines = handle.readlines()
        except OSError as e:
            raise StorageError(f"cannot read {path}: {e}") from e

        records = []
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                CongruenceReport.from_dict(record)
            except (ValueError, KeyError, TypeError) as e:
                self.logger.warning(f"Skipping corrupt record {path}:{number}: {e}")
                continue
            if record.get("version") == self.version:
                records.append(record)
        return records

    def get(self, spec, ell):
        """The latest cached report for (spec, ell), or None."""
        latest = None
        for record in self.records(spec):
            if int(record["ell"]) == ell:
                latest = record
        if latest is None:
            return None
        self.hits += 1
        self.logger.debug(f"Cache hit for {spec} at ell={ell}")
        return CongruenceReport.from_dict(latest)
