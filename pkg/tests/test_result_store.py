import json
import os
import tempfile
import unittest

from congruence.tate import CongruenceReport, Method
from scanner.scanner import verify_theorem
from series.eisenstein import QuotientSpec
from utils.errors import StorageError
from utils.result_store import ResultStore

SPEC = QuotientSpec(0, -12, 1)


def report(ell=17, residues=(3, 5, 6, 7, 10, 11, 12, 14)):
    return CongruenceReport(SPEC, ell, residues, Method.RIGOROUS, 26, 128)


class TestResultStore(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.store = ResultStore(self.directory.name, version="1.0")

    def tearDown(self):
        self.directory.cleanup()

    def test_put_then_get(self):
        self.store.put(report(), bound=129)
        self.assertEqual(self.store.get(SPEC, 17), report())
        self.assertEqual(self.store.hits, 1)

    def test_missing_key(self):
        self.assertIsNone(self.store.get(SPEC, 17))
        self.store.put(report(), bound=129)
        self.assertIsNone(self.store.get(SPEC, 19))

    def test_record_layout(self):
        self.store.put(report(), bound=129)
        path = os.path.join(self.directory.name, "scan-0_-12_1.jsonl")
        with open(path, encoding="utf-8") as handle:
            record = json.loads(handle.readline())
        self.assertEqual(set(record), {"r", "s", "t", "ell", "method", "residues", "weight",
                                       "precision", "bound", "version"})
        self.assertEqual(record["residues"], [3, 5, 6, 7, 10, 11, 12, 14])

    def test_latest_record_wins(self):
        self.store.put(report(residues=(3,)), bound=129)
        self.store.put(report(), bound=129)
        self.assertEqual(self.store.get(SPEC, 17).residues, report().residues)

    def test_corrupt_lines_are_skipped(self):
        self.store.put(report(), bound=129)
        with open(self.store.path_for(SPEC), "a", encoding="utf-8") as handle:
            handle.write("{not json\n")
            handle.write(json.dumps({"r": 0, "version": "1.0"}) + "\n")
        with self.assertLogs("utils.result_store", level="WARNING") as logs:
            self.assertEqual(self.store.get(SPEC, 17), report())
        self.assertEqual(len(logs.output), 2)

    def test_other_versions_are_ignored(self):
        ResultStore(self.directory.name, version="0.9").put(report(), bound=129)
        self.assertIsNone(self.store.get(SPEC, 17))

    def test_put_result(self):
        result = verify_theorem(QuotientSpec(0, 1, 1), use_remark=True, sample_above=1)
        self.store.put_result(result)
        for stored in result.reports + result.sampled_above:
            cached = self.store.get(stored.spec, stored.prime)
            self.assertEqual((cached.method, cached.residues), (stored.method, stored.residues))

    def test_unwritable_directory(self):
        blocker = os.path.join(self.directory.name, "file")
        with open(blocker, "w", encoding="utf-8") as handle:
            handle.write("")
        store = ResultStore(os.path.join(blocker, "results"))
        with self.assertRaises(StorageError):
            store.put(report(), bound=129)


if __name__ == '__main__':
    unittest.main()
