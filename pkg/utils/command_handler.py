from enum import Enum


class Serializer:
    def to_dict(self):
        raise NotImplementedError


class DeSerializer:
    @classmethod
    def from_dict(cls, data):
        raise NotImplementedError


class Command(Enum):
    """
    Enum of the subcommands understood by the command-line driver.
    The value is the name typed on the command line.
    """
    EXPAND = "expand"
    THETA = "theta"
    FILTRATION = "filtration"
    TATE_CYCLE = "tate-cycle"
    FIND_CONGRUENCES = "find-congruences"
    VERIFY_THEOREM = "verify-theorem"
    VERIFY_TABLE = "verify-table"
    A_TILDE = "a-tilde"
    B_TILDE = "b-tilde"
    BOUNDS = "bounds"
    THETA_PRIMES = "theta-primes"


class OutputFormat(Enum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"


class Report(Serializer):
    """
    A rendered command result: a JSON payload plus a header and rows for the
    table and csv renderings.

    Attributes:
        payload (dict): Machine-readable result, JSON-ready.
        header (list): Column names for the tabular renderings.
        rows (list): One list of cells per line.
        text (str): Optional free-form rendering used instead of the table.
    """

    def __init__(self, payload, header=None, rows=None, text=None):
        self.payload = payload
        self.header = header or []
        self.rows = rows or []
        self.text = text

    def __str__(self):
        return f"Report : {self.payload}"

    def to_dict(self):
        return self.payload
