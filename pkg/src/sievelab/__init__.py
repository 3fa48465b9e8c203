"""sievelab: numerical laboratory for a flexible asymptotic sieve and twin-prime sums."""

__version__ = "0.1.0"

REPORT_HEADER = "# sievelab-report v1"
