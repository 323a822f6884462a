"""Prime factor sets of integer sequences, exposed from the polydense C++ core."""

import json

from . import _core
from ._core import (
    IoError,
    PreconditionError,
    PrimeSieve,
    comparability_check,
    counting_function,
    canonical_sequence,
    density_check,
    miller_rabin,
    prime_in_interval,
    roots_mod_p,
    sequence_window,
    stieltjes_identity,
)

__all__ = [
    "IoError",
    "PreconditionError",
    "PrimeSieve",
    "RunError",
    "comparability_check",
    "counting_function",
    "canonical_sequence",
    "density_check",
    "factor_set",
    "miller_rabin",
    "prime_in_interval",
    "roots_mod_p",
    "run",
    "sequence_window",
    "stieltjes_identity",
]


class RunError(RuntimeError):
    """A CLI-style command finished with a nonzero exit code."""

    def __init__(self, exit_code, diagnostic, report):
        super().__init__(f"exit {exit_code}: {diagnostic}")
        self.exit_code = exit_code
        self.diagnostic = diagnostic
        self.report = report


def factor_set(seq, prime_bound, element_bound=0, exact=False, workers=1):
    """P(S) up to prime_bound as a dict (same layout as the CLI's JSON)."""
    return json.loads(_core.factor_set_json(seq, prime_bound, element_bound, exact, workers))


def run(command, **options):
    """Run a CLI command in-process and return the parsed JSON report.

    Option names follow the CLI flags with dashes turned into underscores;
    ``range`` takes a (lo, hi) pair.
    """
    exit_code, report, diagnostic = _core.execute(command, options)
    if exit_code != 0:
        raise RunError(exit_code, diagnostic, report)
    return json.loads(report)
