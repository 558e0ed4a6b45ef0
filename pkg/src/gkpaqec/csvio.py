"""Stable CSV emission for estimate tables.

Schema (header order is a compatibility contract):
experiment,decoder,code,level,basis_mode,sigma,squeezing_db,trials,failures,
p_fail,ci_low,ci_high,seed
Floats carry 17 significant digits so rows round-trip bit-exactly.
"""
from __future__ import annotations

import os
import tempfile
from typing import Iterable

from .montecarlo import Estimate

CSV_HEADER = (
    "experiment,decoder,code,level,basis_mode,sigma,squeezing_db,"
    "trials,failures,p_fail,ci_low,ci_high,seed"
)

_CODE_NAMES = {"bitflip": "bitflip3", "c4c6": "c4c6"}


def _fmt(x: float) -> str:
    return format(x, ".17g")


def estimate_row(e: Estimate) -> str:
    """One schema-ordered CSV data row."""
    return ",".join(
        (
            e.experiment,
            e.decoder,
            _CODE_NAMES[e.experiment],
            str(e.level),
            e.basis_mode,
            _fmt(e.sigma),
            _fmt(e.squeezing_db),
            str(e.trials),
            str(e.failures),
            _fmt(e.p_fail),
            _fmt(e.ci_low),
            _fmt(e.ci_high),
            str(e.seed),
        )
    )


def render_csv(estimates: Iterable[Estimate]) -> str:
    """Full CSV document for the given estimates.

    Failed cells (error set) are refused: emitting NaN rows silently would
    corrupt downstream plots.
    """
    rows = [CSV_HEADER]
    for e in estimates:
        if e.error is not None:
            raise ValueError(
                f"cell sigma={e.sigma} level={e.level} decoder={e.decoder} failed: {e.error}"
            )
        rows.append(estimate_row(e))
    return "\n".join(rows) + "\n"


def write_csv(path: str, estimates: Iterable[Estimate]) -> None:
    """Write the CSV atomically: temp file in the target directory + rename."""
    doc = render_csv(estimates)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gkpaqec-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(doc)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
