"""Exact verification of truncated hypergeometric supercongruences.

Sums are evaluated as exact rationals and compared with closed forms built
from Morita's p-adic Gamma function; a congruence holds when the p-adic
valuation of the difference reaches the target exponent.
"""

from .exactnum import (
    GaussianRational,
    PadicContext,
    ResidueClass,
    congruent,
    make_rational,
    padic_valuation,
    residue,
)
from .hyper import HyperSpec, Kind, SeriesFamily, pochhammer, truncated_hyper, weighted_series
from .pgamma import GammaTable, gamma_p, gamma_p_nat
from .verifier import CaseReport, Verdict, enumerate_cases, probe_valuation, run_statement, verify_case

__version__ = "0.1.0"

__all__ = [
    "CaseReport",
    "GammaTable",
    "GaussianRational",
    "HyperSpec",
    "Kind",
    "PadicContext",
    "ResidueClass",
    "SeriesFamily",
    "Verdict",
    "congruent",
    "enumerate_cases",
    "gamma_p",
    "gamma_p_nat",
    "make_rational",
    "padic_valuation",
    "pochhammer",
    "probe_valuation",
    "residue",
    "run_statement",
    "truncated_hyper",
    "verify_case",
    "weighted_series",
]
