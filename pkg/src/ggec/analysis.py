"""Numerical oracles and the mode-comparison harness.

``sigma_opt_numeric`` answers: for a residual ``r = |y - mu|``, which model
scale makes the observed value most likely?  ``compare_modes`` codes one
dataset under several modes and reports ideal and actual sizes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import ggd_math
from .codec import RateReport, as_batch, encode_payload, estimate_bits
from .errors import ConfigError, DomainError
from .interval_model import DEFAULT_ALPHABET, Alphabet, CodingMode

SIGMA_LO = 1e-3
SIGMA_HI = 100.0
SIGMA_TOL = 1e-6
OBJECTIVES = ("pdf", "interval-mass")
_INV_PHI = 0.6180339887498949
_SQRT2 = 1.4142135623730951

SWEEP_HEADER = "r,family,objective,sigma_opt"
MODES_HEADER = "mode,estimated_bits,coded_bytes,bits_per_symbol"


@dataclass(frozen=True)
class Family:
    """Model family: gaussian (sigma is a std), laplacian, or ggd with a fixed shape."""

    name: str
    beta: float | None = None

    @classmethod
    def parse(cls, text) -> "Family":
        if isinstance(text, Family):
            return text
        key = str(text).strip().lower()
        if key in ("gaussian", "laplacian"):
            return cls(key)
        m = re.fullmatch(r"ggd(?:[:(]\s*([0-9.eE+-]+)\s*\)?)?", key)
        if not m:
            raise ConfigError("unknown family %r (gaussian, laplacian, ggd:<beta>)" % text)
        try:
            beta = float(m.group(1)) if m.group(1) else 1.0
        except ValueError:
            raise ConfigError("bad ggd shape in %r" % text) from None
        if not ggd_math.BETA_MIN <= beta <= ggd_math.BETA_MAX:
            raise ConfigError("ggd shape %g outside [%g, %g]" % (beta, ggd_math.BETA_MIN, ggd_math.BETA_MAX))
        return cls("ggd", beta)

    @property
    def label(self) -> str:
        return self.name if self.beta is None else "ggd(%g)" % self.beta

    def ggd(self, sigma: float) -> tuple[float, float]:
        """(scale, shape) of the equivalent GGD."""
        if self.name == "gaussian":
            return sigma * _SQRT2, 2.0
        if self.name == "laplacian":
            return sigma, 1.0
        return sigma, self.beta


@dataclass(frozen=True)
class SigmaOptQuery:
    r: float
    family: Family
    objective: str = "interval-mass"

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "r", float(self.r))
        if self.objective not in OBJECTIVES:
            raise ConfigError("objective must be one of %s" % ", ".join(OBJECTIVES))

    def log_objective(self, sigma: float) -> float:
        scale, shape = self.family.ggd(sigma)
        if self.objective == "pdf":
            lg = float(ggd_math.log_gamma(1.0 / shape))
            u = self.r / scale
            return float(ggd_math.ln(shape / (2.0 * scale))) - lg - float(ggd_math.power(u, shape))
        mass = float(ggd_math.interval_mass(self.r - 0.5, self.r + 0.5, 0.0, scale, shape))
        return float(ggd_math.ln(mass)) if mass > 0 else -np.inf


def golden_section_max(f, lo: float, hi: float, tol: float = SIGMA_TOL) -> float:
    """Argmax of a unimodal ``f`` on [lo, hi], to within ``tol``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def sigma_opt_numeric(q: SigmaOptQuery) -> float:
    """Scale in [1e-3, 100] maximizing the query's objective at residual ``r``."""
    if not q.r > 0:
        raise DomainError("residual must be positive, got %g" % q.r)
    if q.objective == "interval-mass" and q.r < 1.0:
        # below 1 the interval mass keeps growing as sigma shrinks
        raise DomainError("interval-mass objective needs r >= 1, got %g" % q.r)
    best = golden_section_max(q.log_objective, SIGMA_LO, SIGMA_HI)
    if best - SIGMA_LO < 10 * SIGMA_TOL or SIGMA_HI - best < 10 * SIGMA_TOL:
        raise DomainError("no interior optimum for r=%g (%s, %s)" % (q.r, q.family.label, q.objective))
    return best


def sigma_opt_sweep(family, objective: str, rmin: float, rmax: float, steps: int) -> list[tuple[float, float]]:
    """(r, sigma_opt) on an evenly spaced grid of residuals."""
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    if rmax < rmin:
        raise ConfigError("rmax must be >= rmin")
    family = Family.parse(family)
    rs = [rmin] if steps == 1 else [rmin + (rmax - rmin) * i / (steps - 1) for i in range(steps)]
    return [(r, sigma_opt_numeric(SigmaOptQuery(r, family, objective))) for r in rs]


def sweep_csv(rows, family, objective: str) -> str:
    label = Family.parse(family).label
    lines = [SWEEP_HEADER] + ["%.9g,%s,%s,%.9g" % (r, label, objective, s) for r, s in rows]
    return "\n".join(lines) + "\n"


def compare_modes(records, modes, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[RateReport]:
    """Ideal and actual size of one dataset under each mode, sorted by mode number.

    ``coded_bytes`` counts the range-coder payload only; the fixed 26-byte
    container header is left out so sizes compare directly with the
    entropy estimates.
    """
    batch = as_batch(records)
    reports = []
    for mode in sorted({CodingMode.parse(m) for m in modes}):
        rep = estimate_bits(batch, mode, alphabet, quantized=False)
        payload, qbits = encode_payload(batch, mode, alphabet)
        rep.quantized_bits = qbits
        rep.coded_bytes = len(payload)
        reports.append(rep)
    return reports


def reports_csv(reports) -> str:
    return "\n".join([MODES_HEADER] + [r.csv_row() for r in reports]) + "\n"
