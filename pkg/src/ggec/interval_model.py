"""Per-integer likelihoods under fixed and dynamic likelihood intervals.

A continuous GGD entropy model becomes a discrete distribution by giving each
integer ``n`` an interval of the real line and taking the model mass on it.
The classic choice is ``[n - 1/2, n + 1/2]``.  The dynamic partition scales
the interval of the rounded mean ``m`` by ``delta`` and slides every other
interval towards (or away from) the center so the partition still tiles the
line::

    n == m:  [m - delta/2, m + delta/2]
    n >  m:  [n + delta/2 - 1, n + delta/2]
    n <  m:  [n - delta/2, n - delta/2 + 1]

Tables are quantized to 16-bit fixed point for the range coder.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import ggd_math
from .errors import ConfigError
from .ggd_math import clamp_beta, clamp_sigma

PROB_BITS = 16
PROB_TOTAL = 1 << PROB_BITS
PI_MIN = 1e-4
PI_MAX = 1.0 - 1e-4
DELTA_CAP = 64.0
PRELIM_SIGMA_SPLIT = 2.0
PRELIM_BETA = 0.5
PRELIM_DELTA = 0.5
_SQRT2 = 1.4142135623730951
_ROW_CHUNK = 1024
_TINY_MASS = 1e-200


class CodingMode(enum.IntEnum):
    FIXED_GAUSSIAN = 0
    FIXED_LAPLACIAN = 1
    FIXED_GGD = 2
    DYNAMIC_GGD = 3
    PRELIMINARY = 4

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, value) -> "CodingMode":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            try:
                return cls(value)
            except ValueError:
                raise ConfigError("unknown coding mode %r" % value) from None
        key = str(value).strip().lower()
        for mode in cls:
            if mode.label == key:
                return mode
        raise ConfigError(
            "unknown coding mode %r (expected one of %s)" % (value, ", ".join(m.label for m in cls))
        )


def clamp_pi(pi):
    out = np.clip(np.asarray(pi, dtype=np.float64), PI_MIN, PI_MAX)
    return float(out) if np.ndim(pi) == 0 else out


@dataclass(frozen=True)
class SymbolParams:
    """Entropy-model side information for one latent symbol.

    ``pi`` is the probability that the symbol equals the rounded mean.
    """

    mu: float
    sigma: float
    beta: float = 1.0
    pi: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma", clamp_sigma(float(self.sigma)))
        object.__setattr__(self, "beta", clamp_beta(float(self.beta)))
        object.__setattr__(self, "pi", clamp_pi(float(self.pi)))


@dataclass(frozen=True)
class IntervalSpec:
    """Dynamic partition: center integer ``m`` and center-interval width ``delta``."""

    m: int
    delta: float

    @classmethod
    def for_params(cls, p: SymbolParams) -> "IntervalSpec":
        return cls(round_half_away(p.mu), float(delta_scale(p.pi, p.sigma)))

    def interval(self, n: int) -> tuple[float, float]:
        return _bounds(n, self.m, self.delta)


@dataclass(frozen=True)
class Alphabet:
    """Inclusive integer symbol range, storable as int16."""

    min_sym: int = -255
    max_sym: int = 255

    def __post_init__(self):
        if not (-32768 <= self.min_sym < self.max_sym <= 32767):
            raise ConfigError(
                "alphabet must satisfy -32768 <= min < max <= 32767, got %d:%d" % (self.min_sym, self.max_sym)
            )

    @property
    def size(self) -> int:
        return self.max_sym - self.min_sym + 1

    def symbols(self) -> np.ndarray:
        return np.arange(self.min_sym, self.max_sym + 1, dtype=np.int64)

    def contains(self, values) -> np.ndarray:
        values = np.asarray(values)
        return (values >= self.min_sym) & (values <= self.max_sym)

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        try:
            lo, hi = text.split(":")
            return cls(int(lo), int(hi))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("alphabet must look like MIN:MAX, got %r" % text) from None

    def __str__(self) -> str:
        return "%d:%d" % (self.min_sym, self.max_sym)


DEFAULT_ALPHABET = Alphabet()


@dataclass(frozen=True, eq=False)
class QuantizedCdf:
    """Cumulative frequencies ``cdf[k]`` for the k-th alphabet symbol.

    ``cdf[0] == 0``, ``cdf[-1] == 65536`` and every symbol has frequency >= 1.
    """

    alphabet: Alphabet
    cdf: np.ndarray

    def __post_init__(self):
        cdf = np.ascontiguousarray(self.cdf, dtype=np.uint32)
        if cdf.shape != (self.alphabet.size + 1,):
            raise ConfigError("cdf length %d does not match alphabet size %d" % (cdf.size, self.alphabet.size))
        if cdf[0] != 0 or cdf[-1] != PROB_TOTAL or np.any(np.diff(cdf.astype(np.int64)) < 1):
            raise ConfigError("cdf must run from 0 to %d with every frequency >= 1" % PROB_TOTAL)
        object.__setattr__(self, "cdf", cdf)

    @property
    def freq(self) -> np.ndarray:
        return np.diff(self.cdf.astype(np.int64))

    def index(self, symbol: int) -> int:
        return int(symbol) - self.alphabet.min_sym

    def to_bytes(self) -> bytes:
        return self.cdf.astype("<u4").tobytes()

    def fnv1a(self) -> int:
        return fnv1a_64(self.to_bytes())

    def __eq__(self, other):
        if not isinstance(other, QuantizedCdf):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.cdf, other.cdf)

    __hash__ = None


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def round_half_away(x):
    """Nearest integer, ties away from zero.  Works on scalars and arrays."""
    xa = np.asarray(x, dtype=np.float64)
    mag = np.abs(xa)
    whole = np.floor(mag)
    whole = whole + (mag - whole >= 0.5)
    out = np.copysign(whole, xa).astype(np.int64)
    return int(out) if np.ndim(x) == 0 else out


def delta_scale(pi, sigma):
    """Width of the center interval given ``pi = P(y == round(mu))`` and scale.

    Linear in ``pi`` on each side of 1/2, from ``1/(1+sigma)`` at ``pi = 0``
    through 1 at ``pi = 1/2`` to ``1/(1-e^-sigma)`` at ``pi = 1``, capped at 64.
    """
    pi_a = np.asarray(pi, dtype=np.float64)
    sig = np.asarray(sigma, dtype=np.float64)
    stretch = 1.0 / (1.0 - np.asarray(ggd_math.exp(-sig)))
    squeeze = 1.0 / (1.0 + sig)
    with np.errstate(invalid="ignore"):
        out = np.where(
            pi_a >= 0.5,
            1.0 + (2.0 * pi_a - 1.0) * (stretch - 1.0),
            1.0 - (1.0 - 2.0 * pi_a) * (1.0 - squeeze),
        )
    out = np.minimum(out, DELTA_CAP)
    return float(out) if np.ndim(out) == 0 else out


def _upper_bound(n, m, delta):
    # right end of n's interval; equals the left end of n + 1's
    n = np.asarray(n)
    return np.where(n >= m, n + 0.5 * delta, (n + 1) - 0.5 * delta)


def _bounds(n, m, delta):
    return float(_upper_bound(n - 1, m, delta)), float(_upper_bound(n, m, delta))


def interval_of(n: int, mu: float, delta: float) -> tuple[float, float]:
    """Likelihood interval of integer ``n`` under center ``round(mu)`` and scale ``delta``."""
    if not delta > 0:
        raise ConfigError("delta must be positive")
    return _bounds(int(n), round_half_away(mu), float(delta))


def symbol_likelihood(n: int, p: SymbolParams, delta: float) -> float:
    """GGD(mu, sigma, beta) mass of ``interval_of(n, mu, delta)``."""
    lo, hi = interval_of(n, p.mu, delta)
    return ggd_math.interval_mass(lo, hi, p.mu, p.sigma, p.beta)


def preliminary_likelihood(n: int, mu: float, sigma: float) -> float:
    """Likelihood under the shape-switching heuristic for unreliable means.

    Small scales (sigma <= 2) keep the Laplacian with unit intervals.  Larger
    scales switch to a heavy-tailed GGD with beta = 1/2, give the rounded mean
    a half-width interval, and shift every other integer's unit interval a
    quarter step towards the mean.
    """
    n = int(n)
    mu = float(mu)
    sigma = clamp_sigma(float(sigma))
    if sigma <= PRELIM_SIGMA_SPLIT:
        return ggd_math.interval_mass(n - 0.5, n + 0.5, mu, sigma, 1.0)
    if n == round_half_away(mu):
        return ggd_math.interval_mass(n - 0.25, n + 0.25, mu, sigma, PRELIM_BETA)
    offset = 0.25 * np.sign(mu - n)
    return ggd_math.interval_mass(n + offset - 0.5, n + offset + 0.5, mu, sigma, PRELIM_BETA)


@dataclass(frozen=True)
class ModelRows:
    """Vectorized per-symbol models: GGD(mu, scale, shape) over a (center, delta) partition."""

    mu: np.ndarray
    scale: np.ndarray
    shape: np.ndarray
    delta: np.ndarray
    center: np.ndarray

    def __len__(self) -> int:
        return self.mu.shape[0]

    def take(self, idx) -> "ModelRows":
        return ModelRows(self.mu[idx], self.scale[idx], self.shape[idx], self.delta[idx], self.center[idx])


def mode_rows(mode, mu, sigma, beta, pi) -> ModelRows:
    """Map side information to the model each coding mode actually uses.

    Inputs are clamped here.  fixed-gaussian reads ``sigma`` as a standard
    deviation, which is GGD scale sigma*sqrt(2) at shape 2.
    """
    mode = CodingMode.parse(mode)
    mu = np.atleast_1d(np.asarray(mu, dtype=np.float64))
    n = mu.shape[0]
    sigma = np.broadcast_to(clamp_sigma(np.asarray(sigma, dtype=np.float64)), (n,)).astype(np.float64)
    beta = np.broadcast_to(clamp_beta(np.asarray(beta, dtype=np.float64)), (n,)).astype(np.float64)
    pi = np.broadcast_to(clamp_pi(np.asarray(pi, dtype=np.float64)), (n,)).astype(np.float64)
    ones = np.ones(n)
    if mode is CodingMode.FIXED_GAUSSIAN:
        scale, shape, delta = sigma * _SQRT2, 2.0 * ones, ones
    elif mode is CodingMode.FIXED_LAPLACIAN:
        scale, shape, delta = sigma, ones, ones
    elif mode is CodingMode.FIXED_GGD:
        scale, shape, delta = sigma, beta, ones
    elif mode is CodingMode.DYNAMIC_GGD:
        scale, shape, delta = sigma, beta, np.atleast_1d(delta_scale(pi, sigma))
    else:
        wide = sigma > PRELIM_SIGMA_SPLIT
        scale = sigma
        shape = np.where(wide, PRELIM_BETA, 1.0)
        delta = np.where(wide, PRELIM_DELTA, 1.0)
    return ModelRows(mu, scale, shape, delta, round_half_away(mu))


def _interval_masses(rows: ModelRows, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # lo/hi are (rows, k) arrays with lo <= hi; infinities allowed
    mu = rows.mu[:, None]
    scale = rows.scale[:, None]
    shape = np.broadcast_to(rows.shape[:, None], lo.shape)
    lg = np.broadcast_to(ggd_math._lgamma_recip(rows.shape)[:, None], lo.shape)
    t_lo = ggd_math.tail_mass(np.abs(lo - mu) / scale, shape, lg)
    t_hi = ggd_math.tail_mass(np.abs(hi - mu) / scale, shape, lg)
    return np.where(hi <= mu, t_hi - t_lo, np.where(lo >= mu, t_lo - t_hi, (1.0 - t_lo) - t_hi))


def likelihood_matrix(rows: ModelRows, alphabet: Alphabet = DEFAULT_ALPHABET) -> np.ndarray:
    """Real-valued masses, shape (rows, |alphabet|); end symbols absorb the tails."""
    out = np.empty((len(rows), alphabet.size))
    inner = np.arange(alphabet.min_sym, alphabet.max_sym, dtype=np.int64)
    for lo in range(0, len(rows), _ROW_CHUNK):
        part = rows.take(slice(lo, lo + _ROW_CHUNK))
        ub = _upper_bound(inner[None, :], part.center[:, None], part.delta[:, None])
        mu = part.mu[:, None]
        scale = part.scale[:, None]
        shape = np.broadcast_to(part.shape[:, None], ub.shape)
        lg = np.broadcast_to(ggd_math._lgamma_recip(part.shape)[:, None], ub.shape)
        t = ggd_math.tail_mass(np.abs(ub - mu) / scale, shape, lg)
        dst = out[lo : lo + len(part)]
        # both ends left of mu: F = t; both right: F = 1 - t; straddling: 1 - both tails
        t_lo, t_hi = t[:, :-1], t[:, 1:]
        b_lo, b_hi = ub[:, :-1], ub[:, 1:]
        dst[:, 1:-1] = np.where(b_hi <= mu, t_hi - t_lo, np.where(b_lo >= mu, t_lo - t_hi, (1.0 - t_lo) - t_hi))
        first_hi = ub[:, 0:1] <= mu
        dst[:, 0:1] = np.where(first_hi, t[:, 0:1], 1.0 - t[:, 0:1])
        last_lo = ub[:, -1:] >= mu
        dst[:, -1:] = np.where(last_lo, t[:, -1:], 1.0 - t[:, -1:])
    return out


def coded_likelihood(rows: ModelRows, symbols, alphabet: Alphabet = DEFAULT_ALPHABET) -> np.ndarray:
    """Real mass of each row's own symbol, with the same tail absorption as the tables."""
    sym = np.asarray(symbols, dtype=np.int64)
    lo = np.where(sym == alphabet.min_sym, -np.inf, _upper_bound(sym - 1, rows.center, rows.delta))
    hi = np.where(sym == alphabet.max_sym, np.inf, _upper_bound(sym, rows.center, rows.delta))
    return _interval_masses(rows, lo[:, None], hi[:, None])[:, 0]


def coded_log_likelihood(rows: ModelRows, symbols, alphabet: Alphabet = DEFAULT_ALPHABET) -> np.ndarray:
    """Natural log of :func:`coded_likelihood`, finite even when the mass underflows."""
    sym = np.asarray(symbols, dtype=np.int64)
    like = coded_likelihood(rows, sym, alphabet)
    out = np.full(like.shape, -np.inf)
    ok = like > _TINY_MASS
    out[ok] = ggd_math.ln(like[ok])
    deep = np.nonzero(~ok)[0]
    if deep.size:
        part = rows.take(deep)
        s = sym[deep]
        lo = np.where(s == alphabet.min_sym, -np.inf, _upper_bound(s - 1, part.center, part.delta))
        hi = np.where(s == alphabet.max_sym, np.inf, _upper_bound(s, part.center, part.delta))
        right = lo >= part.mu
        near = np.where(right, lo, hi)
        far = np.where(right, hi, lo)
        lt_near = np.asarray(ggd_math.log_tail_mass(np.abs(near - part.mu) / part.scale, part.shape))
        lt_far = np.asarray(ggd_math.log_tail_mass(np.abs(far - part.mu) / part.scale, part.shape))
        # the interval lies wholly in one tail: mass = t_near - t_far
        out[deep] = lt_near + np.asarray(ggd_math.ln(1.0 - np.asarray(ggd_math.exp(lt_far - lt_near))))
    return out


def quantize_masses(masses: np.ndarray) -> np.ndarray:
    """Largest-remainder apportionment of 65536 counts over each row, floor 1.

    Every symbol first receives one count; the remaining ``65536 - K`` are
    apportioned in proportion to the masses, leftovers going to the largest
    fractional parts (ties to the smaller symbol).  Returns cumulative tables
    of shape (rows, K + 1).
    """
    masses = np.atleast_2d(np.asarray(masses, dtype=np.float64))
    rows, k = masses.shape
    if k > PROB_TOTAL // 2:
        raise ConfigError("alphabet of %d symbols exceeds %d" % (k, PROB_TOTAL // 2))
    if not np.all(np.isfinite(masses)):
        raise ConfigError("non-finite likelihood in table")
    masses = np.maximum(masses, 0.0)
    budget = PROB_TOTAL - k
    quota = masses / masses.sum(axis=1, keepdims=True) * budget
    whole = np.floor(quota)
    rem = quota - whole
    left = budget - whole.sum(axis=1).astype(np.int64)
    # the left-th largest remainder is the cut; ties at the cut go to lower indices
    ranked = np.sort(rem, axis=1)[:, ::-1]
    cut = ranked[np.arange(rows), np.maximum(left - 1, 0)][:, None]
    above = rem > cut
    tied = rem == cut
    room = (left - above.sum(axis=1))[:, None]
    bonus = above | tied
    crowded = np.nonzero(tied.sum(axis=1) > room[:, 0])[0]
    if crowded.size:
        sub = tied[crowded]
        bonus[crowded] = above[crowded] | (sub & (np.cumsum(sub, axis=1) <= room[crowded]))
    bonus &= left[:, None] > 0
    freq = 1 + whole.astype(np.int64) + bonus
    cdf = np.zeros((rows, k + 1), dtype=np.uint32)
    np.cumsum(freq, axis=1, out=cdf[:, 1:])
    return cdf


def build_cdf_tables(rows: ModelRows, alphabet: Alphabet = DEFAULT_ALPHABET) -> np.ndarray:
    """Cumulative tables (rows, K + 1) as uint32, built in row chunks."""
    if alphabet.size > PROB_TOTAL // 2:
        raise ConfigError("alphabet of %d symbols exceeds %d" % (alphabet.size, PROB_TOTAL // 2))
    out = np.empty((len(rows), alphabet.size + 1), dtype=np.uint32)
    for lo in range(0, len(rows), _ROW_CHUNK):
        part = rows.take(slice(lo, lo + _ROW_CHUNK))
        out[lo : lo + len(part)] = quantize_masses(likelihood_matrix(part, alphabet))
    return out


def build_cdf_table(p: SymbolParams, mode, alphabet: Alphabet = DEFAULT_ALPHABET) -> QuantizedCdf:
    rows = mode_rows(mode, p.mu, p.sigma, p.beta, p.pi)
    return QuantizedCdf(alphabet, build_cdf_tables(rows, alphabet)[0])
