"""Seeded synthetic latents with known generalized-Gaussian residuals.

Every random draw is a hash of (seed, symbol index, stream, attempt), so a
dataset is a pure function of its config and does not depend on the order
or batching in which symbols are generated.

A GGD(0, sigma, beta) residual is drawn through its gamma representation:
``|r / sigma| ** beta`` is Gamma(1/beta, 1) distributed.  Gamma variates come
from Marsaglia-Tsang rejection with polar-method normals, boosted by
``U ** (1/a)`` for shapes below one.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import ggd_math
from .codec import LatentBatch, ParamTable
from .errors import ConfigError
from .interval_model import DEFAULT_ALPHABET, Alphabet, round_half_away

_LN10 = 2.302585092994046
_MAX_ATTEMPTS = 256

# hash streams
_S_MU, _S_SIGMA, _S_SIGN, _S_BOOST, _S_MISMATCH, _S_MISMATCH_DIR = range(6)
_S_NORMAL_A, _S_NORMAL_B, _S_ACCEPT = 8, 9, 10

_M64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(x: np.ndarray) -> np.ndarray:
    # SplitMix64 finalizer
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def hash_uniform(seed: int, index, stream: int, attempt=0) -> np.ndarray:
    """Uniform doubles in the open interval (0, 1), one per index."""
    idx = np.asarray(index, dtype=np.uint64)
    att = np.asarray(attempt, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = _mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * _GOLDEN)
        x = _mix(x ^ ((np.uint64(stream) << np.uint64(32)) | att) * _GOLDEN)
    return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)


def _std_normal(seed: int, index: np.ndarray, attempt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar-method normals; the bool mask marks draws that fell outside the disc."""
    v1 = 2.0 * hash_uniform(seed, index, _S_NORMAL_A, attempt) - 1.0
    v2 = 2.0 * hash_uniform(seed, index, _S_NORMAL_B, attempt) - 1.0
    s = v1 * v1 + v2 * v2
    ok = (s < 1.0) & (s > 0.0)
    safe = np.where(ok, s, 0.5)
    z = v1 * np.sqrt(-2.0 * np.asarray(ggd_math.ln(safe)) / safe)
    return z, ok


def gamma_variates(seed: int, index, shape) -> np.ndarray:
    """Gamma(shape, 1) draws keyed by index (Marsaglia-Tsang)."""
    index = np.atleast_1d(np.asarray(index, dtype=np.uint64))
    a = np.broadcast_to(np.asarray(shape, dtype=np.float64), index.shape)
    boost = a < 1.0
    a1 = np.where(boost, a + 1.0, a)
    d = a1 - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(index.shape)
    todo = np.arange(index.size)
    for attempt in range(_MAX_ATTEMPTS):
        if not todo.size:
            break
        att = np.full(todo.size, attempt, dtype=np.uint64)
        z, ok = _std_normal(seed, index[todo], att)
        v = 1.0 + c[todo] * z
        ok &= v > 0
        v = np.where(ok, v * v * v, 1.0)
        u = hash_uniform(seed, index[todo], _S_ACCEPT, att)
        dt = d[todo]
        ok &= np.asarray(ggd_math.ln(u)) < 0.5 * z * z + dt - dt * v + dt * np.asarray(ggd_math.ln(v))
        out[todo[ok]] = dt[ok] * v[ok]
        todo = todo[~ok]
    if todo.size:
        raise ggd_math.NumericError("gamma sampler exceeded %d attempts" % _MAX_ATTEMPTS)
    if boost.any():
        u = hash_uniform(seed, index[boost], _S_BOOST)
        out[boost] *= np.asarray(ggd_math.exp(np.asarray(ggd_math.ln(u)) / a[boost]))
    return out


def ggd_residuals(seed: int, index, sigma, beta) -> np.ndarray:
    """GGD(0, sigma, beta) draws keyed by index."""
    index = np.atleast_1d(np.asarray(index, dtype=np.uint64))
    beta = np.broadcast_to(np.asarray(beta, dtype=np.float64), index.shape)
    g = gamma_variates(seed, index, 1.0 / beta)
    mag = np.asarray(sigma, dtype=np.float64) * np.asarray(ggd_math.exp(np.asarray(ggd_math.ln(g)) / beta))
    sign = np.where(hash_uniform(seed, index, _S_SIGN) < 0.5, -1.0, 1.0)
    return sign * mag


def oracle_pi(mu, sigma_true, beta_true):
    """Exact P(round(mu + r) == round(mu)) for r ~ GGD(0, sigma_true, beta_true)."""
    mu_a = np.asarray(mu, dtype=np.float64)
    m = round_half_away(mu_a)
    sig = ggd_math.clamp_sigma(np.asarray(sigma_true, dtype=np.float64))
    beta = ggd_math.clamp_beta(np.asarray(beta_true, dtype=np.float64))
    out = ggd_math.interval_mass(m - 0.5, m + 0.5, mu_a, sig, beta)
    return float(out) if np.ndim(out) == 0 else np.asarray(out)


@dataclass
class SynthConfig:
    """Dataset recipe; generation is a pure function of these fields.

    ``sigma_log_range`` holds base-10 exponents.  A ``mismatch_rate`` fraction
    of symbols get a coded scale of ``sigma_true * mismatch_spread**(+-1)``;
    ``mismatch_direction`` ("both", "up" or "down") picks the sign.
    ``coded_beta`` defaults to ``beta_true``; ``pi_override`` replaces the
    oracle pi when set.
    """

    count: int = 100_000
    mu_range: tuple[float, float] = (-8.0, 8.0)
    sigma_log_range: tuple[float, float] = (-1.0, 1.0)
    beta_true: float = 1.0
    mismatch_rate: float = 0.0
    seed: int = 0
    coded_beta: float | None = None
    pi_override: float | None = None
    mismatch_spread: float = 4.0
    mismatch_direction: str = "both"
    alphabet: str = field(default=str(DEFAULT_ALPHABET))

    def __post_init__(self):
        self.mu_range = tuple(float(v) for v in self.mu_range)
        self.sigma_log_range = tuple(float(v) for v in self.sigma_log_range)
        self.validate()

    def validate(self) -> None:
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError("count must be a positive integer")
        for name in ("mu_range", "sigma_log_range"):
            lo_hi = getattr(self, name)
            if len(lo_hi) != 2 or not lo_hi[0] <= lo_hi[1]:
                raise ConfigError("%s must be [lo, hi] with lo <= hi" % name)
        if not self.beta_true > 0:
            raise ConfigError("beta_true must be positive")
        if not 0.0 <= self.mismatch_rate <= 1.0:
            raise ConfigError("mismatch_rate must lie in [0, 1]")
        if not self.mismatch_spread >= 1.0:
            raise ConfigError("mismatch_spread must be >= 1")
        if self.mismatch_direction not in ("both", "up", "down"):
            raise ConfigError("mismatch_direction must be one of both, up, down")
        if self.pi_override is not None and not 0.0 <= self.pi_override <= 1.0:
            raise ConfigError("pi_override must lie in [0, 1]")
        if not 0 <= int(self.seed) < 1 << 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        self.alphabet_obj()

    def alphabet_obj(self) -> Alphabet:
        return Alphabet.parse(self.alphabet)

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ConfigError("unknown synth config keys: %s" % ", ".join(sorted(extra)))
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "SynthConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("synth config is not valid JSON: %s" % exc) from None
        if not isinstance(doc, dict):
            raise ConfigError("synth config must be a JSON object")
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass(frozen=True, eq=False)
class SynthData:
    """Generated latents plus the ground truth behind them."""

    batch: LatentBatch
    sigma_true: np.ndarray
    residual: np.ndarray
    beta_true: float


def _f32(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64).astype(np.float32).astype(np.float64)


def gen_dataset(config: SynthConfig, start: int = 0, stop: int | None = None) -> SynthData:
    """Generate symbols ``start:stop`` (default all) of the dataset."""
    stop = config.count if stop is None else min(stop, config.count)
    seed = int(config.seed)
    idx = np.arange(start, stop, dtype=np.uint64)
    lo, hi = config.mu_range
    mu = _f32(lo + (hi - lo) * hash_uniform(seed, idx, _S_MU))
    slo, shi = config.sigma_log_range
    expo = slo + (shi - slo) * hash_uniform(seed, idx, _S_SIGMA)
    sigma_true = _f32(ggd_math.clamp_sigma(np.asarray(ggd_math.exp(expo * _LN10))))
    beta_true = float(ggd_math.clamp_beta(float(config.beta_true)))
    resid = ggd_residuals(seed, idx, sigma_true, beta_true)
    alpha = config.alphabet_obj()
    y = np.clip(round_half_away(mu + resid), alpha.min_sym, alpha.max_sym)

    coded_sigma = sigma_true.copy()
    if config.mismatch_rate > 0:
        hit = hash_uniform(seed, idx, _S_MISMATCH) < config.mismatch_rate
        if config.mismatch_direction == "both":
            up = hash_uniform(seed, idx, _S_MISMATCH_DIR) < 0.5
        else:
            up = np.full(idx.size, config.mismatch_direction == "up")
        factor = np.where(up, config.mismatch_spread, 1.0 / config.mismatch_spread)
        coded_sigma = np.where(hit, coded_sigma * factor, coded_sigma)
    coded_beta = beta_true if config.coded_beta is None else float(config.coded_beta)
    if config.pi_override is None:
        pi = oracle_pi(mu, sigma_true, beta_true)
    else:
        pi = np.full(idx.size, float(config.pi_override))
    params = ParamTable(mu, coded_sigma, np.full(idx.size, coded_beta), pi)
    return SynthData(LatentBatch(y, params), sigma_true, resid, beta_true)


def gen_latents(config: SynthConfig) -> LatentBatch:
    """Symbols and coded side information for the whole dataset."""
    return gen_dataset(config).batch
