"""Seeded Monte Carlo estimates of the game's expected outcomes.

Trials are split into fixed-size chunks. Chunk ``i`` draws from a Philox
stream keyed by ``SeedSequence(seed, spawn_key=(i,))``, so its randomness is
a pure function of (seed, chunk index). Chunk moments are merged in chunk
order, which makes the report identical for any number of workers.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import to_rational
from .model import GameConfig

CHUNK_SIZE = 1 << 16
RNG_NAME = "numpy.Philox/SeedSequence-v1"

# per-trial statistics tracked jointly (order matters for the covariance)
_STATS = (
    "fund",
    "provision",
    "agent",
    "distributor",
    "complaint_rate",
    "contrib_sum",
    "contrib_count",
    "defect_sum",
    "defect_count",
)

MEANS = (
    "mean_fund",
    "mean_provision",
    "mean_agent_payoff_contributors",
    "mean_agent_payoff_defectors",
    "mean_agent_payoff",
    "mean_distributor_payoff",
    "complaint_rate",
)


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    seed: int
    n: int
    k: int
    a: str
    b: str
    z: str
    p: str
    tau: int
    cutoff: int
    rng: str
    mean_fund: float
    mean_provision: float
    mean_agent_payoff_contributors: float | None
    mean_agent_payoff_defectors: float | None
    mean_agent_payoff: float
    mean_distributor_payoff: float
    complaint_rate: float
    standard_errors: dict[str, float | None]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


class _Moments:
    """Running count, mean vector and co-moment matrix (Chan et al. merge)."""

    def __init__(self, dim: int):
        self.count = 0
        self.mean = np.zeros(dim)
        self.comoment = np.zeros((dim, dim))

    @classmethod
    def of(cls, data: np.ndarray) -> "_Moments":
        m = cls(data.shape[1])
        m.count = data.shape[0]
        m.mean = data.mean(axis=0)
        centered = data - m.mean
        m.comoment = centered.T @ centered
        return m

    def merge(self, other: "_Moments") -> None:
        if other.count == 0:
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.comoment = self.comoment + other.comoment + np.outer(delta, delta) * (self.count * other.count / total)
        self.mean = self.mean + delta * (other.count / total)
        self.count = total

    def cov(self) -> np.ndarray:
        return self.comoment / (self.count - 1) if self.count > 1 else np.zeros_like(self.comoment)


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def draw_audits(rng: np.random.Generator, n: int, k: int, size: int) -> np.ndarray:
    """Boolean (size, n) mask with exactly k audited agents per row.

    Partial Fisher-Yates: k sequential draws without replacement, uniform over
    the C(n, k) subsets.
    """
    perm = np.tile(np.arange(n), (size, 1))
    rows = np.arange(size)
    for i in range(k):
        pick = i + rng.integers(0, n - i, size=size)
        head = perm[:, i].copy()
        perm[:, i] = perm[rows, pick]
        perm[rows, pick] = head
    mask = np.zeros((size, n), dtype=bool)
    mask[rows[:, None], perm[:, :k]] = True
    return mask


def _play(cfg_tuple, p: float, taus: np.ndarray, cutoff: int, t: np.ndarray, audited: np.ndarray) -> np.ndarray:
    """Vectorized realized play; same rules as :func:`pubgood.model.play_round`."""
    n, k, a, b, z = cfg_tuple
    fund = t.sum(axis=1) + (audited & ~t).sum(axis=1)
    g = np.where(fund >= cutoff, cutoff, 0)
    benefit = a * g
    caught = audited & ~t
    payoff = np.where(t, benefit[:, None] - 1.0, benefit[:, None])
    payoff = payoff - caught * (1.0 + z)
    complaints = (taus[None, :] > g[:, None]).sum(axis=1)
    distributor = fund - g + benefit - complaints * b
    contrib_count = t.sum(axis=1)
    contrib_sum = np.where(t, payoff, 0.0).sum(axis=1)
    return np.column_stack(
        [
            fund,
            g,
            payoff.mean(axis=1),
            distributor,
            complaints / n,
            contrib_sum,
            contrib_count,
            payoff.sum(axis=1) - contrib_sum,
            n - contrib_count,
        ]
    ).astype(np.float64)


def _run_chunk(args) -> _Moments:
    cfg_tuple, p, taus, cutoff, seed, chunk, size = args
    n = cfg_tuple[0]
    rng = chunk_rng(seed, chunk)
    t = rng.random((size, n)) < p
    audited = draw_audits(rng, n, cfg_tuple[1], size)
    return _Moments.of(_play(cfg_tuple, p, taus, cutoff, t, audited))


def _ratio(m: _Moments, cov: np.ndarray, num: int, den: int) -> tuple[float | None, float | None]:
    # pooled per-agent mean = sum / count over all trials; delta-method SE
    mu_s, mu_c = m.mean[num], m.mean[den]
    if mu_c == 0:
        return None, None
    r = mu_s / mu_c
    var = cov[num, num] - 2 * r * cov[num, den] + r * r * cov[den, den]
    return float(r), float(math.sqrt(max(var, 0.0) / m.count) / mu_c)


def simulate(
    cfg: GameConfig,
    p,
    tau: int,
    cutoff: int | None = None,
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> SimulationReport:
    n, k = cfg.n, cfg.k
    p = to_rational(p)
    cutoff = tau if cutoff is None else cutoff
    if not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not k <= tau <= n:
        raise ValueError(f"tau must satisfy k <= tau <= n, got tau={tau}")
    if not 0 <= cutoff <= n:
        raise ValueError(f"cutoff must lie in 0..n, got {cutoff}")

    cfg_tuple = (n, k, float(cfg.a), float(cfg.b), float(cfg.z))
    taus = np.full(n, tau)
    jobs = []
    for chunk, start in enumerate(range(0, trials, CHUNK_SIZE)):
        jobs.append((cfg_tuple, float(p), taus, cutoff, seed, chunk, min(CHUNK_SIZE, trials - start)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]

    total = _Moments(len(_STATS))
    for part in parts:
        total.merge(part)
    cov = total.cov()
    se = np.sqrt(np.diag(cov) / total.count)
    idx = {name: i for i, name in enumerate(_STATS)}

    contrib, contrib_se = _ratio(total, cov, idx["contrib_sum"], idx["contrib_count"])
    defect, defect_se = _ratio(total, cov, idx["defect_sum"], idx["defect_count"])
    plain = {
        "mean_fund": "fund",
        "mean_provision": "provision",
        "mean_agent_payoff": "agent",
        "mean_distributor_payoff": "distributor",
        "complaint_rate": "complaint_rate",
    }
    means = {key: float(total.mean[idx[stat]]) for key, stat in plain.items()}
    errors = {key: float(se[idx[stat]]) for key, stat in plain.items()}
    errors["mean_agent_payoff_contributors"] = contrib_se
    errors["mean_agent_payoff_defectors"] = defect_se

    return SimulationReport(
        trials=trials,
        seed=seed,
        n=n,
        k=k,
        a=str(cfg.a),
        b=str(cfg.b),
        z=str(cfg.z),
        p=str(p),
        tau=tau,
        cutoff=cutoff,
        rng=RNG_NAME,
        mean_agent_payoff_contributors=contrib,
        mean_agent_payoff_defectors=defect,
        standard_errors={key: errors[key] for key in MEANS},
        **means,
    )


def within(report: SimulationReport, exact: dict[str, Fraction], sigmas: float = 4.0) -> dict[str, bool]:
    """Which report means lie within ``sigmas`` standard errors of ``exact``.

    Means that were never observed (no contributors at p = 0, say) are omitted.
    A few ulps of slack cover statistics that are constant across trials,
    where the standard error is zero and only float rounding remains.
    """
    out = {}
    for key in MEANS:
        est = getattr(report, key)
        if est is None:
            continue
        target = float(exact[key])
        slack = 1e-12 * max(1.0, abs(target))
        out[key] = abs(est - target) <= sigmas * report.standard_errors[key] + slack
    return out
