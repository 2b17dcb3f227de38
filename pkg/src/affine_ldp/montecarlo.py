"""Monte Carlo checks of the closed forms: full-truncation Euler simulation.

Paths are generated in fixed-size blocks, each driven by its own Philox
stream keyed by ``(seed, block index)``, so a given path is the same no matter
how many worker threads run the blocks.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .limit import boundary_limits
from .mgf import explosion_time
from .params import ModelParams, OutOfRangeError

BLOCK_SIZE = 1 << 16


class Scheme(enum.Enum):
    FULL_TRUNCATION_EULER = "FULL_TRUNCATION_EULER"


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    dt: float
    t_final: float
    seed: int = 0
    scheme: Scheme = Scheme.FULL_TRUNCATION_EULER
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        if not (0 < self.dt <= self.t_final):
            raise ValueError("need 0 < dt <= t_final")
        if self.antithetic and self.n_paths % 2:
            raise ValueError("antithetic sampling needs an even number of paths")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(self.t_final / self.dt - 1e-9))


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_effective: int
    unstable: bool = False
    one_sided: bool = False


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _simulate_block(p: ModelParams, c: SimConfig, block: int, size: int,
                    times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Snapshots of (X, V^+) at each of ``times`` (given as step indices)."""
    rng = _block_rng(c.seed, block)
    n = c.n_steps
    dt = c.t_final / n
    sdt = math.sqrt(dt)
    rho, sa = p.rho, p.sqrt_alpha
    rho_bar2 = 1.0 - rho * rho

    x = np.full(size, p.x0)
    v = np.full(size, p.v0)
    xs = np.empty((len(times), size))
    vs = np.empty((len(times), size))
    half = size // 2 if c.antithetic else size
    snap = 0
    for step in range(1, n + 1):
        z = rng.standard_normal((2, half))
        if c.antithetic:
            # paths 2k and 2k+1 are an antithetic pair
            z = np.stack([z, -z], axis=-1).reshape(2, size)
        vp = np.maximum(v, 0.0)
        sv = np.sqrt(vp)
        dw1 = sdt * z[0]
        x += -0.5 * (p.a + vp) * dt + rho * sv * dw1 + np.sqrt(p.a + rho_bar2 * vp) * (sdt * z[1])
        v += (p.b + p.beta * vp) * dt + sa * sv * dw1
        while snap < len(times) and times[snap] == step:
            xs[snap] = x
            vs[snap] = np.maximum(v, 0.0)
            snap += 1
    return xs, vs


def simulate_snapshots(p: ModelParams, c: SimConfig,
                       times: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """X and V^+ at each requested time, arrays of shape (len(times), n_paths).

    Times are rounded to the step grid of ``c`` (``t_final / n_steps``).
    With ``c.antithetic`` paths 2k and 2k+1 are driven by opposite normals.
    """
    n = c.n_steps
    dt = c.t_final / n
    steps = np.array([max(1, min(n, round(t / dt))) for t in times])
    order = np.argsort(steps, kind="stable")
    sorted_steps = steps[order]

    sizes = []
    left = c.n_paths
    while left > 0:
        sizes.append(min(BLOCK_SIZE, left))
        left -= sizes[-1]
    if c.antithetic and any(s % 2 for s in sizes):
        raise ValueError("antithetic sampling needs even block sizes")

    def run(block: int):
        return _simulate_block(p, c, block, sizes[block], sorted_steps)

    if c.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=c.workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    xs = np.concatenate([xp for xp, _ in parts], axis=1)
    vs = np.concatenate([vp for _, vp in parts], axis=1)
    inverse = np.empty_like(order)
    inverse[order] = np.arange(len(order))
    return xs[inverse], vs[inverse]


def simulate_terminal(p: ModelParams, c: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Samples of (X_T, V_T) at T = c.t_final; V_T is floored at zero."""
    xs, vs = simulate_snapshots(p, c, [c.t_final])
    return xs[0], vs[0]


def mgf_estimate(u: float, log_returns: np.ndarray) -> McEstimate:
    """log of the sample mean of exp(u (X_t - X_0)), delta-method error.

    ``unstable`` is set when the largest 1% of weights carry more than half
    of the sum.
    """
    if u == 0.0:
        return McEstimate(0.0, 0.0, int(log_returns.size))
    z = u * log_returns
    shift = float(np.max(z))
    w = np.exp(z - shift)
    n = w.size
    total = float(np.sum(w))
    mean = total / n
    std_err = float(np.std(w, ddof=1)) / math.sqrt(n) / mean if n > 1 else math.inf
    n_eff = int(total * total / float(np.sum(w * w)))
    k = max(1, n // 100)
    top = float(np.sum(np.partition(w, n - k)[n - k:]))
    return McEstimate(math.log(mean) + shift, std_err, max(n_eff, 1), top > 0.5 * total)


def mc_mgf_check(u: float, t: float, p: ModelParams, c: SimConfig) -> McEstimate:
    """Monte Carlo estimate of Lambda_t(u) = log E[exp(u X_t)]."""
    if explosion_time(u, p) <= t:
        raise OutOfRangeError(f"u={u} is outside the domain at t={t}")
    x, _ = simulate_terminal(p, replace(c, t_final=t, dt=min(c.dt, t)))
    est = mgf_estimate(u, x - p.x0)
    if explosion_time(2.0 * u, p) <= t:
        # the estimator has infinite variance
        est = replace(est, unstable=True)
    return est


def tail_rate_estimate(x: float, t: float, log_returns: np.ndarray) -> McEstimate:
    """-t^-1 log of the fraction of paths with X_t / t >= x.

    With no hits the value is the bound log(n)/t and ``one_sided`` is set.
    """
    n = log_returns.size
    hits = int(np.count_nonzero(log_returns >= x * t))
    if hits == 0:
        return McEstimate(math.log(n) / t, math.inf, n, one_sided=True)
    frac = hits / n
    value = -math.log(frac) / t
    std_err = math.sqrt(frac * (1.0 - frac) / n) / (frac * t)
    return McEstimate(value, std_err, n)


def mc_ldp_rate(x: float, t_grid: Sequence[float], p: ModelParams,
                c: SimConfig) -> list[McEstimate]:
    """Empirical right-tail decay rates along ``t_grid`` from one set of paths."""
    L = boundary_limits(p)
    if x < L.dlam0_plus:
        raise OutOfRangeError(
            f"right-tail rate needs x >= Lambda'_+(0) = {L.dlam0_plus}; use -X for the left tail")
    t_max = max(t_grid)
    xs, _ = simulate_snapshots(p, replace(c, t_final=t_max, dt=min(c.dt, t_max)), t_grid)
    return [tail_rate_estimate(x, t, row - p.x0) for t, row in zip(t_grid, xs)]
