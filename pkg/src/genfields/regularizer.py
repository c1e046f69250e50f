"""Per-channel Gaussian statistics over style vectors and the log-likelihood term.

Style-space samples for a dataset are summarized by independent per-channel
Gaussians (diagonal model only).  The log-likelihood of a style vector under
those statistics,

    L(S) = - sum_i (s_i - mu_i)^2 / (2 sigma_i^2),

is used as a regularization term: maximizing it keeps an edited style vector
close to the data manifold.  The per-channel sigma_i sits inside the sum; a
single shared scale would contradict per-channel statistics.  L(S) <= 0
always, with equality exactly at the mean.

The analytic gradient is provided for optimizer use and is cross-checked
against central finite differences in the test suite.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelStats",
    "estimate_stats",
    "log_likelihood",
    "log_likelihood_grad",
    "regularized_objective",
    "stats_csv",
    "parse_stats_csv",
    "save_stats_csv",
    "load_stats_csv",
]

DEFAULT_EPSILON_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class ChannelStats:
    """Per-channel mean and standard deviation, with a positive sigma floor.

    ``sample_count`` is 0 for statistics loaded from a file, which does not
    record it.
    """

    mu: np.ndarray
    sigma: np.ndarray
    sample_count: int
    epsilon_floor: float

    def __post_init__(self):
        if self.mu.shape != self.sigma.shape or self.mu.ndim != 1:
            raise ValueError(
                f"mu and sigma must be 1-D vectors of equal length, got "
                f"{self.mu.shape} and {self.sigma.shape}"
            )
        if self.epsilon_floor <= 0.0:
            raise ValueError(f"epsilon_floor must be positive, got {self.epsilon_floor}")
        if np.any(self.sigma < self.epsilon_floor):
            raise ValueError("every sigma must be at least the epsilon floor")

    @property
    def dims(self) -> int:
        return self.mu.size


def _as_matrix(styles) -> np.ndarray:
    arr = np.asarray(styles, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a (samples, dims) matrix of style vectors, got shape {arr.shape}")
    return arr


def estimate_stats(styles, epsilon_floor: float = DEFAULT_EPSILON_FLOOR) -> ChannelStats:
    """Per-channel mean and population standard deviation of a style dataset.

    Standard deviations below ``epsilon_floor`` (e.g. constant channels) are
    raised to the floor so downstream divisions stay finite.
    """
    arr = _as_matrix(styles)
    if arr.shape[0] < 2:
        raise ValueError(f"need at least 2 style vectors to estimate statistics, got {arr.shape[0]}")
    mu = arr.mean(axis=0)
    sigma = np.maximum(arr.std(axis=0), epsilon_floor)
    return ChannelStats(mu=mu, sigma=sigma, sample_count=arr.shape[0], epsilon_floor=epsilon_floor)


def _check_vector(s, stats: ChannelStats) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if arr.ndim != 1 or arr.size != stats.dims:
        raise ValueError(f"style vector has shape {arr.shape}, expected ({stats.dims},)")
    return arr


def log_likelihood(s, stats: ChannelStats) -> float:
    """Diagonal-Gaussian log-likelihood of a style vector (additive constants dropped)."""
    arr = _check_vector(s, stats)
    z = (arr - stats.mu) / stats.sigma
    return float(-0.5 * np.dot(z, z))


def log_likelihood_grad(s, stats: ChannelStats) -> np.ndarray:
    """Gradient of :func:`log_likelihood`: -(s_i - mu_i) / sigma_i^2."""
    arr = _check_vector(s, stats)
    return -(arr - stats.mu) / (stats.sigma**2)


def regularized_objective(base_loss: float, s, stats: ChannelStats, weight: float) -> float:
    """Add the style regularization term -L(S), scaled by ``weight``, to a loss.

    No default weight is provided; the trade-off against the base loss is a
    caller decision.
    """
    if weight < 0.0:
        raise ValueError(f"weight must be >= 0, got {weight}")
    return base_loss + weight * (-log_likelihood(s, stats))


def stats_csv(stats: ChannelStats) -> str:
    """Render statistics as CSV with columns dim,mu,sigma at full precision."""
    buf = io.StringIO()
    buf.write("dim,mu,sigma\n")
    for d in range(stats.dims):
        buf.write(f"{d},{float(stats.mu[d])!r},{float(stats.sigma[d])!r}\n")
    return buf.getvalue()


def parse_stats_csv(text: str, epsilon_floor: float = DEFAULT_EPSILON_FLOOR) -> ChannelStats:
    """Parse a dim,mu,sigma CSV.  Rows must be dense and ordered 0..D-1.

    Lines starting with ``#`` (report header blocks) are ignored.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and not row[0].lstrip().startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != ["dim", "mu", "sigma"]:
        raise ValueError("statistics CSV must start with header dim,mu,sigma")
    mu = []
    sigma = []
    for i, row in enumerate(rows[1:]):
        if len(row) != 3:
            raise ValueError(f"statistics CSV row {i + 1}: expected 3 columns, got {len(row)}")
        try:
            d = int(row[0])
            m = float(row[1])
            sd = float(row[2])
        except ValueError as exc:
            raise ValueError(f"statistics CSV row {i + 1}: {exc}") from exc
        if d != i:
            raise ValueError(f"statistics CSV row {i + 1}: expected dim {i}, got {d}")
        mu.append(m)
        sigma.append(sd)
    if not mu:
        raise ValueError("statistics CSV has no data rows")
    return ChannelStats(
        mu=np.array(mu),
        sigma=np.maximum(np.array(sigma), epsilon_floor),
        sample_count=0,
        epsilon_floor=epsilon_floor,
    )


def save_stats_csv(stats: ChannelStats, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(stats_csv(stats))


def load_stats_csv(path: str, epsilon_floor: float = DEFAULT_EPSILON_FLOOR) -> ChannelStats:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_stats_csv(fh.read(), epsilon_floor)
