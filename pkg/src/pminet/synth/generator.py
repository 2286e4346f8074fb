"""Synthetic market with planted structure.

Algorithm ``pminet-synth-v1``, in order:

1. ``SeedSequence(seed).spawn(n_blocks + n_tickers)`` gives one PCG64 stream
   per block factor followed by one per ticker. A ticker's stream is used by
   that ticker alone, so generation order cannot change the output.
2. Each block draws a standard normal factor f_b of length m. Each ticker
   draws two standard normal vectors (e_i, u_i) and starts from
   r_i = sqrt(c) f_b + sqrt(1 - c) e_i, which has unit variance.
3. Mediation chains (x, z, y), in order, with coupling ρ:
   r_z = ρ r_x + sqrt(1 - ρ²) u_z, then r_y = ρ s(q(r_z)) + sqrt(1 - ρ²) u_y
   where q is the rank state of r_z under the same floor(rank·4/m) rule
   that ``discretize_quartiles`` applies, and s standardizes it. Y depends on
   Z only through q(Z), so X and Y are independent given the quartile state
   of Z in every sample, not just in population.
4. Nonlinear pairs (x, y, tag), in order, with coupling β:
   r_y = β g(r_x) + sqrt(1 - β²) u_y, with g an even standardized transform
   (``square``: (x² - 1)/sqrt(2); ``abs``: (|x| - sqrt(2/π))/sqrt(1 - 2/π)),
   so r_y has zero linear correlation with r_x.
5. Returns are scaled by ``volatility``; prices start at 100 and compound
   the returns on consecutive business days from 2000-01-03.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from pminet.ingest.prices import PriceSeries, SectorMap
from pminet.ingest.transform import ReturnSeries, discretize_quartiles

logger = structlog.get_logger(__name__)

ALGORITHM = "pminet-synth-v1"
START_PRICE = 100.0
START_DATE = "2000-01-03"

CHAIN_BINS = 4

NONLINEAR_TRANSFORMS = ("square", "abs")


class SynthSpecError(ValueError):
    """Raised when a synthetic market specification is invalid."""

    pass


@dataclass(frozen=True)
class SynthSpec:
    """Shape and planted structure of a synthetic market.

    Attributes:
        n_tickers: Number of tickers
        m_samples: Number of returns per ticker
        sectors: Block sizes, summing to n_tickers; each block is one sector
        coupling: Share of variance explained by the block factor, in [0, 1)
        chains: Mediation chains (source, mediator, target) by ticker index
        nonlinear_pairs: (x, y, transform) with transform ``square`` or ``abs``
        seed: Non-negative seed
        chain_coupling: ρ used along mediation chains, in (0, 1)
        nonlinear_coupling: β used for nonlinear pairs, in (0, 1)
        volatility: Scale of the returns
    """

    n_tickers: int
    m_samples: int
    sectors: tuple[int, ...]
    coupling: float = 0.0
    chains: tuple[tuple[int, int, int], ...] = ()
    nonlinear_pairs: tuple[tuple[int, int, str], ...] = ()
    seed: int = 0
    chain_coupling: float = 0.95
    nonlinear_coupling: float = 0.9
    volatility: float = 0.01

    def __post_init__(self) -> None:
        """Validate sizes, couplings and indices.

        Raises:
            SynthSpecError: If any field is out of range or inconsistent
        """
        if self.n_tickers < 2:
            raise SynthSpecError(f"n_tickers must be >= 2, got {self.n_tickers}")
        if self.m_samples < 2:
            raise SynthSpecError(f"m_samples must be >= 2, got {self.m_samples}")
        if not self.sectors or any(size < 1 for size in self.sectors):
            raise SynthSpecError("sectors must be a non-empty list of positive block sizes")
        if sum(self.sectors) != self.n_tickers:
            total = sum(self.sectors)
            raise SynthSpecError(f"block sizes sum to {total}, expected {self.n_tickers}")
        if not 0.0 <= self.coupling < 1.0:
            raise SynthSpecError(f"coupling must be in [0, 1), got {self.coupling}")
        for name in ("chain_coupling", "nonlinear_coupling"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise SynthSpecError(f"{name} must be in (0, 1), got {value}")
        if self.volatility <= 0:
            raise SynthSpecError(f"volatility must be > 0, got {self.volatility}")
        if self.seed < 0:
            raise SynthSpecError(f"seed must be >= 0, got {self.seed}")

        if self.chains and self.m_samples < CHAIN_BINS:
            raise SynthSpecError(
                f"chains need m_samples >= {CHAIN_BINS} to fill the quartiles, got {self.m_samples}"
            )

        derived: list[int] = []
        for chain in self.chains:
            self._check_indices(chain, "chain")
            if len(set(chain)) != 3:
                raise SynthSpecError(f"chain {chain} must name three distinct tickers")
            derived.extend(chain[1:])
        for x, y, tag in self.nonlinear_pairs:
            self._check_indices((x, y), "nonlinear pair")
            if x == y:
                raise SynthSpecError(f"nonlinear pair ({x}, {y}) must name two tickers")
            if tag not in NONLINEAR_TRANSFORMS:
                raise SynthSpecError(
                    f"unknown transform '{tag}'; expected one of {', '.join(NONLINEAR_TRANSFORMS)}"
                )
            derived.append(y)
        if len(set(derived)) != len(derived):
            raise SynthSpecError("a ticker can be derived (mediator or target) only once")

    def _check_indices(self, indices: tuple[int, ...], what: str) -> None:
        for index in indices:
            if not 0 <= index < self.n_tickers:
                raise SynthSpecError(f"{what} index {index} out of range [0, {self.n_tickers})")

    @property
    def tickers(self) -> list[str]:
        """Generated ticker names, S001, S002, ..."""
        width = max(3, len(str(self.n_tickers)))
        return [f"S{i + 1:0{width}d}" for i in range(self.n_tickers)]

    @property
    def sector_labels(self) -> list[str]:
        """Sector of each ticker: B1 for the first block, B2 for the second, ..."""
        return [f"B{b + 1}" for b, size in enumerate(self.sectors) for _ in range(size)]

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation with lists in place of tuples."""
        data = asdict(self)
        data["sectors"] = list(self.sectors)
        data["chains"] = [list(c) for c in self.chains]
        data["nonlinear_pairs"] = [list(p) for p in self.nonlinear_pairs]
        return data


@dataclass(frozen=True, eq=False)
class SynthResult:
    """Generated market and its ground truth.

    Attributes:
        spec: The specification it was generated from
        returns: One return series per ticker
        prices: One price series per ticker, m + 1 prices each
        sectors: Planted sector of every ticker
    """

    spec: SynthSpec
    returns: list[ReturnSeries]
    prices: list[PriceSeries]
    sectors: SectorMap = field(default_factory=lambda: SectorMap({}))

    def truth(self) -> dict[str, Any]:
        """Ground-truth record for the JSON sidecar."""
        tickers = self.spec.tickers
        return {
            "algorithm": ALGORITHM,
            "spec": self.spec.to_dict(),
            "tickers": tickers,
            "sectors": dict(self.sectors.sectors),
            "chains": [
                {"source": tickers[x], "mediator": tickers[z], "target": tickers[y]}
                for x, z, y in self.spec.chains
            ],
            "nonlinear_pairs": [
                {"x": tickers[x], "y": tickers[y], "transform": tag}
                for x, y, tag in self.spec.nonlinear_pairs
            ],
        }


def _standardized_quartile(ticker: str, values: NDArray[np.float64]) -> NDArray[np.float64]:
    states = discretize_quartiles(ReturnSeries(ticker, values), bins=CHAIN_BINS).states
    quartile = states.astype(np.float64)
    return (quartile - quartile.mean()) / quartile.std()


def _even_transform(values: NDArray[np.float64], tag: str) -> NDArray[np.float64]:
    if tag == "square":
        return (values**2 - 1.0) / math.sqrt(2.0)
    mean = math.sqrt(2.0 / math.pi)
    return (np.abs(values) - mean) / math.sqrt(1.0 - 2.0 / math.pi)


def generate(spec: SynthSpec) -> SynthResult:
    """Generate a synthetic market.

    Args:
        spec: Validated specification

    Returns:
        SynthResult; the same spec always yields bit-identical output

    Example:
        >>> result = generate(SynthSpec(n_tickers=6, m_samples=500, sectors=(3, 3), seed=7))
        >>> len(result.returns)
        6
    """
    n, m = spec.n_tickers, spec.m_samples
    n_blocks = len(spec.sectors)
    children = np.random.SeedSequence(spec.seed).spawn(n_blocks + n)
    streams = [np.random.Generator(np.random.PCG64(child)) for child in children]
    factors = np.stack([rng.standard_normal(m) for rng in streams[:n_blocks]])
    draws = np.stack([rng.standard_normal((2, m)) for rng in streams[n_blocks:]])
    base_noise, extra_noise = draws[:, 0, :], draws[:, 1, :]

    block_of = np.repeat(np.arange(n_blocks), spec.sectors)
    c = spec.coupling
    returns = np.sqrt(c) * factors[block_of] + np.sqrt(1.0 - c) * base_noise

    tickers = spec.tickers
    rho = spec.chain_coupling
    rho_noise = math.sqrt(1.0 - rho**2)
    for x, z, y in spec.chains:
        returns[z] = rho * returns[x] + rho_noise * extra_noise[z]
        mediator = _standardized_quartile(tickers[z], returns[z])
        returns[y] = rho * mediator + rho_noise * extra_noise[y]

    beta = spec.nonlinear_coupling
    beta_noise = math.sqrt(1.0 - beta**2)
    for x, y, tag in spec.nonlinear_pairs:
        returns[y] = beta * _even_transform(returns[x], tag) + beta_noise * extra_noise[y]

    returns = returns * spec.volatility
    dates = tuple(d.strftime("%Y-%m-%d") for d in pd.bdate_range(START_DATE, periods=m + 1))
    log_prices = np.log(START_PRICE) + np.concatenate(
        [np.zeros((n, 1)), np.cumsum(returns, axis=1)], axis=1
    )

    return_series = [ReturnSeries(t, returns[i], dates[1:]) for i, t in enumerate(tickers)]
    price_series = [PriceSeries(t, dates, np.exp(log_prices[i])) for i, t in enumerate(tickers)]
    sectors = SectorMap(dict(zip(tickers, spec.sector_labels, strict=True)))
    logger.info(
        "synthetic_market_generated",
        n_tickers=n,
        m_samples=m,
        blocks=n_blocks,
        chains=len(spec.chains),
        nonlinear_pairs=len(spec.nonlinear_pairs),
        seed=spec.seed,
    )
    return SynthResult(spec=spec, returns=return_series, prices=price_series, sectors=sectors)
