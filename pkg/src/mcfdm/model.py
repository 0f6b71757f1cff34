"""Domain types, payoffs, boundary data, and grid construction shared by every solver."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "AlphaProfile",
    "Discretization",
    "Edge",
    "MarketParams",
    "Method",
    "OptionContract",
    "OptionKind",
    "PriceSurface",
    "PricingResult",
    "boundary_value",
    "build_grid",
    "payoff",
]

# relative slack for floating-point tau/grid consistency checks
_REL_TOL = 1e-9


class OptionKind(enum.Enum):
    CALL = "call"
    PUT = "put"


class AlphaProfile(enum.Enum):
    """Local volatility profile alpha(S) used by the convection tuning integral."""

    CONSTANT = "constant"        # alpha(S) = sigma
    PROPORTIONAL = "proportional"  # alpha(S) = sigma * S


class Edge(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class Method(enum.Enum):
    MCFDM = "MCFDM"
    CFDM = "CFDM"
    MONTE_CARLO = "MonteCarlo"
    EXACT = "Exact"


@dataclass(frozen=True, slots=True)
class MarketParams:
    """Risk-free rate, volatility, and the local volatility profile alpha(S).

    Parameters
    ----------
    r : float
        Risk-free rate per year. Must be nonnegative.
    sigma : float
        Volatility per square-root year. Must be positive.
    alpha_profile : AlphaProfile
        Shape of alpha(S); only enters the convection tuning factor.
    """

    r: float
    sigma: float
    alpha_profile: AlphaProfile = AlphaProfile.CONSTANT

    def __post_init__(self) -> None:
        if not math.isfinite(self.r) or self.r < 0.0:
            raise ValidationError(f"r must be finite and >= 0, got {self.r}")
        if not math.isfinite(self.sigma) or self.sigma <= 0.0:
            raise ValidationError(f"sigma must be finite and > 0, got {self.sigma}")
        if not isinstance(self.alpha_profile, AlphaProfile):
            raise ValidationError(f"unknown alpha profile: {self.alpha_profile!r}")

    def alpha(self, s: float) -> float:
        """Evaluate alpha(S) at a single price level."""
        if self.alpha_profile is AlphaProfile.PROPORTIONAL:
            return self.sigma * s
        return self.sigma

    def alpha_values(self, s: np.ndarray) -> np.ndarray:
        """Vectorized alpha(S) over an array of price levels."""
        if self.alpha_profile is AlphaProfile.PROPORTIONAL:
            return self.sigma * s
        return np.full_like(s, self.sigma, dtype=float)


@dataclass(frozen=True, slots=True)
class OptionContract:
    kind: OptionKind
    strike: float
    maturity: float
    spot: float

    def __post_init__(self) -> None:
        if not isinstance(self.kind, OptionKind):
            raise ValidationError(f"unknown option kind: {self.kind!r}")
        for name in ("strike", "maturity", "spot"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValidationError(f"{name} must be finite and > 0, got {value}")


@dataclass(frozen=True, slots=True)
class Discretization:
    """Uniform price/time grid: nodes S_i = i*ds for i in 0..n_space, steps of dt."""

    s_max: float
    n_space: int
    n_time: int
    ds: float
    dt: float

    def __post_init__(self) -> None:
        if not isinstance(self.n_space, int) or self.n_space < 4:
            raise ValidationError(f"n_space must be an int >= 4, got {self.n_space}")
        if not isinstance(self.n_time, int) or self.n_time < 1:
            raise ValidationError(f"n_time must be an int >= 1, got {self.n_time}")
        if not math.isfinite(self.s_max) or self.s_max <= 0.0:
            raise ValidationError(f"s_max must be finite and > 0, got {self.s_max}")
        if not math.isfinite(self.ds) or self.ds <= 0.0:
            raise ValidationError(f"ds must be finite and > 0, got {self.ds}")
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise ValidationError(f"dt must be finite and > 0, got {self.dt}")
        if abs(self.ds * self.n_space - self.s_max) > _REL_TOL * max(1.0, self.s_max):
            raise ValidationError(
                f"inconsistent grid: ds*n_space={self.ds * self.n_space!r} "
                f"but s_max={self.s_max!r}"
            )

    def nodes(self) -> np.ndarray:
        return np.arange(self.n_space + 1) * self.ds


@dataclass(frozen=True, slots=True)
class PriceSurface:
    """Option values on the grid, one row per backward-time level.

    ``values[0]`` is the maturity payoff and ``values[n_time]`` the valuation
    date. Values produced by a stable solve are nonnegative; use
    :meth:`is_nonnegative` to verify a surface written by a diagnostic run.
    """

    values: np.ndarray
    disc: Discretization

    def __post_init__(self) -> None:
        expected = (self.disc.n_time + 1, self.disc.n_space + 1)
        if self.values.shape != expected:
            raise ValidationError(
                f"surface shape {self.values.shape} does not match grid {expected}"
            )

    def level(self, n: int) -> np.ndarray:
        return self.values[n]

    def is_nonnegative(self, tol: float = 0.0) -> bool:
        return bool(self.values.min() >= -tol)


@dataclass(frozen=True, slots=True)
class PricingResult:
    """Price at (S0, valuation date) plus error, timing, and method metadata."""

    method: Method
    price: float
    abs_error: float
    elapsed_seconds: float
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.abs_error < 0.0:
            raise ValidationError(f"abs_error must be >= 0, got {self.abs_error}")
        if self.elapsed_seconds < 0.0:
            raise ValidationError(
                f"elapsed_seconds must be >= 0, got {self.elapsed_seconds}"
            )


def payoff(contract: OptionContract, s):
    """Terminal payoff at price level(s) ``s``.

    Accepts a scalar or an array; returns the same shape. Negative price
    levels are rejected.
    """
    arr = np.asarray(s, dtype=float)
    if arr.size and float(arr.min()) < 0.0:
        raise ValidationError("price level must be >= 0")
    if contract.kind is OptionKind.CALL:
        out = np.maximum(arr - contract.strike, 0.0)
    else:
        out = np.maximum(contract.strike - arr, 0.0)
    if np.ndim(s) == 0:
        return float(out)
    return out


def boundary_value(
    contract: OptionContract,
    market: MarketParams,
    edge: Edge,
    tau: float,
    *,
    s_max: float | None = None,
) -> float:
    """Dirichlet boundary value at backward time ``tau`` = T - t.

    Calls are worthless at S=0 and asymptotically linear at the upper
    truncation boundary; puts mirror this. The upper call value needs the
    truncation level ``s_max``.
    """
    if not 0.0 <= tau <= contract.maturity * (1.0 + _REL_TOL):
        raise ValidationError(
            f"tau must lie in [0, maturity], got {tau} with T={contract.maturity}"
        )
    if not isinstance(edge, Edge):
        raise ValidationError(f"unknown edge: {edge!r}")
    discounted_strike = contract.strike * math.exp(-market.r * tau)
    if contract.kind is OptionKind.CALL:
        if edge is Edge.LOWER:
            return 0.0
        if s_max is None:
            raise ValidationError("upper call boundary requires s_max")
        return s_max - discounted_strike
    if edge is Edge.LOWER:
        return discounted_strike
    return 0.0


def build_grid(
    contract: OptionContract,
    n_space: int = 100,
    n_time: int = 1000,
    s_max: float | str = "auto",
) -> Discretization:
    """Build a uniform grid for the contract.

    The ``"auto"`` policy targets ``4 * max(spot, strike)`` and then nudges
    ``ds`` (keeping ``n_space`` intervals) so the spot falls exactly on a
    node whenever an interior node index exists for it; solvers interpolate
    linearly when it does not. An explicit ``s_max`` is used as given and
    must exceed ``max(spot, strike)``.
    """
    if not isinstance(n_space, int) or n_space < 4:
        raise ValidationError(f"n_space must be an int >= 4, got {n_space}")
    if not isinstance(n_time, int) or n_time < 1:
        raise ValidationError(f"n_time must be an int >= 1, got {n_time}")
    anchor = max(contract.spot, contract.strike)
    if s_max == "auto":
        target = 4.0 * anchor
        ds = target / n_space
        node = round(contract.spot / ds)
        if 0 < node < n_space:
            ds = contract.spot / node
        grid_max = ds * n_space
    else:
        grid_max = float(s_max)
        if not math.isfinite(grid_max) or grid_max <= anchor:
            raise ValidationError(
                f"s_max must exceed max(spot, strike)={anchor}, got {s_max}"
            )
        ds = grid_max / n_space
    return Discretization(
        s_max=grid_max,
        n_space=n_space,
        n_time=n_time,
        ds=ds,
        dt=contract.maturity / n_time,
    )
