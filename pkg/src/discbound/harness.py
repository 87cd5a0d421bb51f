"""Monte Carlo checks of the discrepancy bounds and the figure data behind them."""
from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from .constants import AW_A, BoundQuery, ConstantProfile, Variant, bound_c
from .discrepancy import (
    discrepancy_lower_bound,
    extreme_discrepancy_exact,
    star_discrepancy_exact,
)
from .errors import DomainError
from .matrix import MatrixSource, prefix

__all__ = [
    "CellRecord",
    "VerificationReport",
    "FigureData",
    "STAR_EXACT_LIMIT",
    "EXTREME_EXACT_LIMIT",
    "FINITE_SET_C",
    "verify_bounds",
    "bernstein_bound",
    "BernsteinCheck",
    "bernstein_empirical_check",
    "emit_figure",
    "write_csv",
]

STAR_EXACT_LIMIT = 10**6
EXTREME_EXACT_LIMIT = 10**8
# best known c for finite point sets, D* <= c sqrt(s/N)
FINITE_SET_C = 2.4968

_KIND_VARIANTS = {
    "star": (Variant.STAR, Variant.AW_DEP, Variant.AW_CONST),
    "extreme": (Variant.EXTREME,),
}


@dataclass(frozen=True)
class CellRecord:
    seed: int
    s: int
    N: int
    discrepancy: float
    exact: bool
    bound: float

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.bound


@dataclass
class VerificationReport:
    alpha: float
    beta: float
    variant: Variant
    kind: str
    grid: list[tuple[int, int, int]]
    records: list[CellRecord] = field(default_factory=list)

    @property
    def pass_fraction(self) -> float:
        """Fraction of seeds whose cells all pass (1 for an empty report)."""
        by_seed: dict[int, bool] = {}
        for r in self.records:
            by_seed[r.seed] = by_seed.get(r.seed, True) and r.passed
        if not by_seed:
            return 1.0
        return sum(by_seed.values()) / len(by_seed)

    def to_rows(self) -> tuple[list[str], list[list]]:
        header = ["seed", "s", "N", "discrepancy", "exact", "bound", "pass"]
        rows = [
            [r.seed, r.s, r.N, r.discrepancy, int(r.exact), r.bound, int(r.passed)]
            for r in self.records
        ]
        return header, rows


def _cell_discrepancy(points, kind: str, trials: int, rng_seed: int):
    n, s = points.n, points.s
    if kind == "star" and (n + 1) ** s <= STAR_EXACT_LIMIT:
        return star_discrepancy_exact(points)
    if kind == "extreme" and (n + 2) ** (2 * s) <= EXTREME_EXACT_LIMIT:
        return extreme_discrepancy_exact(points)
    return discrepancy_lower_bound(points, kind, trials, rng_seed)


def _estimator_seed(seed: int, s: int, N: int) -> int:
    ss = np.random.SeedSequence([seed & ((1 << 64) - 1), s, N])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def verify_bounds(
    seeds: Iterable[int],
    s_list: Sequence[int],
    N_list: Sequence[int],
    alpha: float = 1.73,
    beta: float = 1.73,
    variant: "Variant | str" = Variant.STAR,
    kind: str = "star",
    trials_for_estimate: int = 100_000,
    tol: float = 1e-6,
) -> VerificationReport:
    """Compare discrepancies of seeded matrix prefixes against ``c(N, s) sqrt(s/N)``.

    Exact discrepancies are used while the critical grid is small enough,
    otherwise the randomised lower bound (a failing lower bound is a genuine
    failure; a passing one is only consistent with the bound).
    """
    variant = Variant.parse(variant)
    if kind not in _KIND_VARIANTS:
        raise DomainError(f"kind must be 'star' or 'extreme', got {kind!r}")
    if variant not in _KIND_VARIANTS[kind]:
        raise DomainError(f"variant {variant.value!r} does not bound the {kind} discrepancy")
    if any(N < 2 for N in N_list):
        raise DomainError("every N must be >= 2")
    profile = ConstantProfile(variant, alpha, beta, tol)
    grid = sorted({(int(seed), int(s), int(N)) for seed in seeds for s in s_list for N in N_list})
    report = VerificationReport(alpha, beta, variant, kind, grid)
    for seed, s, N in grid:
        points = prefix(MatrixSource(seed), N, s).points
        res = _cell_discrepancy(points, kind, trials_for_estimate, _estimator_seed(seed, s, N))
        bound = bound_c(profile, BoundQuery(N, s)) * math.sqrt(s / N)
        report.records.append(CellRecord(seed, s, N, res.value, res.exact, bound))
    return report


def bernstein_bound(t: float, M: float, sigma_sq_sum: float) -> float:
    """Maximal Bernstein tail ``2 exp(-t^2 / (2 sum sigma^2 + 2 M t / 3))``."""
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    if not M > 0.0:
        raise DomainError(f"M must be > 0, got {M!r}")
    if not sigma_sq_sum >= 0.0:
        raise DomainError(f"sigma_sq_sum must be >= 0, got {sigma_sq_sum!r}")
    return 2.0 * math.exp(-t * t / (2.0 * sigma_sq_sum + 2.0 * M * t / 3.0))


@dataclass(frozen=True)
class BernsteinCheck:
    n: int
    t: float
    trials: int
    empirical: float
    bound: float
    standard_error: float

    @property
    def holds(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.standard_error


def bernstein_empirical_check(n: int, trials: int, t: float, rng_seed: int = 0) -> BernsteinCheck:
    """Empirical ``P(max_k |S_k| > t)`` for ``Z_i = 1{U_i < 1/2} - 1/2``.

    Compared with the Bernstein bound at ``M = 1`` and ``sum sigma^2 = n / 4``.
    """
    if n < 1 or trials < 1:
        raise DomainError(f"n and trials must be >= 1, got n={n}, trials={trials}")
    bound = bernstein_bound(t, 1.0, n / 4.0)
    rng = np.random.default_rng(rng_seed)
    exceed = 0
    batch = max(1, (1 << 22) // n)
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        steps = np.where(rng.random((k, n)) < 0.5, 1, -1).astype(np.int32)
        # S_k = (partial sum of +-1) / 2
        walk = np.abs(np.cumsum(steps, axis=1)).max(axis=1)
        exceed += int(np.count_nonzero(walk > 2.0 * t))
        done += k
    p = exceed / trials
    return BernsteinCheck(n, t, trials, p, bound, math.sqrt(p * (1.0 - p) / trials))


@dataclass
class FigureData:
    figure_id: int
    columns: list[str]
    rows: list[list]


def _figure1(alpha: float, beta: float, tol: float) -> FigureData:
    s = 10
    profiles = {
        "cStarOurs": ConstantProfile(Variant.STAR, alpha, beta, tol),
        "cExtremeOurs": ConstantProfile(Variant.EXTREME, alpha, beta, tol),
        "cAwConst": ConstantProfile(Variant.AW_CONST, alpha, beta, tol),
        "cAwDep": ConstantProfile(Variant.AW_DEP, alpha, beta, tol),
    }
    columns = ["N", *profiles, "cFiniteSet"]
    rows = []
    for e in range(1, 21):
        N = 2**e
        q = BoundQuery(N, s)
        rows.append([N, *(bound_c(p, q) for p in profiles.values()), FINITE_SET_C])
    return FigureData(1, columns, rows)


def _figure2(alpha: float, beta: float, tol: float) -> FigureData:
    star = ConstantProfile(Variant.STAR, alpha, beta, tol)
    extreme = ConstantProfile(Variant.EXTREME, alpha, beta, tol)
    aw = ConstantProfile(Variant.AW_DEP, alpha, beta, tol)
    rows = [[s, star.A(s), extreme.A(s), aw.A(s), AW_A] for s in range(1, 201)]
    return FigureData(2, ["s", "A_star", "A_extreme", "A_awDep", "A_awConst"], rows)


def _figure3(alpha: float, beta: float, tol: float) -> FigureData:
    extreme = ConstantProfile(Variant.EXTREME, alpha, beta, tol)
    return FigureData(3, ["s", "A_extreme"], [[s, extreme.A(s)] for s in range(1, 401)])


def emit_figure(figure_id: int, alpha: float = 1.73, beta: float = 1.73, tol: float = 1e-6) -> FigureData:
    """Data series of figure 1 (c against N at s=10), 2 (A_s, s<=200) or 3 (A_extreme, s<=400)."""
    builders = {1: _figure1, 2: _figure2, 3: _figure3}
    try:
        build = builders[int(figure_id)]
    except (KeyError, ValueError):
        raise DomainError(f"figure id must be 1, 2 or 3, got {figure_id!r}") from None
    return build(alpha, beta, tol)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(target: Union[str, os.PathLike, TextIO], columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Header row plus one line per row; floats in shortest round-trip form."""
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, columns, rows)
        return
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    target.write(buf.getvalue())
