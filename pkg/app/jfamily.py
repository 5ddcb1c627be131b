"""Branch values of j(x) = 1 / (1 - 4 w(x)^2), w = x^(6 chi) + lambda x + u.

The totally ramified value 0 at infinity is exact; everything else is floating
point with explicit tolerances.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from app.config import POLE_TOLERANCE, ROOT_TOLERANCE
from app.errors import LatticeError, NonPositiveChi, RootFindFailure

logger = logging.getLogger(__name__)

# critical values closer than this are reported once
VALUE_MERGE_TOLERANCE = 1e-9

SCAN_COLUMNS = [
    "lambda_re",
    "lambda_im",
    "u_re",
    "u_im",
    "min_modulus",
    "max_bounded_modulus",
    "pole_flag",
]


class PoleMarker(str, Enum):
    POLE = "pole"


@dataclass(frozen=True)
class JFamilyPoint:
    chi: int
    lam: complex
    u: complex

    def __post_init__(self):
        if self.chi < 1:
            raise NonPositiveChi(f"chi must be positive, got {self.chi}")

    @property
    def degree(self) -> int:
        return 12 * self.chi

    def w_coefficients(self) -> np.ndarray:
        """Coefficients of w, highest degree first (numpy polynomial order)."""
        coeffs = np.zeros(6 * self.chi + 1, dtype=complex)
        coeffs[0] = 1
        coeffs[-2] = self.lam
        coeffs[-1] = self.u
        return coeffs


@dataclass(frozen=True)
class BranchReport:
    finite_critical_values: Tuple[complex, ...]
    has_infinite_branch_value: bool
    min_nonzero_modulus: float
    degree: int
    ramification_at_infinity: int
    critical_points: Tuple[complex, ...]
    max_residual: float
    max_bounded_modulus: float


def w_eval(pt: JFamilyPoint, x: complex) -> complex:
    return x ** (6 * pt.chi) + pt.lam * x + pt.u


def j_eval(pt: JFamilyPoint, x: complex, pole_tol: float = POLE_TOLERANCE) -> Union[complex, PoleMarker]:
    w = w_eval(pt, complex(x))
    denominator = 1 - 4 * w * w
    if abs(denominator) < pole_tol:
        return PoleMarker.POLE
    return 1 / denominator


def _polish(derivative: np.ndarray, roots: np.ndarray, steps: int = 3) -> np.ndarray:
    second = np.polyder(derivative)
    x = roots.astype(complex)
    for _ in range(steps):
        value = np.polyval(derivative, x)
        slope = np.polyval(second, x)
        # multiple roots (lambda = 0) sit at x = 0 with zero slope and are already exact
        movable = (slope != 0) & (value != 0)
        x[movable] = x[movable] - value[movable] / slope[movable]
    return x


def _merge(values: List[complex]) -> Tuple[complex, ...]:
    merged: List[complex] = []
    for v in sorted(values, key=lambda z: (round(z.real, 9), round(z.imag, 9))):
        if not any(abs(v - m) < VALUE_MERGE_TOLERANCE for m in merged):
            merged.append(v)
    return tuple(merged)


def branch_values(
    pt: JFamilyPoint,
    tol: float = ROOT_TOLERANCE,
    pole_tol: float = POLE_TOLERANCE,
) -> BranchReport:
    if tol <= 0:
        raise LatticeError(f"tolerance must be positive, got {tol}")

    derivative = np.polyder(pt.w_coefficients())
    critical = _polish(derivative, np.roots(derivative))
    if len(critical) != 6 * pt.chi - 1:
        raise RootFindFailure(f"found {len(critical)} critical points, expected {6 * pt.chi - 1}")

    residuals = np.abs(np.polyval(derivative, critical))
    max_residual = float(residuals.max()) if len(residuals) else 0.0
    if max_residual >= tol:
        raise RootFindFailure(f"root residual {max_residual:.3e} exceeds tolerance {tol:.1e}")

    finite: List[complex] = []
    has_pole = False
    for x in critical:
        value = j_eval(pt, complex(x), pole_tol=pole_tol)
        if value is PoleMarker.POLE:
            has_pole = True
        else:
            finite.append(complex(value))
    # w always has zeros, and j - 1 = 4w^2 / (1 - 4w^2) vanishes to order >= 2 there
    finite.append(1 + 0j)

    values = _merge(finite)
    moduli = [abs(v) for v in values]
    if min(moduli) == 0:
        raise RuntimeError("j has numerator 1 and cannot vanish at a finite point")

    return BranchReport(
        finite_critical_values=values,
        has_infinite_branch_value=has_pole,
        min_nonzero_modulus=min(moduli),
        degree=pt.degree,
        ramification_at_infinity=pt.degree,
        critical_points=tuple(complex(x) for x in critical),
        max_residual=max_residual,
        max_bounded_modulus=max(moduli),
    )


def analytic_lower_bound(chi: int, radius: float) -> float:
    """Lower bound for |j| at finite critical values when |lambda|, |u| <= radius.

    Critical points of w satisfy |x| <= rho = (radius / 6 chi)^(1 / (6 chi - 1)), so
    |w| <= B = rho^(6 chi) + radius rho + radius there, and |j| >= 1 / (1 + 4 B^2).
    Zeros of w give j = 1, which also satisfies the bound.
    """
    if chi < 1:
        raise NonPositiveChi(f"chi must be positive, got {chi}")
    if radius < 0:
        raise LatticeError(f"radius must be nonnegative, got {radius}")
    rho = (radius / (6 * chi)) ** (1 / (6 * chi - 1))
    bound = rho ** (6 * chi) + radius * rho + radius
    return 1 / (1 + 4 * bound * bound)


@dataclass(frozen=True)
class ScanSummary:
    chi: int
    radius: float
    samples: int
    seed: int
    min_nonzero_modulus: float
    max_bounded_modulus: float
    pole_samples: int
    max_residual: float
    analytic_bound: float
    bound_holds: bool
    table: pd.DataFrame = field(compare=False, repr=False)

    def write_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.table.to_csv(path, index=False, float_format="%.12e")
        logger.info(f"Wrote {len(self.table)} scan rows to {path}")
        return path


def _disc_samples(rng: np.random.Generator, radius: float, count: int) -> np.ndarray:
    modulus = radius * np.sqrt(rng.random(count))
    angle = 2 * np.pi * rng.random(count)
    return modulus * np.exp(1j * angle)


def scan_polydisc(
    chi: int,
    radius: float,
    samples: int,
    seed: int,
    tol: float = ROOT_TOLERANCE,
    pole_tol: float = POLE_TOLERANCE,
) -> ScanSummary:
    """Branch reports for uniform (lambda, u) in the polydisc of the given radius.

    The summary only takes minima and maxima over samples, so it does not depend on
    the order in which samples are evaluated.
    """
    if chi < 1:
        raise NonPositiveChi(f"chi must be positive, got {chi}")
    if radius < 0:
        raise LatticeError(f"radius must be nonnegative, got {radius}")
    if samples < 1:
        raise LatticeError(f"samples must be at least 1, got {samples}")

    rng = np.random.default_rng(seed)
    lams = _disc_samples(rng, radius, samples)
    us = _disc_samples(rng, radius, samples)

    rows = []
    max_residual = 0.0
    for lam, u in zip(lams, us):
        report = branch_values(JFamilyPoint(chi=chi, lam=complex(lam), u=complex(u)), tol=tol, pole_tol=pole_tol)
        max_residual = max(max_residual, report.max_residual)
        rows.append({
            "lambda_re": lam.real,
            "lambda_im": lam.imag,
            "u_re": u.real,
            "u_im": u.imag,
            "min_modulus": report.min_nonzero_modulus,
            "max_bounded_modulus": report.max_bounded_modulus,
            "pole_flag": report.has_infinite_branch_value,
        })
    table = pd.DataFrame(rows, columns=SCAN_COLUMNS)

    bound = analytic_lower_bound(chi, radius)
    min_modulus = float(table["min_modulus"].min())
    summary = ScanSummary(
        chi=chi,
        radius=radius,
        samples=samples,
        seed=seed,
        min_nonzero_modulus=min_modulus,
        max_bounded_modulus=float(table["max_bounded_modulus"].max()),
        pole_samples=int(table["pole_flag"].sum()),
        max_residual=max_residual,
        analytic_bound=bound,
        bound_holds=min_modulus >= bound - VALUE_MERGE_TOLERANCE,
        table=table,
    )
    logger.info(
        f"Scanned {samples} samples (chi={chi}, radius={radius}): "
        f"min |j| = {min_modulus:.6f}, bound {bound:.6f}"
    )
    return summary
