"""Numerical certificate for the density endgame.

The unknowns are the class densities (a, b, c, d) with a >= b >= c >= 0,
d >= 0 and a + b + c + d = 1. With d eliminated each slack is a quadratic in
x = (a, b, c):

    g1 = c^2 + cd - tau^2                          = c - ac - bc - tau^2
    g2 = a^2 + 2b^2 + 2c^2 + 2bd + 2cd - (1/2 + 7/2 tau^2)
       = a^2 + 2b + 2c - 2ab - 2ac - 4bc - (1/2 + 7/2 tau^2)
    g3 = a^2 + b^2 + c^2 + d(a + b + c) - (1/2 + 3/2 tau^2)
       = a + b + c - 2ab - 2ac - 2bc - (1/2 + 3/2 tau^2)

A point is feasible iff g1 >= 0, g2 >= 0 and g3 > 0. On a box with centre x0
and half-width w every quadratic g = x'Qx + p'x + r satisfies

    g(x0 + h) <= g(x0) + w * sum|grad g(x0)| + w^2 * sum|Q|

which is the bound used to exclude a box away from the tangent point.

The closed system (g3 >= 0) is met at exactly one point,
p* = (1 - 2 tau, tau, tau, 0), where all three slacks vanish. No box holding
p* can be excluded by the sign of a bound, so boxes near p* are settled by a
second bound. Write e = 1 - 2 tau - a and s = sqrt(d^2 + 4 tau^2). From
g1 >= 0, c >= (s - d) / 2, so 0 <= b - c <= 1 - a - s <= e. Then

    g2 = 2(a - 2 tau)(a - 1 + 2 tau) + (b - c)^2 - d^2
       <= e * (e - 2(a - 2 tau)) - d^2

and on a box where k = e - 2(a - 2 tau) is bounded above by a negative
number, g2 >= 0 forces e = d = 0 and b = c, which is p*. There g3 = 0, so
the strict inequality fails and the box is excluded. Such boxes are counted
as tangent.
"""

import logging
import math
import time
from collections.abc import Iterator
from typing import Union

import numpy as np

from rainbow_mantel.config import Config, Constants
from rainbow_mantel.models import (
    Box,
    Certificate,
    CertificationError,
    ChainStep,
    SimplexPoint,
    Slack,
    ValidationError,
)

logger = logging.getLogger(__name__)

TAU = Constants.TAU
TAU2 = Constants.TAU_SQUARED

# (Q, p, r) of each slack as a quadratic in (a, b, c)
_QUADRATICS = (
    (
        np.array([[0.0, 0.0, -0.5], [0.0, 0.0, -0.5], [-0.5, -0.5, 0.0]]),
        np.array([0.0, 0.0, 1.0]),
        -Constants.RHS_G1,
    ),
    (
        np.array([[1.0, -1.0, -1.0], [-1.0, 0.0, -2.0], [-1.0, -2.0, 0.0]]),
        np.array([0.0, 2.0, 2.0]),
        -Constants.RHS_G2,
    ),
    (
        np.array([[0.0, -1.0, -1.0], [-1.0, 0.0, -1.0], [-1.0, -1.0, 0.0]]),
        np.array([1.0, 1.0, 1.0]),
        -Constants.RHS_G3,
    ),
)
_Q_ABS_SUM = np.array([float(np.abs(q).sum()) for q, _, _ in _QUADRATICS])

# absorbs rounding in the bound evaluation; makes exclusion slightly harder
_FLOAT_GUARD = 1e-12

TANGENT_POINT = (1.0 - 2.0 * TAU, TAU, TAU, 0.0)


# === IDENTITIES AND POINT EVALUATION ===


def check_tau_identities() -> dict[str, float]:
    """Absolute residuals of the identities satisfied by tau."""
    t, t2 = TAU, TAU2
    return {
        "9t^2-8t+1": abs(9 * t2 - 8 * t + 1),
        "1/2+7t^2/2-(1-4t+8t^2)": abs(0.5 + 3.5 * t2 - (1 - 4 * t + 8 * t2)),
        "1/2+9t^2/2-4t": abs(0.5 + 4.5 * t2 - 4 * t),
        "2-8t+10t^2-(1+t^2)": abs(2 - 8 * t + 10 * t2 - (1 + t2)),
        "8t-8t^2-(1+t^2)": abs(8 * t - 8 * t2 - (1 + t2)),
    }


def identities_hold(
    identities: dict[str, float], tolerance: float = Config.IDENTITY_TOLERANCE
) -> bool:
    return all(residual < tolerance for residual in identities.values())


def validate_point(p: SimplexPoint) -> None:
    """Require non-negative densities summing to 1 with a >= b >= c.

    Raises:
        ValidationError: If the point is off the ordered simplex
    """
    if min(p.as_tuple()) < 0:
        raise ValidationError(f"densities must be non-negative: {p.as_tuple()}")
    if abs(sum(p.as_tuple()) - 1.0) > Config.IDENTITY_TOLERANCE:
        raise ValidationError(f"densities must sum to 1: {p.as_tuple()}")
    if not p.a >= p.b >= p.c:
        raise ValidationError(f"need a >= b >= c: {p.as_tuple()}")


def eval_constraints(p: SimplexPoint) -> tuple[float, float, float]:
    """Slacks (g1, g2, g3) at a point of the ordered simplex.

    Raises:
        ValidationError: If the point is off the ordered simplex
    """
    validate_point(p)
    a, b, c, d = p.as_tuple()
    g1 = c * c + c * d - Constants.RHS_G1
    g2 = a * a + 2 * b * b + 2 * c * c + 2 * b * d + 2 * c * d - Constants.RHS_G2
    g3 = a * a + b * b + c * c + d * (a + b + c) - Constants.RHS_G3
    return g1, g2, g3


def is_feasible(p: SimplexPoint) -> bool:
    g1, g2, g3 = eval_constraints(p)
    return g1 >= 0 and g2 >= 0 and g3 > 0


def slacks_abc(points: np.ndarray) -> np.ndarray:
    """Slacks of an (N, 3) array of (a, b, c) points, d = 1 - a - b - c; shape (3, N)."""
    x = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return np.stack(
        [np.einsum("ni,ij,nj->n", x, q, x) + x @ p + r for q, p, r in _QUADRATICS]
    )


def upper_bounds(
    centers: np.ndarray, half_width: Union[float, np.ndarray]
) -> np.ndarray:
    """Rigorous upper bound of each slack over cubes around ``centers``; shape (3, N)."""
    x = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    w = np.asarray(half_width, dtype=np.float64)
    bounds = []
    for (q, p, r), q_abs in zip(_QUADRATICS, _Q_ABS_SUM):
        value = np.einsum("ni,ij,nj->n", x, q, x) + x @ p + r
        gradient = 2.0 * x @ q + p
        bounds.append(value + w * np.abs(gradient).sum(axis=1) + w * w * q_abs)
    return np.stack(bounds) + _FLOAT_GUARD


# === BOX DECOMPOSITION ===


def _grid_slices(resolution: int) -> Iterator[np.ndarray]:
    """Centres of grid cells that can meet the ordered simplex, one a-slice at a time.

    A cell (ia, ib, ic) is kept when ib <= ia + 1, ic <= ib + 1 and
    ia + ib + ic <= resolution, which every cell meeting the set satisfies.
    """
    for ia in range(resolution):
        ib = np.arange(min(ia + 1, resolution - 1) + 1)
        ic = np.arange(resolution)
        grid_b, grid_c = np.meshgrid(ib, ic, indexing="ij")
        keep = (grid_c <= grid_b + 1) & (ia + grid_b + grid_c <= resolution)
        grid_b, grid_c = grid_b[keep], grid_c[keep]
        if grid_b.size == 0:
            continue
        centers = np.empty((grid_b.size, 3))
        centers[:, 0] = ia + 0.5
        centers[:, 1] = grid_b + 0.5
        centers[:, 2] = grid_c + 0.5
        yield centers / resolution


def _children(centers: np.ndarray, half_width: float) -> np.ndarray:
    """The eight half-size sub-cubes of each cube that can still meet the set."""
    offsets = np.array(
        [[sa, sb, sc] for sa in (-1, 1) for sb in (-1, 1) for sc in (-1, 1)],
        dtype=np.float64,
    ) * (half_width / 2)
    kids = (centers[:, None, :] + offsets[None, :, :]).reshape(-1, 3)
    w = half_width / 2
    lo, hi = kids - w, kids + w
    keep = (hi[:, 1] >= lo[:, 2]) & (hi[:, 0] >= lo[:, 1]) & (lo.sum(axis=1) <= 1.0)
    return kids[keep]


def tangent_bounds(
    centers: np.ndarray, half_width: Union[float, np.ndarray]
) -> np.ndarray:
    """Upper bound of k = 1 + 2 tau - 3a over cubes around ``centers``; shape (N,).

    A negative value means g1 >= 0 and g2 >= 0 meet in the cube only at p*.
    """
    x = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    a_low = x[:, 0] - np.asarray(half_width, dtype=np.float64)
    return 1.0 + 2.0 * TAU - 3.0 * a_low + _FLOAT_GUARD


def _inside_tangent_ball(
    centers: np.ndarray, half_width: float, radius: float
) -> np.ndarray:
    p_star = np.array(TANGENT_POINT[:3])
    return np.all(np.abs(centers - p_star) + half_width <= radius, axis=1)


def _to_box(center: np.ndarray, half_width: float) -> Box:
    lo = center - half_width
    hi = center + half_width
    d_lo = max(0.0, 1.0 - float(hi.sum()))
    d_hi = max(0.0, 1.0 - float(lo.sum()))
    return Box(
        lower=(float(lo[0]), float(lo[1]), float(lo[2]), d_lo),
        upper=(float(hi[0]), float(hi[1]), float(hi[2]), d_hi),
    )


class _Tally:
    def __init__(self) -> None:
        self.total = 0
        self.excluded_by = {s.value: 0 for s in Slack}
        self.tangent = 0
        self.undecided: list[Box] = []
        self.worst_margin = -math.inf

    def classify(
        self,
        centers: np.ndarray,
        half_width: float,
        radius: float,
        last_level: bool,
    ) -> np.ndarray:
        """Settle what can be settled; return centres that need refinement."""
        if centers.size == 0:
            return centers
        bounds = upper_bounds(centers, half_width)
        best = bounds.argmin(axis=0)
        margin = bounds.min(axis=0)
        excluded = margin < 0
        for index, slack in enumerate(Slack):
            hits = excluded & (best == index)
            self.excluded_by[slack.value] += int(np.count_nonzero(hits))
        if excluded.any():
            self.worst_margin = max(self.worst_margin, float(margin[excluded].max()))

        rest = centers[~excluded]
        tangent = _inside_tangent_ball(rest, half_width, radius) & (
            tangent_bounds(rest, half_width) < 0
        )
        self.tangent += int(np.count_nonzero(tangent))
        rest = rest[~tangent]
        self.total += int(np.count_nonzero(excluded)) + int(np.count_nonzero(tangent))
        if last_level:
            self.total += len(rest)
            self.undecided.extend(_to_box(c, half_width) for c in rest)
            return rest[:0]
        return rest


def sample_tangent_ball(
    radius: float, samples: int, rng: np.random.Generator
) -> tuple[int, int]:
    """Sample the ball around p* inside the ordered simplex.

    Returns:
        (points in the set, points with g1 >= 0, g2 >= 0 and g3 > 0)
    """
    p_star = np.array(TANGENT_POINT[:3])
    x = p_star + rng.uniform(-radius, radius, size=(samples, 3))
    inside = (
        (x[:, 0] >= x[:, 1])
        & (x[:, 1] >= x[:, 2])
        & (x[:, 2] >= 0)
        & (x.sum(axis=1) <= 1.0)
    )
    x = x[inside]
    g = slacks_abc(x)
    violations = (g[0] >= 0) & (g[1] >= 0) & (g[2] > 0)
    return len(x), int(np.count_nonzero(violations))


def certify_infeasible(
    resolution: int = Config.DEFAULT_RESOLUTION,
    max_depth: int = Config.MAX_REFINE_DEPTH,
    seed: int = Config.DEFAULT_SEED,
    tangent_samples: int = Config.TANGENT_SAMPLES,
    tangent_radius: float = Config.TANGENT_RADIUS,
) -> Certificate:
    """Cover the ordered simplex by boxes and exclude each one.

    Cells of side 1/resolution that no bound excludes are bisected up to
    ``max_depth`` times; whatever is still open is reported as undecided.

    Raises:
        ValidationError: If resolution < 1, max_depth < 0, or the tangent
            ball leaves the region a >= 1/2 where the local argument holds
    """
    if resolution < 1:
        raise ValidationError(f"resolution must be positive, got {resolution}")
    if max_depth < 0:
        raise ValidationError(f"max_depth must be non-negative, got {max_depth}")
    if TANGENT_POINT[0] - tangent_radius < 0.5:
        raise ValidationError(f"tangent radius {tangent_radius} reaches below a = 1/2")
    start = time.perf_counter()
    tally = _Tally()
    half_width = 0.5 / resolution

    pending = []
    for centers in _grid_slices(resolution):
        rest = tally.classify(centers, half_width, tangent_radius, max_depth == 0)
        if rest.size:
            pending.append(rest)
    open_cells = np.concatenate(pending) if pending else np.empty((0, 3))

    for depth in range(1, max_depth + 1):
        if open_cells.size == 0:
            break
        logger.debug("depth %d: refining %d boxes", depth, len(open_cells))
        open_cells = _children(open_cells, half_width)
        half_width /= 2
        open_cells = tally.classify(
            open_cells, half_width, tangent_radius, depth == max_depth
        )

    checked, violations = sample_tangent_ball(
        tangent_radius, tangent_samples, np.random.default_rng(seed)
    )
    a, b, c, d = TANGENT_POINT
    certificate = Certificate(
        resolution=resolution,
        max_depth=max_depth,
        boxes_total=tally.total,
        boxes_excluded_by=tally.excluded_by,
        undecided=tally.undecided,
        tangent_boxes=tally.tangent,
        tangent_point=TANGENT_POINT,
        tangent_radius=tangent_radius,
        tangent_slacks=eval_constraints(SimplexPoint(a, b, c, d)),
        tangent_samples=checked,
        tangent_violations=violations,
        worst_margin=tally.worst_margin,
        identities=check_tau_identities(),
        tolerance=Config.IDENTITY_TOLERANCE,
        seconds=time.perf_counter() - start,
    )
    logger.info(
        "certificate r=%d: %d boxes, %d tangent, %d undecided",
        resolution,
        certificate.boxes_total,
        certificate.tangent_boxes,
        len(certificate.undecided),
    )
    return certificate


# === DERIVED CHAIN ===


def _root(d: np.ndarray) -> np.ndarray:
    return np.sqrt(d * d + 4 * TAU2)


def sample_ordered_simplex(samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of {a >= b >= c >= 0, d >= 0, a + b + c + d = 1}; shape (N, 4)."""
    x = rng.dirichlet(np.ones(4), size=samples)
    x[:, :3] = -np.sort(-x[:, :3], axis=1)
    return x


def _step(name: str, antecedent: np.ndarray, holds: np.ndarray) -> ChainStep:
    return ChainStep(
        name=name,
        checked=int(np.count_nonzero(antecedent)),
        violations=int(np.count_nonzero(antecedent & ~holds)),
    )


def derived_chain_checks(
    samples: int = Config.CHAIN_SAMPLES,
    seed: int = Config.DEFAULT_SEED,
    tolerance: float = Config.IDENTITY_TOLERANCE,
) -> list[ChainStep]:
    """Check each implication of the derived chain on sampled points meeting its premise."""
    x = sample_ordered_simplex(samples, np.random.default_rng(seed))
    a, b, c, d = x.T
    q = _root(d)
    g = slacks_abc(x[:, :3])
    g1_ok, g2_ok, g3_ok = g[0] >= 0, g[1] >= 0, g[2] > 0
    window = (a >= 2 * TAU) & (a <= 1 - 2 * TAU)
    a_floor = math.sqrt(1 / 12 + TAU2 / 2)
    c_floor = (-d + q) / 2
    b_floor = (d + q) / 2

    steps = [
        _step("quadratic_formula", g1_ok, c >= c_floor - tolerance),
        _step(
            "a_upper",
            g1_ok,
            (a <= 1 - q + tolerance) & (1 - q <= 1 - 2 * TAU + tolerance),
        ),
        _step("a_lower", g3_ok, a >= a_floor - tolerance),
        _step(
            "a_lower_constant",
            np.array([True]),
            np.array([a_floor >= 2 * TAU]),
        ),
        _step("a_window", np.array([True]), np.array([1 - 2 * TAU >= 2 * TAU])),
        _step(
            "window_square",
            window,
            a * a + (1 - a) ** 2 <= 1 - 4 * TAU + 8 * TAU2 + tolerance,
        ),
        _step("b_minus_c", g2_ok & window, b - c >= d - tolerance),
        _step("d_third", b - c >= d, d <= 1 / 3 + tolerance),
        _step(
            "sum_of_squares_bound",
            (c >= c_floor) & (b >= b_floor),
            a * a + b * b + c * c + d * (1 - d)
            <= 1 + 2 * d * d - d + 6 * TAU2 - 2 * (1 - d) * q + tolerance,
        ),
    ]

    grid = np.linspace(0.0, 1.0, max(2, samples))
    lhs = 2 * (1 - grid) * _root(grid)
    rhs = 4 * TAU + 2 * grid * grid - grid
    d_star = final_d_bound()
    steps.append(
        _step("final_inequality", lhs < rhs - tolerance, grid > d_star - tolerance)
    )
    for step in steps:
        logger.info(
            "%s: %d checked, %d violations", step.name, step.checked, step.violations
        )
    return steps


def final_d_bound() -> float:
    """(1 - 2 tau^2 + sqrt((1 - 2 tau^2)^2 + 16 (1 - 23 tau^2))) / 8, about 0.48547.

    Raises:
        CertificationError: If the bound does not exceed 1/3
    """
    base = 1 - 2 * TAU2
    value = (base + math.sqrt(base * base + 16 * (1 - 23 * TAU2))) / 8
    if not value > 1 / 3:
        raise CertificationError(f"final bound {value} does not exceed 1/3")
    return value
