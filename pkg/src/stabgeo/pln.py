"""Even quasi-concave functions as nested stacks of level bodies.

A ``LevelStack`` stores f(x) = max{ t_k : x in body_k } for decreasing
heights t_0 > t_1 > ... and nested coaxial bodies of revolution; it is the
step-function discretization of an even quasi-concave function.  Integrals
are exact layer-cake sums.  ``minimal_midpoint_stack`` builds the smallest
stack m with m((x+y)/2) >= sqrt(f(x) g(y)) level by level, as the convex
hull of Minkowski midpoints of level-body pairs whose heights multiply to
the squared output level, and ``pl_trace`` follows the resulting deficit
through the rescaled level bodies, the (alpha, beta, sigma, eta) profile
quantities, the I/J level dissection and the L1 distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bodies as _bodies
from . import fmp as _fmp
from . import pl1d as _pl1d
from .bodies import RevolutionBody
from .errors import EmptyFunctionError, NormalizationError, UnsupportedCombinationError
from .pl1d import GridFn1D, HALF_LINE

DEFAULT_LEVEL_COUNT = 64
DEFAULT_LEVEL_FLOOR = 1e-6
DEFAULT_R_SAMPLES = 33
DEFAULT_STACK_DIRECTIONS = 1024
_LOOKUP_RTOL = 1e-9


@dataclass(frozen=True)
class LevelStack:
    """Even quasi-concave function as (height, body) pairs, heights strictly
    decreasing, bodies nested and coaxial."""

    dim: int
    levels: np.ndarray
    bodies: tuple
    log_concave: bool = False

    def __post_init__(self):
        lv = np.ascontiguousarray(self.levels, dtype=float)
        bd = tuple(self.bodies)
        if len(lv) == 0 or len(lv) != len(bd):
            raise EmptyFunctionError("stack needs matching nonempty levels and bodies")
        if np.any(lv <= 0) or np.any(np.diff(lv) >= 0):
            raise ValueError("heights must be positive and strictly decreasing")
        for b in bd:
            if not isinstance(b, RevolutionBody) or b.dim != self.dim:
                raise UnsupportedCombinationError(
                    "stack bodies must be coaxial revolution bodies of the stack dimension"
                )
        theta = (np.arange(64) + 0.5) * math.pi / 64
        prev = None
        for b in bd:
            cur = _bodies.meridian_support(b, theta)
            if prev is not None:
                scale = max(float(np.max(cur)), 1.0)
                if np.max(prev - cur) > 1e-7 * scale:
                    raise ValueError("stack bodies are not nested")
            prev = cur
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "bodies", bd)
        if self.log_concave and len(bd) >= 3 and _geometric_ratio(lv) is not None:
            # log-concavity of the represented function: on a geometric level
            # grid the level-body supports must be concave in the level index
            # (midpoint bodies contain the Minkowski midpoints of their
            # neighbours).  Note the level-volume profile itself need not be
            # log-concave in t, so it cannot serve as the certificate.
            S = np.vstack([_bodies.meridian_support(b, theta) for b in bd])
            gap = 0.5 * (S[:-2] + S[2:]) - S[1:-1]
            if float(np.max(gap)) > 1e-6 * float(np.max(S)):
                raise ValueError("stack flagged log-concave fails the support check")

    @cached_property
    def volumes(self) -> np.ndarray:
        v = np.array([_bodies.volume(b) for b in self.bodies])
        v.setflags(write=False)
        return v

    def body_index_at(self, t: float):
        """Index of the level body {f >= t} (tolerant at breakpoints), or
        None when t is above the top height."""
        tt = t * (1.0 - _LOOKUP_RTOL)
        count = int(np.count_nonzero(self.levels >= tt))
        return None if count == 0 else count - 1

    def body_at(self, t: float):
        k = self.body_index_at(t)
        return None if k is None else self.bodies[k]


def stack_integral(f: LevelStack) -> float:
    """Layer-cake sum: sum_k (t_k - t_{k+1}) |body_k| with t_{K+1} = 0."""
    widths = -np.diff(np.concatenate([f.levels, [0.0]]))
    return float(np.sum(widths * f.volumes))


def section_profile(f: LevelStack) -> GridFn1D:
    """t -> |{f >= t}| on the level grid, as a decreasing half-line function."""
    grid = f.levels[::-1].copy()
    vals = f.volumes[::-1].copy()
    lc = f.log_concave and _pl1d._log_concave_ok(grid, vals)
    return GridFn1D(grid, vals, HALF_LINE, log_concave=lc)


def normalize_probability(f: LevelStack) -> LevelStack:
    total = stack_integral(f)
    if total <= 0:
        raise EmptyFunctionError("cannot normalize a zero stack")
    return LevelStack(f.dim, f.levels / total, f.bodies, log_concave=f.log_concave)


def scale_stack(f: LevelStack, space_factor=1.0, level_factor=1.0) -> LevelStack:
    bd = tuple(_bodies.scale(b, space_factor) for b in f.bodies) \
        if space_factor != 1.0 else f.bodies
    return LevelStack(f.dim, f.levels * level_factor, bd, log_concave=f.log_concave)


def axis_dilated_stack(f: LevelStack, factor: float) -> LevelStack:
    """Stretch all level bodies along the axis and renormalize the heights,
    so a probability stack stays a probability stack."""
    bd = tuple(_bodies.dilate_axis(b, factor) for b in f.bodies)
    return LevelStack(f.dim, f.levels / factor, bd, log_concave=f.log_concave)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def stack_from_level_sets(dim, body_fn, levels, sampling="midpoint",
                          log_concave=False) -> LevelStack:
    """Discretize a continuum of level sets into a stack.

    ``body_fn(s)`` must return the level body {f >= s}.  With
    ``sampling="midpoint"`` the body stored at height t_k is taken at the
    geometric midpoint of the level cell (t_k, t_{k+1}), which makes the
    layer-cake sum second-order accurate in the level spacing; "exact"
    stores the level set at t_k itself.
    """
    levels = np.asarray(levels, dtype=float)
    if sampling == "exact":
        at = levels
    elif sampling == "midpoint":
        ratio = levels[-1] / levels[-2] if len(levels) >= 2 else 1.0
        below = np.concatenate([levels[1:], [levels[-1] * ratio]])
        at = np.sqrt(levels * below)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    bodies_ = tuple(body_fn(s) for s in at)
    return LevelStack(dim, levels, bodies_, log_concave=log_concave)


def gaussian_stack(dim, level_count=DEFAULT_LEVEL_COUNT, floor=DEFAULT_LEVEL_FLOOR,
                   axis_scale=1.0, samples=257, sampling="midpoint",
                   normalized=True) -> LevelStack:
    """Stack sampled from the Gaussian shape exp(-((x_axis/a)^2 + |x_perp|^2)/2)."""
    a = float(axis_scale)
    top = float(floor) ** (1.0 / (2.0 * level_count))
    levels = np.geomspace(top, top * floor, level_count)

    def body_fn(s):
        R = math.sqrt(2.0 * math.log(1.0 / s))
        return _bodies.revolution_ellipsoid(dim, a * R, R, samples)

    st = stack_from_level_sets(dim, body_fn, levels, sampling, log_concave=True)
    return normalize_probability(st) if normalized else st


def random_log_concave_stack(dim, rng, level_count=40, floor=1e-5, samples=257,
                             normalized=True) -> LevelStack:
    """Random even log-concave stack: exp(-max of random coaxial quadratics),
    whose level sets are intersections of coaxial ellipsoids."""
    k = int(rng.integers(1, 4))
    ax = rng.uniform(0.5, 2.0, size=k)
    cr = rng.uniform(0.5, 2.0, size=k)
    top = float(floor) ** (1.0 / (2.0 * level_count))
    levels = np.geomspace(top, top * floor, level_count)

    def body_fn(s):
        L = math.sqrt(2.0 * math.log(1.0 / s))

        def profile(t):
            r = np.full_like(t, np.inf)
            for a, c in zip(ax, cr):
                r = np.minimum(r, c * np.sqrt(np.maximum((a * L) ** 2 - t * t, 0.0)) / a)
            return r

        return _bodies.revolution_from_function(dim, profile, ax.max() * L, samples)

    st = stack_from_level_sets(dim, body_fn, levels, "midpoint", log_concave=True)
    return normalize_probability(st) if normalized else st


# ---------------------------------------------------------------------------
# minimal midpoint stack
# ---------------------------------------------------------------------------


def _geometric_ratio(levels):
    if len(levels) < 2:
        return None
    r = levels[1:] / levels[:-1]
    return float(r[0]) if np.allclose(r, r[0], rtol=1e-9, atol=0.0) else None


def minimal_midpoint_stack(f: LevelStack, g: LevelStack,
                           r_samples=DEFAULT_R_SAMPLES,
                           directions=DEFAULT_STACK_DIRECTIONS,
                           samples=None) -> LevelStack:
    """Smallest stack m with m((x+y)/2) >= sqrt(f(x) g(y)), up to
    discretization slack (see ``containment_margin``).

    Each output level body at height u is the convex hull of the union of
    Minkowski midpoints ((f-body at r) + (g-body at u^2/r))/2 over a log
    grid of r.  When both stacks live on geometric level grids with a
    common ratio, the r grid is the stacks' own level lattice (the valid
    pairs are the antidiagonals i + j = const), which makes the product
    structure exact; otherwise r_samples log-spaced values of r are used.
    The hull is taken in support form: the support of a hull of coaxial
    bodies is the pointwise max of their supports, and one polar-dual
    envelope per level reconstructs the profile.
    """
    if f.dim != g.dim:
        raise UnsupportedCombinationError("midpoint stack across dimensions")
    if r_samples < 8:
        raise ValueError("r_samples must be at least 8")
    if f.levels[0] * g.levels[0] <= 0:
        raise EmptyFunctionError("empty level ranges")
    dim = f.dim
    m = samples or max(max(len(b.t) for b in f.bodies), max(len(b.t) for b in g.bodies))
    theta = (np.arange(directions) + 0.5) * math.pi / directions
    Sf = np.vstack([_bodies.meridian_support(b, theta) for b in f.bodies])
    Sg = np.vstack([_bodies.meridian_support(b, theta) for b in g.bodies])
    af = np.array([b.alpha for b in f.bodies])
    ag = np.array([b.alpha for b in g.bodies])

    rf = _geometric_ratio(f.levels)
    rg = _geometric_ratio(g.levels)
    aligned = len(f.levels) == len(g.levels) and (
        len(f.levels) == 1
        or (rf is not None and rg is not None and abs(rf - rg) <= 1e-9 * abs(rf))
    )

    out_levels = []
    out_pairs = []
    if aligned:
        K = len(f.levels)
        for k in range(K):
            i_lo = max(0, 2 * k - (K - 1))
            i_hi = min(K - 1, 2 * k)
            pairs = [(i, 2 * k - i) for i in range(i_lo, i_hi + 1)]
            out_levels.append(math.sqrt(f.levels[k] * g.levels[k]))
            out_pairs.append(pairs)
    else:
        u_top = math.sqrt(f.levels[0] * g.levels[0])
        u_bot = math.sqrt(f.levels[-1] * g.levels[-1])
        count = max(len(f.levels), len(g.levels))
        for u in np.geomspace(u_top, u_bot, count):
            r_lo = u * u / g.levels[0]
            r_hi = f.levels[0]
            if not (0.0 < r_lo <= r_hi * (1.0 + 1e-12)):
                continue
            pairs = []
            for r in np.geomspace(r_lo, r_hi, r_samples):
                i = f.body_index_at(r)
                j = g.body_index_at(u * u / r)
                if i is not None and j is not None:
                    pairs.append((i, j))
            if pairs:
                out_levels.append(u)
                out_pairs.append(sorted(set(pairs)))
    if not out_levels:
        raise EmptyFunctionError("no midpoint level has a nonempty pair set")

    out_bodies = []
    prev = None
    for u, pairs in zip(out_levels, out_pairs):
        H = np.full(len(theta), -np.inf)
        alpha = 0.0
        for (i, j) in pairs:
            H = np.maximum(H, 0.5 * (Sf[i] + Sg[j]))
            alpha = max(alpha, 0.5 * (af[i] + ag[j]))
        if prev is not None:
            H = np.maximum(H, prev[0])
            alpha = max(alpha, prev[1])
        t = np.linspace(-alpha, alpha, m)
        phi = _bodies.profile_from_support(theta, H, t)
        phi = _bodies.concave_majorant(t, 0.5 * (phi + phi[::-1]))
        out_bodies.append(RevolutionBody(dim, t, phi))
        prev = (H, alpha)
    return LevelStack(dim, np.array(out_levels), tuple(out_bodies))


def containment_margin(f: LevelStack, g: LevelStack, m: LevelStack,
                       directions=64, r_probe=9) -> float:
    """Worst support excess of ((f-body at r) + (g-body at u^2/r))/2 over the
    m-body at u, across output levels u and probe values of r.  Zero (up to
    float noise) means m is a valid midpoint majorant at the probed pairs."""
    theta = (np.arange(directions) + 0.5) * math.pi / directions
    worst = 0.0
    for u, body in zip(m.levels, m.bodies):
        hm = _bodies.meridian_support(body, theta)
        r_lo = u * u / g.levels[0]
        r_hi = f.levels[0]
        if r_lo > r_hi:
            continue
        for r in np.geomspace(r_lo, r_hi, r_probe):
            bf = f.body_at(r)
            bg = g.body_at(u * u / r)
            if bf is None or bg is None:
                continue
            hmid = 0.5 * (_bodies.meridian_support(bf, theta)
                          + _bodies.meridian_support(bg, theta))
            worst = max(worst, float(np.max(hmid - hm)))
    return worst


# ---------------------------------------------------------------------------
# proof tracer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    """Per-level diagnostics of the even stability argument.

    alpha/beta are the volume ratios of the rescaled f/g level bodies to the
    m level body; sigma and eta the asymmetry factor and stability excess;
    the I mask marks levels where both ratios are in (3/4, 5/4).  Integrals
    over levels use the exact layer-cake weights.  All "<<" bounds of the
    argument involve unspecified constants, so they are exposed as measured
    quantities (jsize_*, ieta, l1_*) for ratio checks, never asserted
    against a constant."""

    eps: float
    b: float
    swapped: bool
    levels: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    sigma: np.ndarray
    eta: np.ndarray
    I_mask: np.ndarray
    J_mask: np.ndarray
    l1_fg: float
    l1_fm: float
    l1_gm: float
    l1_tilde_fg: float
    b_gap: float
    omega: float
    jsize_lhs: float
    jsize_rhs: float
    ieta: float
    sectioncap_margin: float

    @property
    def sqrt_omega(self) -> float:
        return math.sqrt(self.omega)

    def ratio_to_sqrt_omega(self, value: float) -> float:
        so = self.sqrt_omega
        return float("nan") if so == 0.0 else value / so


def _pair_symdiff(bf, bg) -> float:
    if bf is None and bg is None:
        return 0.0
    if bf is None:
        return _bodies.volume(bg)
    if bg is None:
        return _bodies.volume(bf)
    return _bodies.symmetric_difference_volume(bf, bg)


def _pair_l1(A: LevelStack, B: LevelStack) -> float:
    """int |Phi_t delta Psi_t| dt, exact for step stacks (piecewise constant
    between the union of the level breakpoints)."""
    bps = np.concatenate([A.levels, B.levels, [0.0]])
    bps = np.unique(bps)[::-1]
    total = 0.0
    for hi, lo in zip(bps[:-1], bps[1:]):
        t_eval = 0.5 * (hi + lo)
        total += _pair_symdiff(A.body_at(t_eval), B.body_at(t_eval)) * (hi - lo)
    return total


def _sectioncap_margin(f: LevelStack, g: LevelStack, m: LevelStack) -> float:
    worst = 0.0
    for t_j, om in zip(m.levels, m.bodies):
        bf = f.body_at(t_j)
        bg = g.body_at(t_j)
        if bf is None or bg is None:
            continue
        a_cap = min(bf.alpha, bg.alpha)
        t = np.linspace(-a_cap, a_cap, len(om.t))
        cap = np.minimum(bf.radius_at(t), bg.radius_at(t))
        worst = max(worst, float(np.max(cap - om.radius_at(t))))
    return worst


def pl_trace(f: LevelStack, g: LevelStack, m: LevelStack,
             normalization_tol=1e-6) -> TraceReport:
    """Trace the stability argument on probability stacks f, g and a valid
    midpoint stack m.

    Computes eps = int m - 1, fits the scale normalization b on the section
    profiles (swapping f and g so that b >= 1), rescales the level bodies,
    and reports alpha, beta, sigma, eta, the I/J dissection, the layer-cake
    L1 distances and the dissection integrals.
    """
    for name, st in (("f", f), ("g", g)):
        total = stack_integral(st)
        if abs(total - 1.0) > normalization_tol:
            raise NormalizationError(f"stack {name} integrates to {total!r}, expected 1")
    if not (f.dim == g.dim == m.dim):
        raise UnsupportedCombinationError("trace needs stacks of equal dimension")
    if stack_integral(m) <= 0:
        raise EmptyFunctionError("midpoint stack is degenerate")
    n = f.dim
    eps = stack_integral(m) - 1.0

    swapped = False
    F = section_profile(f)
    M = section_profile(m)
    c, _, _ = _pl1d.stability_distance(F, M, mode="scale", constrain_equal=True)
    b = 1.0 / c
    if b < 1.0 - 1e-12:
        f, g = g, f
        swapped = True
        F = section_profile(f)
        c, _, _ = _pl1d.stability_distance(F, M, mode="scale", constrain_equal=True)
        b = 1.0 / c

    f_t = scale_stack(f, space_factor=b ** (1.0 / n), level_factor=1.0 / b)
    g_t = scale_stack(g, space_factor=b ** (-1.0 / n), level_factor=b)

    levels = m.levels
    widths = -np.diff(np.concatenate([levels, [0.0]]))
    Mv = m.volumes
    K = len(levels)
    alpha = np.zeros(K)
    beta = np.zeros(K)
    sigma = np.full(K, np.nan)
    eta = np.full(K, np.nan)
    gstar = _fmp.gamma_star(n)
    for j, t_j in enumerate(levels):
        bf = f_t.body_at(t_j)
        bg = g_t.body_at(t_j)
        vf = _bodies.volume(bf) if bf is not None else 0.0
        vg = _bodies.volume(bg) if bg is not None else 0.0
        alpha[j] = vf / Mv[j]
        beta[j] = vg / Mv[j]
        if vf > 0 and vg > 0:
            s = max(b * b * beta[j] / alpha[j], alpha[j] / (b * b * beta[j]))
            sigma[j] = s
            A = _fmp.homothetic_distance(bf, bg)
            eta[j] = (s - 1.0) ** 2 / (32.0 * n * s * s) + n * gstar / s ** (1.0 / n) * A * A
    I_mask = (alpha > 0.75) & (alpha < 1.25) & (beta > 0.75) & (beta < 1.25)
    J_mask = ~I_mask

    jsize_lhs = float(np.sum(Mv[J_mask] * widths[J_mask]))
    jsize_rhs = 4.0 * float(
        np.sum((np.abs(alpha[J_mask] - 1.0) + np.abs(beta[J_mask] - 1.0))
               * Mv[J_mask] * widths[J_mask])
    )
    ieta = float(np.nansum(np.where(I_mask, eta, 0.0) * Mv * widths))

    report = TraceReport(
        eps=eps,
        b=b,
        swapped=swapped,
        levels=levels.copy(),
        alpha=alpha,
        beta=beta,
        sigma=sigma,
        eta=eta,
        I_mask=I_mask,
        J_mask=J_mask,
        l1_fg=_pair_l1(f, g),
        l1_fm=_pair_l1(f, m),
        l1_gm=_pair_l1(g, m),
        l1_tilde_fg=_pair_l1(f_t, g_t),
        b_gap=abs(b - 1.0),
        omega=_pl1d.omega(max(eps, 0.0)),
        jsize_lhs=jsize_lhs,
        jsize_rhs=jsize_rhs,
        ieta=ieta,
        sectioncap_margin=_sectioncap_margin(f, g, m),
    )
    return report
