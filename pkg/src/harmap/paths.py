"""Numeric in-stratum paths between sampled chart points.

Endpoints are exact; interior points only exist in floating point, so
stratum membership along the way is decided by a singular-value criterion
on the divisibility system of the wedge coefficients: arrange all
monomial shifts of the three (nominal-degree) wedge components as the
columns of one matrix; its corank equals the ramification index,
including any contribution at infinity.  A step is accepted when exactly
r of the singular values are tiny.

Construction interpolates the divisor polynomial and p0 linearly (monic
coefficient space is affine) and carries p1, p2 as the orthogonal
projections of their interpolants onto the kernel of the constraint
matrix at each step.  The projector is basis-free, so no kernel-basis
jumps occur, and the projection is the identity at both endpoints.
Degenerate steps are repaired by small seeded perturbations, first
inside the kernel, then of the interpolated data itself, with a per-step
retry cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PathFailure
from .quadlift import gauss_lift_matrices
from .quadrature import QuadratureConfig, integrate_invariants
from .strata import StratumPoint

SV_TINY = 1e-8  # relative singular-value threshold for "in the stratum"


@dataclass
class PathStep:
    t: float
    a: np.ndarray            # monic divisor coefficients, length r+1
    p: np.ndarray            # (3, k+1) triple coefficients
    flags: dict              # booleans plus float margins
    repairs: int = 0

    @property
    def ok(self) -> bool:
        return all(v for v in self.flags.values() if isinstance(v, bool))


@dataclass
class StratumPath:
    k: int
    r: int
    start: StratumPoint
    end: StratumPoint
    steps: list[PathStep]
    nominal_step: float

    @property
    def accepted(self) -> bool:
        return all(s.ok for s in self.steps)


@dataclass
class PathReport:
    step_flags: list
    quadrature: list         # (step index, degree_num, energy_num, ok)
    continuity_ok: bool
    max_step_distance: float
    failures: list = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return not self.failures and self.continuity_ok


# ---------------------------------------------------------------------------
# float stratum criteria


def _poly_derivative_vec(v: np.ndarray) -> np.ndarray:
    if len(v) <= 1:
        return np.zeros(1, complex)
    return v[1:] * np.arange(1, len(v))


def wedge_vectors(p: np.ndarray) -> list[np.ndarray]:
    """Wedge components as fixed-length vectors in the nominal space of
    degree-(2k-2) polynomials; the top convolution slot cancels exactly
    and is truncated."""
    k = p.shape[1] - 1
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        w = np.convolve(p[i], _poly_derivative_vec(p[j])) - np.convolve(
            _poly_derivative_vec(p[i]), p[j]
        )
        v = np.zeros(2 * k - 1, complex)
        m = min(len(w), 2 * k - 1)
        v[:m] = w[:m]
        out.append(v)
    return out


def divisibility_system(p: np.ndarray) -> np.ndarray:
    """Columns are the monomial shifts z^j * h_i inside the degree
    2*(2k-2)-1 coefficient space; corank = ramification index."""
    k = p.shape[1] - 1
    H = 2 * k - 2
    D = 2 * H - 1
    shifts = D - H + 1
    cols = []
    for h in wedge_vectors(p):
        for j in range(shifts):
            v = np.zeros(D + 1, complex)
            v[j : j + H + 1] = h
            cols.append(v)
    return np.array(cols).T


def index_criterion(p: np.ndarray, r: int) -> tuple[bool, float]:
    """Numeric test for ramification index exactly r.

    The r smallest singular values of the divisibility system must fall
    below SV_TINY relative to the largest, and the (r+1)-th must not.
    Returns (ok, margin) with margin the (r+1)-th relative value.
    """
    s = np.linalg.svd(divisibility_system(p), compute_uv=False)
    if s[0] == 0.0:
        return False, 0.0
    rel = s / s[0]
    tiny_ok = bool(np.all(rel[len(rel) - r :] < SV_TINY)) if r else True
    margin = float(rel[len(rel) - r - 1])
    return tiny_ok and margin >= SV_TINY, margin


def fullness_criterion(p: np.ndarray) -> tuple[bool, float]:
    s = np.linalg.svd(p, compute_uv=False)
    if s[0] == 0.0:
        return False, 0.0
    ratio = float(s[2] / s[0])
    return ratio >= SV_TINY, ratio


def coprimality_criterion(a: np.ndarray, p0: np.ndarray) -> tuple[bool, float]:
    """a and p0 coprime: p0 stays away from zero at every root of a."""
    if len(a) <= 1:
        return True, float("inf")
    roots = np.roots(a[::-1])
    scale = float(np.abs(p0).max())
    vals = [abs(np.polyval(p0[::-1], z)) for z in roots]
    ratio = min(vals) / scale if scale else 0.0
    return ratio >= SV_TINY, float(ratio)


def _constraint_matrix(a: np.ndarray, p0: np.ndarray, k: int) -> np.ndarray:
    """Float analogue of the exact constraint matrix: column j holds
    (p0 (z^j)' - p0' z^j) mod a."""
    r = len(a) - 1
    cols = []
    d0 = _poly_derivative_vec(p0)
    for j in range(k + 1):
        zj = np.zeros(j + 1, complex)
        zj[j] = 1.0
        dzj = _poly_derivative_vec(zj)
        q = np.polysub(np.convolve(p0, dzj)[::-1], np.convolve(d0, zj)[::-1])
        rem = np.polydiv(q, a[::-1])[1] if r else np.zeros(1, complex)
        v = np.zeros(r, complex)
        rr = rem[::-1][:r]
        v[: len(rr)] = rr
        cols.append(v)
    return np.array(cols).T if r else np.zeros((0, k + 1), complex)


def _kernel_projector(L: np.ndarray, k: int, r: int):
    """Orthogonal projector onto the numeric kernel of L, or None when
    the kernel dimension is not k+1-r."""
    if r == 0:
        return np.eye(k + 1, dtype=complex)
    _u, s, vh = np.linalg.svd(L)
    tiny = s < SV_TINY * s[0] if s.size and s[0] > 0 else np.ones_like(s, bool)
    rank = int((~tiny).sum())
    if rank != r:
        return None
    basis = vh[rank:].conj().T          # (k+1, k+1-r)
    return basis @ basis.conj().T


# ---------------------------------------------------------------------------
# construction


def _endpoint_arrays(pt: StratumPoint):
    r = pt.r
    k = pt.f.k
    a = np.array([c.to_complex() for c in pt.a.padded(r + 1)])
    p = np.array([[c.to_complex() for c in q.padded(k + 1)] for q in pt.f.p])
    return a, p


def _step_flags(a: np.ndarray, p: np.ndarray, r: int) -> dict:
    full_ok, full_margin = fullness_criterion(p)
    cop_ok, cop_margin = coprimality_criterion(a, p[0])
    idx_ok, idx_margin = index_criterion(p, r)
    return {
        "full": full_ok,
        "coprime": cop_ok,
        "index": idx_ok,
        "full_margin": full_margin,
        "coprime_margin": cop_margin,
        "index_margin": idx_margin,
    }


def _bool_flags(flags: dict) -> dict:
    return {k: v for k, v in flags.items() if isinstance(v, bool)}


def connect(
    start: StratumPoint,
    end: StratumPoint,
    n_steps: int,
    seed: int = 0,
    repair_cap: int = 8,
) -> StratumPath:
    """Numeric path from start to end inside the same (k, r) stratum.

    Raises ValueError for mismatched strata or endpoints outside the
    coprime chart, and PathFailure when a step cannot be repaired.
    """
    if start.f.k != end.f.k or start.r != end.r:
        raise ValueError(
            f"endpoints lie in different strata: ({start.f.k},{start.r}) vs ({end.f.k},{end.r})"
        )
    k, r = start.f.k, start.r
    for pt in (start, end):
        a_pt, p_pt = _endpoint_arrays(pt)
        cop_ok, _ = coprimality_criterion(a_pt, p_pt[0])
        if not cop_ok:
            raise ValueError("endpoint not in the coprime chart (divisor shares a root with p0)")
    if n_steps < 1:
        raise ValueError("need at least one step")

    a0, p0 = _endpoint_arrays(start)
    a1, p1 = _endpoint_arrays(end)
    rng = np.random.default_rng(seed)
    nominal = max(
        float(np.abs(a1 - a0).max()) if a0.size else 0.0, float(np.abs(p1 - p0).max())
    ) / n_steps

    steps: list[PathStep] = []
    for i in range(n_steps + 1):
        t = i / n_steps
        base_a = (1 - t) * a0 + t * a1
        base_p = (1 - t) * p0 + t * p1
        step = _make_step(t, base_a, base_p, k, r, rng, repair_cap)
        if step is None:
            raise PathFailure(
                f"step {i} (t={t:.3f}) could not be repaired within {repair_cap} tries",
                step=i,
                t=t,
            )
        steps.append(step)
    return StratumPath(k, r, start, end, steps, nominal if nominal > 0 else 1.0 / n_steps)


def _make_step(t, base_a, base_p, k, r, rng, repair_cap) -> PathStep | None:
    a = base_a.copy()
    p = base_p.copy()
    for attempt in range(repair_cap + 1):
        projector = _kernel_projector(_constraint_matrix(a, p[0], k), k, r)
        if projector is not None:
            cand = p.copy()
            cand[1] = projector @ p[1]
            cand[2] = projector @ p[2]
            flags = _step_flags(a, cand, r)
            if all(_bool_flags(flags).values()):
                return PathStep(t, a, cand, flags, repairs=attempt)
        # repair: first jiggle inside the kernel, then the data itself
        scale = float(np.abs(base_p).max()) or 1.0
        eps = scale * 1e-6 * (10.0 ** min(attempt, 4))
        if attempt < repair_cap // 2 and projector is not None:
            noise = rng.standard_normal((2, k + 1)) + 1j * rng.standard_normal((2, k + 1))
            p = base_p.copy()
            p[1] = base_p[1] + eps * (projector @ noise[0])
            p[2] = base_p[2] + eps * (projector @ noise[1])
        else:
            jig = rng.standard_normal(a.shape[0] - 1) + 1j * rng.standard_normal(a.shape[0] - 1)
            a = base_a.copy()
            if a.shape[0] > 1:
                a[:-1] = base_a[:-1] + eps * jig  # keep monic
            p = base_p + eps * (
                rng.standard_normal(p.shape) + 1j * rng.standard_normal(p.shape)
            )
    return None


# ---------------------------------------------------------------------------
# verification


def verify_path(
    path: StratumPath,
    cfg: QuadratureConfig | None = None,
    quad_indices=None,
    tol: float = 1e-2,
) -> PathReport:
    """Re-check every step and integrate invariants at a step subsample.

    Quadrature values must land within `tol` of the predicted
    (k-2-r, 3k-2-r) for the associated harmonic maps.
    """
    k, r = path.k, path.r
    expected = (k - 2 - r, 3 * k - 2 - r)
    failures = []
    step_flags = []
    for i, step in enumerate(path.steps):
        flags = _step_flags(step.a, step.p, r)
        step_flags.append(flags)
        bad = [name for name, val in _bool_flags(flags).items() if not val]
        if bad:
            failures.append((i, "+".join(bad)))

    n = len(path.steps) - 1
    if quad_indices is None:
        quad_indices = sorted({0, n // 2, n})
    cfg = cfg or QuadratureConfig(resolution=32)
    quad_rows = []
    for i in quad_indices:
        step = path.steps[i]
        mats = gauss_lift_matrices(step.p)
        sing = list(np.roots(step.a[::-1])) if step.a.shape[0] > 1 else []
        res = integrate_invariants(mats, cfg, singular=sing)
        ok = (
            abs(res.degree_num - expected[0]) <= tol
            and abs(res.energy_num - expected[1]) <= tol
        )
        quad_rows.append((i, res.degree_num, res.energy_num, ok))
        if not ok:
            failures.append((i, "quadrature"))

    dists = [
        max(
            float(np.abs(s2.a - s1.a).max()) if s1.a.size else 0.0,
            float(np.abs(s2.p - s1.p).max()),
        )
        for s1, s2 in zip(path.steps, path.steps[1:])
    ]
    max_dist = max(dists) if dists else 0.0
    continuity_ok = max_dist <= 2.0 * path.nominal_step + 1e-12
    if not continuity_ok:
        failures.append((-1, "continuity"))
    return PathReport(step_flags, quad_rows, continuity_ok, max_dist, failures)
