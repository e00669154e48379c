"""Extended eigenvalues of operator truncations: witnesses, scans, predictions.

A complex number lambda is an extended eigenvalue of A when A X = lambda X A
has a nonzero solution X.  For a finite truncation everything is decidable:
with eigenvalues mu_1..mu_N (diagonalizable case) the finite answer is the
ratio set {mu_i / mu_j}.  Two numerical probes are provided:

  * ratio_distance  -- distance from a trial lambda to the ratio set of the
    truncation, with an eigenvalue reliability filter for the nonnormal
    truncations this package actually produces (see ratio_set);
  * sylvester_min_sv -- smallest singular value of X -> A X - lambda X A,
    normalized by ||A|| (1 + |lambda|).

Both probes are scanned over grids by ext_scan.  A caution that the test
suite quantifies: truncations of the hyperbolic/parabolic composition
operators are exponentially close to singular, which makes the Sylvester
probe degenerate at *every* lambda (sigma_min(Sylv) <= (1+|lambda|)
sigma_min(A) -- take X = (right null vector)(left null vector)^H).  The
candidate-limiting default exists because of this; scan output should be
read as candidate localization, not as membership proof.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .lft import Classification, LinearFractionalMap, classify, is_fock_symbol
from .operators import (
    DimensionMismatchError,
    OperatorMatrix,
    adjoint,
    basis_shift_matrix,
    composition_matrix,
    direct_sum,
    matrix_power,
    multiplication_matrix,
    op_norm,
    quasi_diff_matrix,
    quasi_mult_matrix,
    shifted_quasi_mult,
    sigma_shift_matrix,
)
from .series import (
    PowerSeries,
    binomial_power,
    cayley_power,
    monomial,
    parabolic_eigenfunction,
)
from .spaces import SpaceSpec


class SingularTruncationError(ValueError):
    """Ratio set is meaningless: the truncation is numerically singular."""


class TooLargeError(ValueError):
    """Sylvester probe capped at order 128 (the lifted problem is order N^2)."""


class EmptyGridError(ValueError):
    """Scan grid is empty or badly parameterized."""


class UnresolvedClassError(ValueError):
    """No prediction is implemented for this symbol class on this space."""


class BadAnnulusError(ValueError):
    """Annulus bounds must satisfy 0 < inner <= outer."""


# ---------------------------------------------------------------------------
# residual of the intertwining relation


def intertwining_residual(
    A: OperatorMatrix, X: OperatorMatrix, lam: complex, margin: int = 0
) -> float:
    """||P (A X - lambda X A) P|| / (||A|| ||X||), with P the projection onto
    the leading order-margin coordinates.

    The margin exists because truncation corrupts the last rows/columns of
    products of band matrices; a witness that intertwines exactly in infinite
    dimensions shows a residual supported near the cut, which P removes.
    """
    if A.order != X.order or A.space != X.space:
        raise DimensionMismatchError("witness and operator must match in space and order")
    if not 0 <= margin < A.order:
        raise DimensionMismatchError(f"margin must lie in [0, {A.order - 1}]")
    keep = A.order - margin
    R = A.entries @ X.entries - complex(lam) * (X.entries @ A.entries)
    block = R[:keep, :keep]
    denom = op_norm(A) * op_norm(X)
    if denom == 0:
        raise DimensionMismatchError("zero operator has no meaningful residual")
    return float(np.linalg.svd(block, compute_uv=False)[0]) / denom


# ---------------------------------------------------------------------------
# eigenvalue ratios


def _eig_with_reliability(entries: np.ndarray):
    """Eigenvalues plus a forward-error estimate for each one.

    err_j ~ eps ||A|| / rcond_j, where rcond_j = |y^H x| / (||x|| ||y||) is the
    reciprocal condition number from the left/right eigenvector pair.  This is
    the standard first-order perturbation bound; for severely nonnormal
    truncations the unreliable eigenvalues show err far above |mu|.
    """
    w, vl, vr = scipy.linalg.eig(entries, left=True, right=True)
    overlap = np.abs(np.einsum("ij,ij->j", vl.conj(), vr))
    norms = np.linalg.norm(vl, axis=0) * np.linalg.norm(vr, axis=0)
    rcond = overlap / np.where(norms == 0, 1.0, norms)
    norm_a = np.linalg.norm(entries, 2)
    eps = np.finfo(float).eps
    err = np.where(rcond > 0, eps * norm_a / np.where(rcond == 0, 1.0, rcond), np.inf)
    return w, err


def _dedup_sorted(values: np.ndarray, tol: float) -> np.ndarray:
    """Sort lexicographically by (re, im) and merge runs closer than tol."""
    if values.size == 0:
        return values
    order = np.lexsort((values.imag, values.real))
    vals = values[order]
    kept = [vals[0]]
    for v in vals[1:]:
        if abs(v - kept[-1]) > tol:
            kept.append(v)
    return np.array(kept)


def ratio_set(
    A: OperatorMatrix,
    min_singular_value: float = 1e-12,
    dedup_tol: float = 1e-9,
    reliability_tol: float | None = None,
) -> np.ndarray:
    """All pairwise eigenvalue ratios mu_i / mu_j of the truncation,
    deduplicated to dedup_tol, sorted by (re, im).

    Two modes:

    * strict (reliability_tol=None): requires sigma_min(A) > min_singular_value
      and uses every eigenvalue; raises SingularTruncationError otherwise.
      This is the right mode for honest small matrices.

    * filtered (reliability_tol=t): keeps eigenvalue mu_j only when its
      perturbation-theory error estimate is at most t |mu_j|.  This is the
      only usable mode for the hyperbolic/parabolic composition truncations,
      whose smallest singular values underflow; raises
      SingularTruncationError when no eigenvalue survives.
    """
    if reliability_tol is None:
        smin = float(np.linalg.svd(A.entries, compute_uv=False)[-1])
        if smin <= min_singular_value:
            raise SingularTruncationError(
                f"sigma_min = {smin:.3e} <= {min_singular_value:.3e}; "
                "eigenvalue ratios of this truncation are noise "
                "(pass reliability_tol to filter instead)"
            )
        mu = np.linalg.eigvals(A.entries)
    else:
        w, err = _eig_with_reliability(A.entries)
        keep = err <= reliability_tol * np.abs(w)
        mu = w[keep]
        if mu.size == 0:
            raise SingularTruncationError(
                "no eigenvalue of the truncation passes the reliability filter"
            )
    ratios = (mu[:, None] / mu[None, :]).ravel()
    return _dedup_sorted(ratios, dedup_tol)


def ratio_distance(lam, ratios: np.ndarray) -> np.ndarray:
    """Distance from each trial point to the nearest ratio (vectorized)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    if ratios.size == 0:
        return np.full(lam.shape, np.inf)
    out = np.empty(lam.size)
    block = max(1, int(2**22 // max(ratios.size, 1)))
    for start in range(0, lam.size, block):
        chunk = lam[start : start + block]
        out[start : start + block] = np.abs(chunk[:, None] - ratios[None, :]).min(axis=1)
    return out


# ---------------------------------------------------------------------------
# Sylvester probe


class SylvesterProbe:
    """Normalized sigma_min of X -> A X - lambda X A, reusable across lambdas.

    Dense SVD of the N^2 x N^2 Kronecker matrix up to order dense_cutoff;
    beyond that, a complex Schur form is computed once and sigma_min is
    estimated by inverse power iteration on the lifted normal equations,
    each step solved by two triangular Sylvester solves (ztrsyl).  The
    estimate is accurate to a small factor -- ample against thresholds used
    here, which sit many orders away from the values they test.
    """

    def __init__(self, A: OperatorMatrix, seed: int = 0, dense_cutoff: int = 16):
        n = A.order
        if n > 128:
            raise TooLargeError(f"order {n} > 128: the lifted problem has order {n * n}")
        self.n = n
        self.norm_a = float(np.linalg.norm(A.entries, 2))
        self.dense = n <= dense_cutoff
        if self.dense:
            self.a = A.entries.astype(np.complex128)
            self.eye = np.eye(n)
        else:
            self.t, _ = scipy.linalg.schur(A.entries.astype(np.complex128), output="complex")
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        self.v0 = v0 / np.linalg.norm(v0)

    def _solve(self, lam: complex, c: np.ndarray, adjoint_eq: bool) -> np.ndarray | None:
        # trsyl solves op(A) X + isgn X op(B) = scale C for triangular A, B
        tr = "C" if adjoint_eq else "N"
        lam_eff = np.conj(lam) if adjoint_eq else lam
        x, scale, info = lapack.ztrsyl(
            self.t, -lam_eff * self.t, c, trana=tr, tranb=tr, isgn=1
        )
        if info < 0 or not np.all(np.isfinite(x)) or scale == 0:
            return None
        return x / scale

    def sigma_min(self, lam: complex, iters: int = 8) -> float:
        """Estimate of sigma_min(Sylv_lambda) / (||A|| (1 + |lambda|))."""
        lam = complex(lam)
        scale = self.norm_a * (1.0 + abs(lam))
        if scale == 0:
            return 0.0
        if self.dense:
            m = np.kron(self.eye, self.a) - lam * np.kron(self.a.T, self.eye)
            return float(np.linalg.svd(m, compute_uv=False)[-1]) / scale

        v = self.v0
        prev = None
        for _ in range(max(1, iters)):
            y = self._solve(lam, v, adjoint_eq=True)
            if y is None:
                return 0.0
            z = self._solve(lam, y, adjoint_eq=False)
            if z is None:
                return 0.0
            nz = np.linalg.norm(z)
            if not np.isfinite(nz) or nz == 0:
                return 0.0
            v = z / nz
            resid = self.t @ v - lam * (v @ self.t)
            est = float(np.linalg.norm(resid))
            if prev is not None and abs(est - prev) <= 0.01 * prev:
                prev = est
                break
            prev = est
        return prev / scale


def sylvester_min_sv(A: OperatorMatrix, lam: complex, seed: int = 0, iters: int = 8) -> float:
    """One-shot form of SylvesterProbe (which is cheaper across many lambdas)."""
    return SylvesterProbe(A, seed=seed).sigma_min(lam, iters=iters)


# ---------------------------------------------------------------------------
# scan grids


GRID_SHAPES = ("circle", "annulus", "disk")


@dataclass(frozen=True)
class GridSpec:
    shape: str = "circle"
    points: int = 360
    rmin: float = 0.2
    rmax: float = 1.0

    def __post_init__(self):
        if self.shape not in GRID_SHAPES:
            raise EmptyGridError(f"unknown grid shape {self.shape!r}")
        if self.points < 2:
            raise EmptyGridError("need at least 2 grid points")
        if self.shape == "annulus" and not 0 < self.rmin <= self.rmax:
            raise EmptyGridError("annulus needs 0 < rmin <= rmax")
        if self.shape in ("circle", "disk") and not self.rmax > 0:
            raise EmptyGridError("need rmax > 0")


def make_grid(spec: GridSpec):
    """Return (points, step): a grid that never contains 0, and the largest
    nearest-neighbor spacing, which scan thresholds are measured against.

    circle   -- spec.points equally spaced on |z| = rmax
    annulus  -- log-spaced rings between rmin and rmax, ring count balancing
                radial against angular spacing
    disk     -- equally spaced rings rmax/n_r, 2 rmax/n_r, ..., rmax
    """
    n = spec.points
    if spec.shape == "circle":
        angles = 2 * np.pi * np.arange(n) / n
        pts = spec.rmax * np.exp(1j * angles)
        step = 2 * spec.rmax * math.sin(math.pi / n)
        return pts, float(step)
    if spec.shape == "annulus":
        span = math.log(spec.rmax / spec.rmin) if spec.rmax > spec.rmin else 0.0
        n_r = max(1, round(math.sqrt(n * span / (2 * math.pi)))) if span > 0 else 1
        n_t = max(2, math.ceil(n / n_r))
        radii = np.geomspace(spec.rmin, spec.rmax, n_r)
        angles = 2 * np.pi * np.arange(n_t) / n_t
        pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
        radial_gap = float(np.diff(radii).max()) if n_r > 1 else 0.0
        chord = 2 * spec.rmax * math.sin(math.pi / n_t)
        return pts, float(max(radial_gap, chord))
    # disk
    n_r = max(1, round(math.sqrt(n / 4)))
    n_t = max(2, math.ceil(n / n_r))
    radii = spec.rmax * np.arange(1, n_r + 1) / n_r
    angles = 2 * np.pi * np.arange(n_t) / n_t
    pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    step = max(spec.rmax / n_r, 2 * spec.rmax * math.sin(math.pi / n_t))
    return pts, float(step)


# ---------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class PredictedExt:
    """Shape of the predicted extended spectrum for an admissible symbol.

    kinds: discrete-cyclic (powers of `base`), unit-circle,
    closed-punctured-disk (0 < |lambda| <= 1), annulus-bounded
    (inner <= |lambda| <= outer).  `metadata` carries point-spectrum
    side information that is *recorded, not asserted* -- those facts come
    from a different space than the operator may act on, and their
    transfer is open.
    """

    kind: str
    base: complex | None = None
    inner: float | None = None
    outer: float | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "metadata": dict(self.metadata)}
        if self.base is not None:
            out["base"] = [self.base.real, self.base.imag]
        if self.inner is not None:
            out["inner"] = self.inner
        if self.outer is not None:
            out["outer"] = self.outer
        return out

    def members(self, bound: float = 8.0, max_power: int = 64) -> np.ndarray:
        """Finite sample of the predicted set, for distance checks: powers
        base^j with |base^j| <= bound for discrete-cyclic, else empty."""
        if self.kind != "discrete-cyclic" or self.base in (None, 0):
            return np.array([], dtype=complex)
        b = complex(self.base)
        out = []
        for j in range(-max_power, max_power + 1):
            try:
                v = b**j
            except OverflowError:
                continue
            if np.isfinite(v) and 1.0 / bound <= abs(v) <= bound:
                out.append(v)
        return np.array(sorted(set(out), key=lambda z: (abs(z), cmath.phase(z))))


def predicted_ext(phi: LinearFractionalMap, space: SpaceSpec) -> PredictedExt:
    """Predicted extended spectrum of C_phi on the given space.

    Resolved cases (everything else raises UnresolvedClassError):

      fock     affine w z + b, |w| < 1, or |w| = 1 with b = 0:
               discrete-cyclic with base w
      bergman  elliptic-automorphism w z: discrete-cyclic base w
               hyperbolic-automorphism:   unit-circle
               hyperbolic-na-1:           closed punctured disk
               hyperbolic-na-3 / loxodromic: discrete-cyclic base phi'(c)
               parabolic-automorphism:    unit-circle

    The hardy case is deliberately unresolved here: the point-spectrum facts
    this module records as metadata originate there, and turning them into
    extended-spectrum predictions is exactly the open part.
    """
    if space.kind == "fock":
        if is_fock_symbol(phi):
            w = phi.a / phi.d
            return PredictedExt(
                "discrete-cyclic",
                base=w,
                metadata={"point_spectrum": "w^n, n >= 0", "symbol": "affine"},
            )
        raise UnresolvedClassError("no prediction for non-affine symbols on fock space")
    if space.kind != "bergman":
        raise UnresolvedClassError(f"no prediction on {space.kind} space")

    cls = classify(phi)
    k = cls.kind
    if k == "elliptic-automorphism":
        return PredictedExt("discrete-cyclic", base=cls.multiplier)
    if k == "hyperbolic-automorphism":
        big_r = 1.0 / cls.multiplier.real  # multiplier is 1/R, real positive
        return PredictedExt(
            "unit-circle",
            metadata={
                "point_spectrum_annulus": [big_r**-0.5, big_r**0.5],
                "point_spectrum_source": "hardy",
            },
        )
    if k == "hyperbolic-na-1":
        r = cls.multiplier.real
        return PredictedExt(
            "closed-punctured-disk",
            metadata={
                "point_spectrum_disk_radius": r**-0.5,
                "point_spectrum_source": "hardy",
            },
        )
    if k in ("hyperbolic-na-3", "loxodromic"):
        return PredictedExt(
            "discrete-cyclic",
            base=cls.multiplier,
            metadata={"point_spectrum": "phi'(c)^n, n >= 0"},
        )
    if k == "parabolic-automorphism":
        return PredictedExt("unit-circle")
    raise UnresolvedClassError(f"no prediction for class {k!r} on bergman space")


# ---------------------------------------------------------------------------
# scanning


@dataclass
class ExtScanReport:
    label: str
    space: SpaceSpec
    order: int
    grid: GridSpec
    step: float
    lam: np.ndarray
    ratio_dist: np.ndarray
    sylvester: np.ndarray  # nan where not evaluated
    flagged: np.ndarray
    sylvester_threshold: float
    ratio_threshold: float
    candidates: int | str
    seed: int
    notes: list
    predicted: PredictedExt | None = None

    def flagged_points(self) -> np.ndarray:
        return self.lam[self.flagged]

    def to_dict(self) -> dict:
        rows = [
            [
                float(z.real),
                float(z.imag),
                float(rd),
                None if math.isnan(sv) else float(sv),
                bool(fl),
            ]
            for z, rd, sv, fl in zip(self.lam, self.ratio_dist, self.sylvester, self.flagged)
        ]
        doc = {
            "label": self.label,
            "space": {"kind": self.space.kind, "alpha": self.space.alpha},
            "order": self.order,
            "grid": {
                "shape": self.grid.shape,
                "points": self.grid.points,
                "rmin": self.grid.rmin,
                "rmax": self.grid.rmax,
                "step": self.step,
                "count": int(self.lam.size),
            },
            "sylvester_threshold": self.sylvester_threshold,
            "ratio_threshold": self.ratio_threshold,
            "candidates": self.candidates,
            "seed": self.seed,
            "flagged_count": int(np.count_nonzero(self.flagged)),
            "notes": list(self.notes),
            "predicted": None if self.predicted is None else self.predicted.to_dict(),
            "columns": ["re(lambda)", "im(lambda)", "ratio_distance", "sylvester_min_sv", "flagged"],
            "rows": rows,
        }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        lines = ["re(lambda),im(lambda),ratio_distance,sylvester_min_sv,flagged"]
        for z, rd, sv, fl in zip(self.lam, self.ratio_dist, self.sylvester, self.flagged):
            sv_s = "nan" if math.isnan(sv) else repr(float(sv))
            lines.append(
                f"{float(z.real)!r},{float(z.imag)!r},{float(rd)!r},{sv_s},{int(fl)}"
            )
        return "\n".join(lines) + "\n"


def ext_scan(
    A: OperatorMatrix,
    grid: GridSpec,
    sylvester_threshold: float = 1e-6,
    ratio_threshold: float | None = None,
    candidates: int | str | None = None,
    reliability_tol: float = 1e-6,
    seed: int = 0,
    sylvester_iters: int = 5,
    predicted: PredictedExt | None = None,
) -> ExtScanReport:
    """Scan a grid for extended-eigenvalue candidates of a truncation.

    Flag rule: a grid point flags when its normalized Sylvester sigma_min is
    at most sylvester_threshold, or its distance to the eigenvalue ratio set
    is below ratio_threshold (default: 0.999 of the grid step, so that grid
    points adjacent to a ratio do not flag by adjacency alone).

    The Sylvester probe runs on the `candidates` grid points with the
    smallest ratio distance ("all" for every point; default: all points for
    order <= 48, else 50).  Ratios use the strict mode of ratio_set when the
    truncation allows it, falling back to the reliability filter (recorded
    in notes) -- the fallback is the normal path for hyperbolic and
    parabolic symbols, whose truncations are exponentially singular.
    """
    lam, step = make_grid(grid)
    if lam.size == 0:
        raise EmptyGridError("grid has no points")
    if np.any(lam == 0):
        raise EmptyGridError("grid must exclude 0")
    notes = []
    rt = 0.999 * step if ratio_threshold is None else float(ratio_threshold)

    try:
        ratios = ratio_set(A)
    except SingularTruncationError:
        try:
            ratios = ratio_set(A, reliability_tol=reliability_tol)
            notes.append(
                "ratio set from reliability-filtered eigenvalues "
                f"(tol={reliability_tol:g}); strict mode found the truncation singular"
            )
        except SingularTruncationError:
            ratios = np.array([], dtype=complex)
            notes.append("no reliable eigenvalues; ratio distances are +inf")

    rd = ratio_distance(lam, ratios)

    if candidates is None:
        candidates = "all" if A.order <= 48 else 50
    sylv = np.full(lam.size, np.nan)
    if A.order > 128:
        notes.append("order > 128: sylvester probe skipped, flags are ratio-only")
    else:
        probe = SylvesterProbe(A, seed=seed)
        if candidates == "all" or ratios.size == 0:
            chosen = np.arange(lam.size)
            if candidates != "all":
                notes.append("no ratio ranking available: probing every grid point")
        else:
            k = min(int(candidates), lam.size)
            chosen = np.sort(np.argsort(rd, kind="stable")[:k])
        for i in chosen:
            sylv[i] = probe.sigma_min(lam[i], iters=sylvester_iters)

    sylv_flag = np.where(np.isnan(sylv), np.inf, sylv) <= sylvester_threshold
    ratio_flag = rd < rt
    flagged = sylv_flag | ratio_flag

    return ExtScanReport(
        label=A.label,
        space=A.space,
        order=A.order,
        grid=grid,
        step=step,
        lam=lam,
        ratio_dist=rd,
        sylvester=sylv,
        flagged=flagged,
        sylvester_threshold=float(sylvester_threshold),
        ratio_threshold=rt,
        candidates=candidates,
        seed=seed,
        notes=notes,
        predicted=predicted,
    )


# ---------------------------------------------------------------------------
# structural checks (finite-dimensional lemmas, exercised by random matrices)


@dataclass
class CheckRow:
    name: str
    passed: bool
    worst: float
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "worst": self.worst, "detail": self.detail}


@dataclass
class SuiteReport:
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _random_diagonalizable(rng: np.random.Generator, n: int, space: SpaceSpec) -> OperatorMatrix:
    """Well-conditioned diagonalizable matrix with separated eigenvalue ratios."""
    for _ in range(200):
        mu = rng.uniform(0.6, 1.8, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        ratios = (mu[:, None] / mu[None, :]).ravel()
        d = np.abs(ratios[:, None] - ratios[None, :])
        # distinct ratios must stay at least 0.1 apart (exact duplicates fine)
        close = d[d > 1e-12]
        if close.size and close.min() < 0.1:
            continue
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(v) > 25:
            continue
        a = v @ np.diag(mu) @ np.linalg.inv(v)
        return OperatorMatrix(space, n, a, label="random-diagonalizable")
    raise RuntimeError("could not draw a separated diagonalizable matrix")


def lemma_suite(A: OperatorMatrix | None = None, seed: int = 0, draws: int = 10, size: int = 6) -> SuiteReport:
    """Exercise the ratio-set identities on random diagonalizable matrices
    (or a single provided one):

      adjoint      ratios of A* are conjugate reciprocals of ratios of A
      scaling      ratios of alpha A equal ratios of A
      membership   every flagged grid point lies near the ratio set
      direct-sum   ratios of the blocks flag in a scan of the block sum
      nonsingular  sylvester probe at 0 stays above threshold

    Distances compare against 1e-10 except where noted.
    """
    space = SpaceSpec("hardy")
    rng = np.random.default_rng(seed)
    if A is not None:
        mats = [A]
    else:
        mats = [_random_diagonalizable(rng, size, space) for _ in range(draws)]

    def _setdist(xs: np.ndarray, ys: np.ndarray) -> float:
        if xs.size == 0 and ys.size == 0:
            return 0.0
        if xs.size == 0 or ys.size == 0:
            return math.inf
        d1 = np.abs(xs[:, None] - ys[None, :]).min(axis=1).max()
        d2 = np.abs(ys[:, None] - xs[None, :]).min(axis=1).max()
        return float(max(d1, d2))

    rows = []
    worst_adj = worst_scale = worst_member = worst_sum = 0.0
    worst_nonsing = math.inf
    member_ok = sum_ok = True
    for idx, M in enumerate(mats):
        r = ratio_set(M)
        # adjoint: conj(1/rho)
        r_adj = ratio_set(adjoint(M))
        expected = _dedup_sorted(np.conj(1.0 / r), 1e-9)
        worst_adj = max(worst_adj, _setdist(r_adj, expected))
        # scaling
        alpha = complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
        Ms = OperatorMatrix(M.space, M.order, alpha * M.entries, label="scaled")
        worst_scale = max(worst_scale, _setdist(ratio_set(Ms), r))
        # membership: scan over ratios plus decoys; flags must sit on the ratio set
        decoys = r * np.exp(1j * 0.19) * 1.07
        grid_pts = np.concatenate([r, decoys])
        probe = SylvesterProbe(M, seed=seed)
        for lam in grid_pts:
            sv = probe.sigma_min(lam)
            rdist = float(np.abs(r - lam).min())
            flag = sv <= 1e-6 or rdist <= 1e-9
            if flag:
                worst_member = max(worst_member, rdist)
                if rdist > 1e-8:
                    member_ok = False
        # direct sum: every block ratio flags in the sum's scan
        if A is None and idx % 2 == 1:
            prev = mats[idx - 1]
            S = direct_sum(prev, M)
            probe_s = SylvesterProbe(S, seed=seed)
            union = _dedup_sorted(np.concatenate([ratio_set(prev), r]), 1e-9)
            for lam in union:
                sv = probe_s.sigma_min(lam)
                worst_sum = max(worst_sum, sv)
                if sv > 1e-6:
                    sum_ok = False
        # nonsingularity of the probe at lambda = 0
        worst_nonsing = min(worst_nonsing, sylvester_min_sv(M, 0.0, seed=seed))

    rows.append(CheckRow("adjoint-conjugate-reciprocal", worst_adj <= 1e-10, worst_adj))
    rows.append(CheckRow("scaling-invariance", worst_scale <= 1e-10, worst_scale))
    rows.append(CheckRow("flagged-points-lie-on-ratio-set", member_ok, worst_member))
    rows.append(CheckRow("direct-sum-union-flags", sum_ok, worst_sum))
    rows.append(
        CheckRow(
            "sylvester-probe-nonsingular-at-0",
            worst_nonsing > 1e-6,
            worst_nonsing,
            "normalized sigma_min at lambda=0",
        )
    )
    return SuiteReport(rows)


def rich_spectrum_annulus_check(
    A: OperatorMatrix,
    inner: float,
    outer: float,
    grid: GridSpec | None = None,
    eig_tol: float = 1e-6,
    sylvester_threshold: float = 1e-6,
    seed: int = 0,
) -> SuiteReport:
    """Check the hypotheses and the conclusion pattern of the annulus
    localization argument on a truncation.

    Hypothesis check: every eigenvalue modulus lies in
    [inner (1 - eig_tol), outer (1 + eig_tol)].  Conclusion check: in a scan
    of the implied bound annulus [inner/outer, outer/inner], any flagged
    point farther than one grid step from the unit circle must owe its flag
    to ratio adjacency alone, i.e. its Sylvester value stays above threshold.

    For truncated hyperbolic composition operators both checks fail, and
    that is the honest answer: finite sections do not inherit the spectral
    richness of the full operator.
    """
    if not 0 < inner <= outer:
        raise BadAnnulusError(f"need 0 < inner <= outer, got [{inner}, {outer}]")
    mods = np.abs(np.linalg.eigvals(A.entries))
    lo, hi = float(mods.min()), float(mods.max())
    eig_ok = lo >= inner * (1 - eig_tol) and hi <= outer * (1 + eig_tol)

    bound_in, bound_out = inner / outer, outer / inner
    if grid is None:
        grid = GridSpec("annulus", 800, max(bound_in * 0.9, 1e-3), bound_out * 1.1)
    report = ext_scan(
        A, grid, sylvester_threshold=sylvester_threshold, seed=seed
    )
    off = np.abs(np.abs(report.lam) - 1.0) > report.step
    bad = report.flagged & off & (np.where(np.isnan(report.sylvester), np.inf, report.sylvester) <= sylvester_threshold)
    off_ok = not bool(bad.any())

    rows = [
        CheckRow(
            "eigenvalues-in-annulus",
            eig_ok,
            max(inner / lo if lo > 0 else math.inf, hi / outer),
            f"moduli span [{lo:.3e}, {hi:.3e}] against [{inner:g}, {outer:g}]",
        ),
        CheckRow(
            "off-circle-flags-not-sylvester-confirmed",
            off_ok,
            float(np.count_nonzero(bad)),
            f"implied bound annulus [{bound_in:g}, {bound_out:g}]",
        ),
    ]
    return SuiteReport(rows)


# ---------------------------------------------------------------------------
# witnesses by name, and the per-class verification driver


def _sigma_power_series(c: complex, k: int, order: int) -> PowerSeries:
    coeffs = np.zeros(order, dtype=np.complex128)
    for m in range(min(k, order - 1) + 1):
        coeffs[m] = math.comb(k, m) * (-c) ** (k - m)
    return PowerSeries(coeffs)


def _interior_fixed_point(phi: LinearFractionalMap) -> complex:
    cls = classify(phi)
    for p in cls.fixed_points:
        if not isinstance(p, complex):
            continue
        if abs(p) < 1.0 - 1e-9:
            return p
    raise UnresolvedClassError("symbol has no fixed point inside the open disk")


def build_witness(text: str, phi: LinearFractionalMap, space: SpaceSpec, order: int) -> OperatorMatrix:
    """Construct a witness operator from its textual name.

    Grammar (complex parameters in x+yi form):

        identity
        shift:k                   monomial backward shift by k
        sigma-shift:c,k           sigma-power backward shift, sigma = z - c
        qdiff:m                   D^m on fock
        qmult-shifted:tau,m       (X - tau I)^m on fock
        mult:monomial,k           M_{z^k}
        mult:binomial,w           M_{(1-z)^w}
        mult:cayley,w             M_{((1+z)/(1-z))^w}
        mult:exponential,t        M_{exp(-t (1+z)/(1-z))}
        mult:sigma-power,k        M_{(z-c)^k}, c = phi's interior fixed point
    """
    from .lft import parse_complex  # local import to keep module load cheap

    text = text.strip()
    name, _, args = text.partition(":")
    if name == "identity":
        return OperatorMatrix(space, order, np.eye(order), label="I")
    if name == "shift":
        return basis_shift_matrix(int(args), space, order)
    if name == "sigma-shift":
        c_s, k_s = args.split(",")
        return sigma_shift_matrix(parse_complex(c_s), int(k_s), space, order)
    if name == "qdiff":
        return matrix_power(quasi_diff_matrix(space, order), int(args)).relabel(
            f"D^{int(args)}"
        )
    if name == "qmult-shifted":
        tau_s, m_s = args.split(",")
        base = shifted_quasi_mult(space, parse_complex(tau_s), order)
        return matrix_power(base, int(m_s)).relabel(f"(X-{tau_s})^{m_s}")
    if name == "mult":
        family, _, param = args.partition(",")
        if family == "monomial":
            b = monomial(int(param), order)
        elif family == "binomial":
            b = binomial_power(parse_complex(param), order)
        elif family == "cayley":
            b = cayley_power(parse_complex(param), order)
        elif family == "exponential":
            b = parabolic_eigenfunction(float(param), order)
        elif family == "sigma-power":
            b = _sigma_power_series(_interior_fixed_point(phi), int(param), order)
        else:
            raise ValueError(f"unknown multiplication family {family!r}")
        return multiplication_matrix(b, space, order).relabel(f"M[{family},{param}]")
    raise ValueError(f"unknown witness {text!r}")


@dataclass
class VerifyRow:
    check: str
    witness: str
    lam: complex
    margin: int
    residual: float
    threshold: float
    passed: bool

    def to_dict(self):
        return {
            "check": self.check,
            "witness": self.witness,
            "lambda": [self.lam.real, self.lam.imag],
            "margin": self.margin,
            "residual": self.residual,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass
class VerifyReport:
    symbol: str
    space: SpaceSpec
    order: int
    kind: str
    rows: list
    scan_rows: list
    predicted: PredictedExt | None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows) and all(r.passed for r in self.scan_rows)

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "space": {"kind": self.space.kind, "alpha": self.space.alpha},
            "order": self.order,
            "class": self.kind,
            "passed": self.passed,
            "rows": [r.to_dict() for r in self.rows],
            "scan_checks": [r.to_dict() for r in self.scan_rows],
            "predicted": None if self.predicted is None else self.predicted.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _power_members(base: complex, lo: float, hi: float, pad: float) -> np.ndarray:
    """All powers base^j whose modulus lies in [lo - pad, hi + pad]."""
    out = []
    for j in range(-64, 65):
        try:
            v = complex(base) ** j
        except (OverflowError, ZeroDivisionError):
            continue
        if np.isfinite(v) and lo - pad <= abs(v) <= hi + pad:
            out.append(v)
    return np.array(out, dtype=complex)


def _scan_near_set(report: ExtScanReport, targets: np.ndarray, name: str) -> CheckRow:
    """Scan check: every flagged point within one grid step of the target set."""
    fl = report.flagged_points()
    if fl.size == 0:
        return CheckRow(name, False, math.inf, "no points flagged at all")
    if targets.size == 0:
        return CheckRow(name, False, math.inf, "empty target set")
    worst = float(np.abs(fl[:, None] - targets[None, :]).min(axis=1).max())
    return CheckRow(name, worst <= report.step, worst, f"{fl.size} flagged points")


def _scan_near_circle(report: ExtScanReport, name: str) -> CheckRow:
    fl = report.flagged_points()
    if fl.size == 0:
        return CheckRow(name, False, math.inf, "no points flagged at all")
    worst = float(np.abs(np.abs(fl) - 1.0).max())
    return CheckRow(
        name,
        worst <= report.step,
        worst,
        f"{fl.size} flagged points; worst distance from |lambda|=1",
    )


def _scan_presence(report: ExtScanReport, targets: np.ndarray, name: str) -> CheckRow:
    """Scan check: each target value attracts at least one flagged point."""
    fl = report.flagged_points()
    if fl.size == 0 or targets.size == 0:
        return CheckRow(name, False, math.inf, "no flags or no targets")
    worst = float(np.abs(targets[:, None] - fl[None, :]).min(axis=1).max())
    return CheckRow(name, worst <= report.step, worst, f"{targets.size} targets")


def verify_theorem_suite(
    phi: LinearFractionalMap,
    space: SpaceSpec,
    order: int,
    seed: int = 0,
    scan_points: int | None = None,
) -> VerifyReport:
    """Check, on an order-`order` truncation, every intertwining identity the
    symbol's class is known to satisfy, plus a scan-localization check
    against the predicted extended spectrum.

    Witness thresholds are calibrated to what the identities actually
    achieve in floating point (see the per-class blocks); the scan rows are
    strict localization statements and genuinely fail for the hyperbolic and
    parabolic automorphism classes, where finite sections cannot see the
    predicted unit circle.  Raises UnresolvedClassError for classes/spaces
    with no resolved prediction.
    """
    predicted = predicted_ext(phi, space)  # raises UnresolvedClassError early
    rows: list = []
    scan_rows: list = []

    def run(check, witness_text, lam, margin, threshold, C):
        X = build_witness(witness_text, phi, space, order)
        res = intertwining_residual(C, X, lam, margin)
        rows.append(VerifyRow(check, witness_text, complex(lam), margin, res, threshold, res <= threshold))

    if space.kind == "fock":
        w = phi.a / phi.d
        C = composition_matrix(phi, space, order)
        if abs(abs(w) - 1.0) <= 1e-12:
            kind = "fock-rotation"
            for k in range(1, 6):
                run("shift-intertwines", f"shift:{k}", w ** (-k), 0, 1e-10, C)
                run("qdiff-power-intertwines", f"qdiff:{k}", w ** (-k), k, 1e-10, C)
            run("qmult-intertwines", "qmult-shifted:0,1", w, 0, 1e-10, C)
            pts = scan_points or 504
            rep = ext_scan(A=C, grid=GridSpec("circle", pts, rmax=1.0), seed=seed, predicted=predicted)
            targets = _power_members(w, 1.0, 1.0, 1e-9)
            scan_rows.append(_scan_near_set(rep, targets, "scan-flags-near-powers"))
        else:
            kind = "fock-affine-contraction"
            tau = (phi.b / phi.d) / (1 - w)
            run("qdiff-intertwines", "qdiff:1", 1.0 / w, 1, 1e-10, C)
            from .lft import format_complex

            for k in range(1, 4):
                run(
                    "shifted-qmult-power-intertwines",
                    f"qmult-shifted:{format_complex(tau)},{k}",
                    w**k,
                    k,
                    1e-9,
                    C,
                )
            pts = scan_points or 600
            gs = GridSpec("annulus", pts, rmin=abs(w) ** 1.5, rmax=1.1 / abs(w))
            # the truncation is triangular with entries w^n, so sigma_min is
            # exponentially small and probing every grid point would flag all
            # of them; only the ratio-nearest points are worth confirming
            rep = ext_scan(A=C, grid=gs, candidates=50, seed=seed, predicted=predicted)
            targets = _power_members(w, gs.rmin, gs.rmax, rep.step)
            scan_rows.append(_scan_near_set(rep, targets, "scan-flags-near-powers"))
        return VerifyReport(str(phi), space, order, kind, rows, scan_rows, predicted)

    # bergman (predicted_ext already rejected hardy and unresolved classes)
    cls = classify(phi)
    kind = cls.kind
    C = composition_matrix(phi, space, order)

    if kind == "elliptic-automorphism":
        w = cls.multiplier
        for k in range(1, 6):
            run("shift-intertwines", f"shift:{k}", w ** (-k), 0, 1e-10, C)
            run("monomial-mult-intertwines", f"mult:monomial,{k}", w**k, k, 1e-10, C)
        pts = scan_points or 504
        rep = ext_scan(A=C, grid=GridSpec("circle", pts, rmax=1.0), seed=seed, predicted=predicted)
        targets = np.unique(np.round(w ** np.arange(-(order - 1), order), 12))
        scan_rows.append(_scan_near_set(rep, targets, "scan-flags-near-powers"))

    elif kind == "hyperbolic-automorphism":
        big_r = 1.0 / cls.multiplier.real
        margin = order - order // 8
        for w_exp in (1j, 2j):
            lam = complex(big_r) ** w_exp
            run("cayley-mult-intertwines", f"mult:cayley,{format_cx(w_exp)}", lam, margin, 1e-6, C)
        pts = scan_points or 1500
        rep = ext_scan(
            A=C,
            grid=GridSpec("annulus", pts, rmin=0.2, rmax=5.0),
            candidates=50,
            seed=seed,
            predicted=predicted,
        )
        scan_rows.append(_scan_near_circle(rep, "scan-flags-on-unit-circle"))

    elif kind == "hyperbolic-na-1":
        r = cls.multiplier.real
        margin = 3 * order // 4
        for w_exp in (1.0, 2.0, 1 + 1j):
            lam = r**w_exp if isinstance(w_exp, float) else complex(r) ** w_exp
            run("binomial-mult-intertwines", f"mult:binomial,{format_cx(w_exp)}", lam, margin, 1e-6, C)
        pts = scan_points or 600
        rep = ext_scan(
            A=C, grid=GridSpec("disk", pts, rmax=1.0), candidates=50, seed=seed, predicted=predicted
        )
        fl = rep.flagged_points()
        inside = fl.size > 0 and bool(np.all(np.abs(fl) <= 1.0 + rep.step))
        scan_rows.append(
            CheckRow(
                "scan-flags-inside-closed-disk",
                inside,
                float(np.abs(fl).max()) if fl.size else math.inf,
                f"{fl.size} flagged points",
            )
        )
        targets = np.array([r ** 1.0, r ** 2.0], dtype=complex)
        scan_rows.append(_scan_presence(rep, targets, "scan-flags-present-at-powers"))

    elif kind in ("hyperbolic-na-3", "loxodromic"):
        a = cls.multiplier
        c = _interior_fixed_point(phi)
        from .lft import format_complex

        for k in range(1, 4):
            run(
                "sigma-shift-intertwines",
                f"sigma-shift:{format_complex(c)},{k}",
                a ** (-k),
                k,
                1e-9,
                C,
            )
            run("sigma-power-mult-intertwines", f"mult:sigma-power,{k}", a**k, k, 1e-9, C)
        pts = scan_points or 600
        gs = GridSpec("annulus", pts, rmin=abs(a) ** 1.5, rmax=1.1 / abs(a))
        rep = ext_scan(A=C, grid=gs, candidates=50, seed=seed, predicted=predicted)
        targets = _power_members(a, gs.rmin, gs.rmax, rep.step)
        scan_rows.append(_scan_near_set(rep, targets, "scan-flags-near-powers"))

    elif kind == "parabolic-automorphism":
        phi0 = phi.b / phi.d  # phi(0)
        a = (1 + phi0) / (1 - phi0) - 1.0  # half-plane translation length
        margin = order - order // 8
        for t in (1.0, 2.0):
            lam = cmath.exp(-a * t)
            # the exponential family decays like exp(-c sqrt(n)): slow enough
            # that truncation coupling keeps this residual around 1e-4
            run("exponential-mult-intertwines", f"mult:exponential,{t}", lam, margin, 1e-3, C)
        pts = scan_points or 1500
        rep = ext_scan(
            A=C,
            grid=GridSpec("annulus", pts, rmin=0.2, rmax=5.0),
            candidates=50,
            seed=seed,
            predicted=predicted,
        )
        scan_rows.append(_scan_near_circle(rep, "scan-flags-on-unit-circle"))

    else:  # pragma: no cover - predicted_ext already rejects these
        raise UnresolvedClassError(f"no verification recipe for class {kind!r}")

    return VerifyReport(str(phi), space, order, kind, rows, scan_rows, predicted)


def format_cx(z) -> str:
    from .lft import format_complex

    return format_complex(complex(z))
