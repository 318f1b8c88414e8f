"""Steady states, Liouvillian spectra and convergence diagnostics.

Steady states are null vectors of the Liouvillian.  Three routes are
provided, trading generality for speed:

* a full dense eigendecomposition (exact degeneracy structure, fine up
  to five spins where the superoperator is 1024 x 1024),
* a shift-inverted Arnoldi solve for the handful of eigenvalues nearest
  zero (degeneracy counting for six and seven spins),
* a trace-constrained sparse linear solve (fastest; valid only when the
  steady state is unique, which it is for delta != 0).

The linear solve replaces the first row of L with the trace functional
and solves L' x = e_0; its residual against the original L is checked,
so accidentally hitting a degenerate point (delta = 0) fails loudly
instead of returning an arbitrary mixture.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .liouville import Liouvillian, propagate, unvectorize, vectorize
from .spinops import Operator, StateVector

__all__ = [
    "SteadyStateResult",
    "steady_states",
    "steady_state_solve",
    "spectrum",
    "convergence_fidelity",
]

# dense eigendecomposition above this superoperator dimension is minutes
# of work; switch to shift-inverted Arnoldi there
_DENSE_EIG_MAX_DIM = 1024


@dataclass
class SteadyStateResult:
    """Null-space data of a Liouvillian.

    ``rho_ss`` is the (Hermitized, trace-normalized, positivity-checked)
    steady state; with ``degeneracy > 1`` it is the full-support mixture
    (Frobenius projection of the identity onto the fixed space) and
    ``rho_all`` holds the extreme sector states instead.  ``spectrum``
    is only populated by the dense route.
    """

    rho_ss: Operator
    residual: float
    degeneracy: int
    null_tol: float
    method: str
    rho_all: list[Operator] = field(default_factory=list)
    spectrum: np.ndarray | None = None


def _spectral_scale(L: Liouvillian) -> float:
    """Upper bound on max |eigenvalue|: the induced infinity norm of L."""
    m = L.matrix
    row_sums = np.add.reduceat(np.abs(m.data), m.indptr[:-1])
    row_sums[np.diff(m.indptr) == 0] = 0.0
    return float(row_sums.max()) if row_sums.size else 0.0


def _repair_psd(rho: np.ndarray) -> np.ndarray:
    """Clip tiny negative eigenvalues; refuse genuinely indefinite states."""
    w, v = np.linalg.eigh(rho)
    if w.min() < -1e-8:
        raise ValueError(f"steady state has a negative eigenvalue {w.min():.3e}")
    clip = (w >= -1e-10) & (w < 0.0)
    if clip.any():
        w = w.copy()
        w[clip] = 0.0
        rho = (v * w) @ v.conj().T
        rho = rho / np.trace(rho).real
    return rho


def _hermitian_null_basis(null_vecs: list[np.ndarray]) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of the span of the null vectors.

    The fixed space of a Lindbladian is closed under dagger, so its real
    Hermitian dimension equals its complex dimension; feeding both
    M + M^dag and i(M - M^dag) through Gram-Schmidt recovers that basis
    from whatever arbitrary complex combinations the eigensolver returns
    (ARPACK's start vector is random, so the raw basis differs run to run).
    """
    basis: list[np.ndarray] = []
    for vec in null_vecs:
        m = unvectorize(vec / np.linalg.norm(vec))
        for cand in (m + m.conj().T, 1j * (m - m.conj().T)):
            n0 = np.linalg.norm(cand)
            if n0 < 1e-6:
                continue
            cand = cand / n0
            for b in basis:
                cand = cand - np.vdot(b, cand).real * b
            n = np.linalg.norm(cand)
            if n > 1e-6:
                basis.append(cand / n)
    return basis


def steady_states(
    L: Liouvillian,
    null_tol: float | None = None,
    method: str = "auto",
    k: int = 8,
) -> SteadyStateResult:
    """Steady state(s) of L via its eigenvalues nearest zero.

    ``null_tol`` defaults to 1e-9 times the infinity norm of L (a cheap
    upper bound on the largest eigenvalue magnitude).  ``method`` is
    ``dense`` (full spectrum), ``arnoldi`` (k eigenvalues nearest zero,
    shift-inverted) or ``auto``.  The raw null vectors are remixed into
    an orthonormal Hermitian basis before states are extracted, so the
    output does not depend on the arbitrary combinations the eigensolver
    happens to return.
    """
    scale = _spectral_scale(L)
    if null_tol is None:
        null_tol = 1e-9 * max(scale, 1.0)
    if method == "auto":
        method = "dense" if L.dim <= _DENSE_EIG_MAX_DIM else "arnoldi"

    full_spectrum = None
    if method == "dense":
        w, vr = la.eig(L.dense())
        full_spectrum = w[np.argsort(-w.real)]
        null_idx = np.flatnonzero(np.abs(w) < null_tol)
        null_vecs = [vr[:, i] for i in null_idx]
    elif method == "arnoldi":
        kk = min(k, L.dim - 2)
        try:
            w, vr = spla.eigs(L.matrix.tocsc(), k=kk, sigma=0.0, which="LM")
        except RuntimeError:
            # the factorization of L - 0*I can fail since L is singular;
            # nudge the shift into the open left half plane
            w, vr = spla.eigs(L.matrix.tocsc(), k=kk, sigma=-1e-6 * max(scale, 1.0), which="LM")
        null_idx = np.flatnonzero(np.abs(w) < null_tol)
        if len(null_idx) == kk:
            warnings.warn(
                f"all {kk} computed eigenvalues lie below null_tol; "
                "degeneracy may be undercounted, increase k",
                stacklevel=2,
            )
        null_vecs = [vr[:, i] for i in null_idx]
    else:
        raise ValueError(f"unknown method {method!r}")

    if not null_vecs:
        raise RuntimeError(
            f"no eigenvalue below null_tol = {null_tol:.3e}; L has no resolved steady state"
        )

    basis = _hermitian_null_basis(null_vecs)
    degeneracy = len(basis)
    traces = np.array([np.trace(b).real for b in basis])
    tnorm = float(np.linalg.norm(traces))
    if tnorm < 1e-10:
        raise RuntimeError(
            "every null combination is traceless; L does not preserve a state"
        )
    # Frobenius projection of the identity onto the fixed space: the
    # natural full-support mixture (a positive combination of the sector
    # states, so PSD up to eigensolver noise)
    mix = sum(t * b for t, b in zip(traces, basis))
    mix = mix / np.trace(mix).real
    rho_ss = Operator(_repair_psd(mix))

    states = [rho_ss]
    if degeneracy > 1:
        # extreme sector states: for two sectors the (unique) traceless
        # null element is rho_plus - rho_minus with orthogonal supports, so
        # its positive and negative eigenparts are exactly the extremes;
        # beyond two sectors the same split is applied pairwise and is
        # only a heuristic enumeration
        states = []
        unit = traces / tnorm
        traceless = []
        for b, t in zip(basis, traces):
            tl = b - (t / tnorm) * sum(u * bb for u, bb in zip(unit, basis))
            n = np.linalg.norm(tl)
            if n > 1e-8:
                for prev in traceless:
                    tl = tl - np.vdot(prev, tl).real * prev
                n = np.linalg.norm(tl)
            if n > 1e-8:
                traceless.append(tl / n)
        res_tol = 100.0 * null_tol
        for tl in traceless:
            w, v = np.linalg.eigh(tl)
            for sign in (1.0, -1.0):
                part = np.clip(sign * w, 0.0, None)
                if part.sum() < 1e-10:
                    continue
                cand = (v * part) @ v.conj().T
                cand = cand / np.trace(cand).real
                if np.linalg.norm(L.matrix @ vectorize(cand)) > res_tol:
                    continue
                if any(np.abs(cand - s.matrix).max() < 1e-8 for s in states):
                    continue
                states.append(Operator(cand))
        if degeneracy > 2:
            warnings.warn(
                f"{degeneracy} steady sectors: extreme-state enumeration "
                "is heuristic beyond two",
                stacklevel=2,
            )
        if not states:
            states = [rho_ss]

    residual = float(np.linalg.norm(L.matrix @ vectorize(rho_ss)))
    return SteadyStateResult(
        rho_ss=rho_ss,
        residual=residual,
        degeneracy=degeneracy,
        null_tol=null_tol,
        method=method,
        rho_all=states,
        spectrum=full_spectrum,
    )


def steady_state_solve(L: Liouvillian) -> SteadyStateResult:
    """Unique steady state via a trace-constrained sparse linear solve.

    Much faster than eigendecomposition but assumes the null space is
    one-dimensional.  A degenerate L (e.g. delta = 0) raises instead of
    quietly returning an arbitrary member of the steady manifold; with a
    multidimensional null space the constrained matrix stays exactly
    singular (some null combination is traceless), which a random probe
    through the LU factors detects as ~1/eps amplification even when the
    particular solution happens to have a tiny residual.  Strongly
    rectifying thermal points amplify almost as hard through a genuinely
    slow relaxation mode, so a large gain only flags the point and the
    spectrum near zero arbitrates: degeneracy means a second eigenvalue
    at the resolution floor, not merely a small one.
    """
    dim, hd = L.dim, L.hilbert_dim
    A = L.matrix.copy()
    A.data[A.indptr[0] : A.indptr[1]] = 0.0
    A.eliminate_zeros()
    trace_row = sp.csr_matrix(
        (np.ones(hd), (np.zeros(hd, dtype=int), np.arange(0, dim, hd + 1))),
        shape=(dim, dim),
        dtype=complex,
    )
    A = (A + trace_row).tocsc()
    b = np.zeros(dim, dtype=complex)
    b[0] = 1.0
    lu = spla.splu(A)
    x = lu.solve(b)
    x += lu.solve(b - A @ x)  # one step of iterative refinement

    scale = max(spla.norm(L.matrix, "fro"), 1.0)
    rng = np.random.default_rng(0x5D10DE)
    probe = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    probe /= np.linalg.norm(probe)
    # measured gains, invariant under uniform rescaling: < 4e5 at generic
    # unique points, 2e7 at delta = 1e-3, ~2e16 on a degenerate manifold,
    # but also up to 4e14 at strongly rectifying thermal points whose
    # blocked channel relaxes at ~1e-13 of the spectral scale
    gain = float(np.linalg.norm(lu.solve(probe))) * scale
    if gain > 1e10:
        sscale = _spectral_scale(L)
        kk = min(4, dim - 2)
        try:
            w = spla.eigs(
                L.matrix.tocsc(), k=kk, sigma=0.0, which="LM",
                v0=np.ones(dim), return_eigenvectors=False,
            )
        except RuntimeError:
            w = spla.eigs(
                L.matrix.tocsc(), k=kk, sigma=-1e-6 * max(sscale, 1.0),
                which="LM", v0=np.ones(dim), return_eigenvectors=False,
            )
        second = float(np.sort(np.abs(w))[1])
        # a true second null vector resolves at ~1e-17 of scale, the
        # slowest observed physical mode at ~1e-14 of scale
        if second < 1e-15 * sscale:
            raise RuntimeError(
                f"trace-constrained system is numerically singular "
                f"(probe gain {gain:.1e}, second eigenvalue {second:.1e}); "
                "the steady state is degenerate (delta = 0?) - use "
                "steady_states() instead"
            )

    m = unvectorize(x)
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m).real
    rho = Operator(_repair_psd(m))
    residual = float(np.linalg.norm(L.matrix @ vectorize(rho)))
    if residual > 1e-8 * scale:
        raise RuntimeError(
            f"trace-constrained solve residual {residual:.3e} exceeds "
            f"{1e-8 * scale:.3e}; the steady state is likely degenerate "
            "(delta = 0?) - use steady_states() instead"
        )
    return SteadyStateResult(
        rho_ss=rho,
        residual=residual,
        degeneracy=1,
        null_tol=0.0,
        method="direct",
    )


def spectrum(L: Liouvillian) -> np.ndarray:
    """All 4^n eigenvalues, sorted by real part descending.

    Dense: fine through six spins (a minute of work at 4096^2); for the
    seven-spin models prefer steady_states(method="arnoldi") which only
    resolves the spectrum near zero.
    """
    w = la.eigvals(L.dense())
    return w[np.argsort(-w.real)]


def convergence_fidelity(L: Liouvillian, initial, rho_ss, times) -> np.ndarray:
    """Uhlmann fidelity F(rho(t), rho_ss) along a propagated trajectory.

    ``initial`` may be a StateVector or a density Operator.  The steady
    state must be unique (resolve degeneracies before calling).
    """
    from .observables import fidelity_mixed  # deferred: observables imports this module

    if isinstance(initial, StateVector):
        initial = initial.density()
    target = rho_ss.rho_ss if isinstance(rho_ss, SteadyStateResult) else rho_ss
    traj = propagate(L, initial, times)
    return np.array([fidelity_mixed(rho, target) for rho in traj])
