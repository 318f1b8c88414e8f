import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spindiode.liouville import DissipatorSpec, assemble_liouvillian
from spindiode.models import ModelSpec, Variant, build_hamiltonian, critical_j34
from spindiode.spinops import coupling_zz, exchange_xx
from spindiode.steadystate import (
    convergence_fidelity,
    spectrum,
    steady_state_solve,
    steady_states,
)


def boundary_driven(delta, hot=1, cold=6, Delta=5.0):
    spec = ModelSpec(variant=Variant.DIODE, Delta=Delta, delta=delta, J34=critical_j34(Delta))
    H = build_hamiltonian(spec)
    return assemble_liouvillian(
        H,
        [
            DissipatorSpec(site=hot, gamma=1.0, lam=0.5),
            DissipatorSpec(site=cold, gamma=1.0, lam=0.0),
        ],
    )


def small_chain(n=4):
    """Boundary-driven XX chain, small enough for dense linear algebra."""
    H = exchange_xx(n, 1, 2)
    for b in range(2, n):
        H = H + exchange_xx(n, b, b + 1)
    H = H + 0.3 * coupling_zz(n, 1, 2)
    return assemble_liouvillian(
        H,
        [
            DissipatorSpec(site=1, gamma=1.0, lam=0.5),
            DissipatorSpec(site=n, gamma=0.7, lam=0.0),
        ],
    )


def test_fast_solver_residual_and_properties():
    L = boundary_driven(0.1)
    res = steady_state_solve(L)
    rho = res.rho_ss.matrix
    assert res.residual < 1e-10
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert np.abs(rho - rho.conj().T).max() < 1e-12
    evals = np.linalg.eigvalsh(rho)
    assert evals.min() > -1e-10
    # and it really is a fixed point
    assert np.linalg.norm(L.matrix @ rho.ravel(order="F")) < 1e-10


def test_solver_routes_agree_small():
    """All three routes find the same state on a dense-checkable chain."""
    L = small_chain()
    fast = steady_state_solve(L).rho_ss.matrix
    arn = steady_states(L, method="arnoldi").rho_ss.matrix
    dense = steady_states(L, method="dense").rho_ss.matrix
    assert np.abs(fast - arn).max() < 1e-8
    assert np.abs(fast - dense).max() < 1e-8


def test_fast_matches_arnoldi_full_size():
    L = boundary_driven(0.1)
    fast = steady_state_solve(L).rho_ss.matrix
    arn = steady_states(L, method="arnoldi").rho_ss.matrix
    assert np.abs(fast - arn).max() < 1e-8


def test_unique_steady_state_at_nonzero_asymmetry():
    L = boundary_driven(0.1)
    res = steady_states(L, method="arnoldi")
    assert res.degeneracy == 1


def test_degenerate_manifold_at_zero_asymmetry():
    L = boundary_driven(0.0, hot=6, cold=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = steady_states(L, method="arnoldi")
    assert res.degeneracy >= 2
    for rho in res.rho_all:
        m = rho.matrix
        assert abs(np.trace(m) - 1.0) < 1e-10
        assert np.linalg.eigvalsh(m).min() > -1e-8


def test_fast_solver_refuses_degenerate_null_space():
    # matched bath rates leave a two-dimensional null space under this
    # bias direction, which the trace-constrained solve must not paper over
    L = boundary_driven(0.0, hot=6, cold=1)
    with pytest.raises(RuntimeError, match="degenerate"):
        steady_state_solve(L)


def test_spectrum_structure():
    L = small_chain()
    nu = spectrum(L)
    assert nu.shape == (L.dim,)
    # sorted by real part, all decaying, exactly one on the imaginary axis
    assert np.all(np.diff(nu.real) <= 1e-12)
    assert nu.real.max() < 1e-10
    null_count = int(np.sum(np.abs(nu) < 1e-9 * np.abs(nu).max()))
    assert null_count == 1
    # complex rates pair up under conjugation (rho -> rho^dag symmetry)
    pos = nu[nu.imag > 1e-8]
    neg = nu[nu.imag < -1e-8]
    assert len(pos) == len(neg)
    dist = np.abs(pos[:, None] - neg[None, :].conj())
    assert dist.min(axis=1).max() < 1e-8


def test_convergence_fidelity_increases():
    from spindiode.spinops import product_state

    L = boundary_driven(0.1)
    rho_ss = steady_state_solve(L).rho_ss
    F = convergence_fidelity(L, product_state("dduudd"), rho_ss, [0.0, 5.0, 25.0])
    assert F[0] < F[1] < F[2]
    assert F[2] > 0.5


def test_convergence_fidelity_fixed_point():
    L = boundary_driven(0.1)
    rho_ss = steady_state_solve(L).rho_ss
    F = convergence_fidelity(L, rho_ss, rho_ss, [0.0, 10.0])
    assert_allclose(F, 1.0, atol=1e-8)
