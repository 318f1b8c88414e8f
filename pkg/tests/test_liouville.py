import numpy as np
import pytest
import scipy.linalg as sla
from numpy.testing import assert_allclose

from spindiode.liouville import (
    DissipatorKind,
    DissipatorSpec,
    assemble_liouvillian,
    decoherence_channels,
    hamiltonian_superop,
    jump_superop,
    local_dissipator_superop,
    propagate,
    unvectorize,
    vectorize,
)
from spindiode.models import ModelSpec, Variant, build_hamiltonian
from spindiode.spinops import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    Operator,
    product_state,
    site_operator,
)


def random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def brute_force_rhs(H, jumps, rho):
    """-i[H, rho] + sum_k rate_k D[L_k](rho), no vectorization anywhere."""
    out = np.zeros_like(rho)
    if H is not None:
        out += -1j * (H @ rho - rho @ H)
    for L, rate in jumps:
        LdL = L.conj().T @ L
        out += rate * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def ladder_jumps(spec: DissipatorSpec, n):
    up = site_operator(n, spec.site, SIGMA_PLUS).matrix
    dn = site_operator(n, spec.site, SIGMA_MINUS).matrix
    return [(up, spec.gamma * spec.lam), (dn, spec.gamma * (1 - spec.lam))]


def test_vectorize_roundtrip():
    rng = np.random.default_rng(3)
    rho = random_density(rng, 8)
    assert_allclose(unvectorize(vectorize(rho)), rho)
    # column stacking: vec[k] runs down the first column first
    m = np.arange(4).reshape(2, 2)
    assert_allclose(vectorize(m), [0, 2, 1, 3])


def test_vectorization_identity():
    # vec(A rho C) = (C^T kron A) vec(rho)
    rng = np.random.default_rng(5)
    d = 4
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    C = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = random_density(rng, d)
    lhs = vectorize(A @ rho @ C)
    rhs = np.kron(C.T, A) @ vectorize(rho)
    assert_allclose(lhs, rhs, atol=1e-13)


def test_jump_superop_oracle():
    rng = np.random.default_rng(7)
    d = 8
    L = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    S = jump_superop(L, 0.7)
    for _ in range(5):
        rho = random_density(rng, d)
        got = unvectorize(S @ vectorize(rho))
        want = brute_force_rhs(None, [(L, 0.7)], rho)
        assert_allclose(got, want, atol=1e-12)


def test_hamiltonian_superop_oracle():
    rng = np.random.default_rng(9)
    H = build_hamiltonian(ModelSpec(variant=Variant.DIODE, Delta=2.0, delta=0.1, J34=-3.0))
    S = hamiltonian_superop(H)
    rho = random_density(rng, 64)
    got = unvectorize(S @ vectorize(rho))
    want = brute_force_rhs(H.matrix, [], rho)
    assert_allclose(got, want, atol=1e-12)


def test_assembled_liouvillian_matches_brute_force():
    """Full generator against the unvectorized master equation."""
    rng = np.random.default_rng(11)
    spec = ModelSpec(variant=Variant.DIODE, Delta=5.0, delta=0.1, J34=-6.3)
    H = build_hamiltonian(spec)
    diss = [
        DissipatorSpec(site=1, gamma=1.0, lam=0.5),
        DissipatorSpec(site=6, gamma=1.0, lam=0.0),
    ]
    L = assemble_liouvillian(H, diss)
    jumps = []
    for dspec in diss:
        jumps.extend(ladder_jumps(dspec, 6))
    worst = 0.0
    for _ in range(50):
        rho = random_density(rng, 64)
        got = unvectorize(L.matrix @ vectorize(rho))
        want = brute_force_rhs(H.matrix, jumps, rho)
        worst = max(worst, np.abs(got - want).max())
    assert worst < 1e-12


def test_liouvillian_preserves_trace():
    # rows of L sum against the identity: tr(L rho) = 0 for any rho,
    # i.e. vec(I)^dag L = 0
    spec = ModelSpec(variant=Variant.DIODE, Delta=3.0, delta=0.05, J34=-4.3)
    H = build_hamiltonian(spec)
    L = assemble_liouvillian(
        H,
        [DissipatorSpec(site=1, gamma=0.7, lam=0.5), DissipatorSpec(site=6, gamma=1.3, lam=0.1)],
    )
    ivec = vectorize(np.eye(64, dtype=complex))
    assert np.abs(ivec @ L.matrix).max() < 1e-12


def test_dissipator_spec_validation():
    with pytest.raises(ValueError):
        DissipatorSpec(site=0, gamma=1.0)
    with pytest.raises(ValueError):
        DissipatorSpec(site=1, gamma=-0.5)
    with pytest.raises(ValueError):
        DissipatorSpec(site=1, gamma=1.0, lam=1.5)


def test_local_dissipator_modes():
    # pure decay: lam = 0 leaves only sigma- jumps
    rng = np.random.default_rng(13)
    spec = DissipatorSpec(site=2, gamma=0.9, lam=0.0)
    S = local_dissipator_superop(spec, 3)
    dn = site_operator(3, 2, SIGMA_MINUS).matrix
    rho = random_density(rng, 8)
    got = unvectorize(S @ vectorize(rho))
    want = brute_force_rhs(None, [(dn, 0.9)], rho)
    assert_allclose(got, want, atol=1e-13)


def test_decay_and_dephase_kinds():
    rng = np.random.default_rng(15)
    n = 2
    rho = random_density(rng, 4)
    decay = DissipatorSpec(site=1, gamma=0.25, kind=DissipatorKind.DECAY_T1)
    S = local_dissipator_superop(decay, n)
    dn = site_operator(n, 1, SIGMA_MINUS).matrix
    assert_allclose(
        unvectorize(S @ vectorize(rho)), brute_force_rhs(None, [(dn, 0.25)], rho), atol=1e-13
    )
    deph = DissipatorSpec(site=2, gamma=0.4, kind=DissipatorKind.DEPHASE_T2)
    S = local_dissipator_superop(deph, n)
    z = site_operator(n, 2, SIGMA_Z).matrix
    assert_allclose(
        unvectorize(S @ vectorize(rho)), brute_force_rhs(None, [(z, 0.4)], rho), atol=1e-13
    )


def test_decoherence_channels_rates():
    T = 2000.0
    channels = decoherence_channels(6, T)
    decays = [c for c in channels if c.kind is DissipatorKind.DECAY_T1]
    dephs = [c for c in channels if c.kind is DissipatorKind.DEPHASE_T2]
    assert len(decays) == 6 and len(dephs) == 6
    assert {c.site for c in decays} == set(range(1, 7))
    for c in decays:
        assert c.gamma == pytest.approx(1 / T)
    for c in dephs:
        assert c.gamma == pytest.approx(1 / (4 * T))
    with pytest.raises(ValueError):
        decoherence_channels(6, 0.0)


def test_fermion_ladder_dissipator():
    # fermionic jump at an interior site carries the parity string
    from spindiode.jordanwigner import jw_fermions

    rng = np.random.default_rng(17)
    n = 4
    f = jw_fermions(n)
    spec = DissipatorSpec(site=3, gamma=0.8, lam=0.3, kind=DissipatorKind.FERMION_LADDER)
    S = local_dissipator_superop(spec, n)
    a = f.a[2].matrix
    rho = random_density(rng, 16)
    want = brute_force_rhs(None, [(a.conj().T, 0.8 * 0.3), (a, 0.8 * 0.7)], rho)
    assert_allclose(unvectorize(S @ vectorize(rho)), want, atol=1e-13)


def toy_chain_liouvillian(n=3):
    """Small boundary-driven XX chain for oracle comparisons."""
    from spindiode.spinops import exchange_xx

    H = exchange_xx(n, 1, 2)
    for k in range(2, n):
        H = H + exchange_xx(n, k, k + 1)
    diss = [
        DissipatorSpec(site=1, gamma=1.0, lam=0.5),
        DissipatorSpec(site=n, gamma=1.0, lam=0.0),
    ]
    return H, assemble_liouvillian(H, diss)


def test_propagate_against_dense_expm():
    rng = np.random.default_rng(19)
    _, L = toy_chain_liouvillian(3)
    rho0 = random_density(rng, 8)
    times = [0.0, 0.5, 1.5]
    traj = propagate(L, Operator(rho0), times)
    dense = L.matrix.toarray()
    for t, rho_t in zip(times, traj):
        want = unvectorize(sla.expm(dense * t) @ vectorize(rho0))
        assert_allclose(rho_t.matrix, want, atol=1e-9)
        assert abs(rho_t.trace() - 1.0) < 1e-10


def test_propagate_accepts_state_vector():
    spec = ModelSpec(variant=Variant.DIODE, Delta=1.0)
    H = build_hamiltonian(spec)
    L = assemble_liouvillian(H, [DissipatorSpec(site=1, gamma=1.0, lam=0.0)])
    traj = propagate(L, product_state("dduudd"), [0.0, 1.0])
    assert len(traj) == 2
    assert abs(traj[0].trace() - 1.0) < 1e-12
    assert traj[1].is_hermitian(tol=1e-10)


def test_propagate_validates_grid():
    spec = ModelSpec(variant=Variant.DIODE, Delta=1.0)
    L = assemble_liouvillian(build_hamiltonian(spec), [DissipatorSpec(site=1, gamma=1.0)])
    psi = product_state("dduudd")
    with pytest.raises(ValueError):
        propagate(L, psi, [1.0, 0.5])  # not sorted
    with pytest.raises(ValueError):
        propagate(L, psi, [-1.0, 0.5])
    with pytest.raises(ValueError):
        propagate(L, psi, [])
