"""Structure predicates and compatibility checks."""

import pytest
from fractions import Fraction

from bigbracket.algebra import PhaseSpace, big_bracket
from bigbracket.errors import PreconditionError
from bigbracket.instances import SplitMix64, fixed_instance, random_instance
from bigbracket.structures import (
    compatible_complementary,
    compatible_Hitchin,
    compatible_OmegaN,
    compatible_PN,
    compatible_POmega,
    composite_tensor,
    is_closed,
    is_compatible_pair,
    is_complementary_form,
    is_exact_PqN,
    is_exact_PqN_background,
    is_Hitchin,
    is_nijenhuis_lie,
    is_OmegaN,
    is_PN,
    is_poisson,
    is_POmega,
    is_PqN_background,
    relations_check,
)
from bigbracket.tensors import (
    EndoTensor,
    cartan_differential,
    function_to_endo,
    mat_add,
    mat_identity,
    two_form_element,
)

from helpers import (
    mu_of,
    pqn_witness,
    random_bivector,
    random_lie_mu,
    random_matrix,
    random_two_form,
    scalar_matrix,
)


def all_routes_ok(rep):
    return all(c.ok for c in rep.conditions if c.name.endswith("route_agrees"))


def test_poisson_routes():
    rng = SplitMix64(501)
    for _ in range(15):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        pi = random_bivector(rng, mu.phase_space)
        rep = is_poisson(mu, pi)
        assert rep.condition("torsion_route_agrees").ok
    # rank 2 bivectors are always Poisson
    P = fixed_instance("aff1-2").phase_space
    assert is_poisson(mu_of("aff1-2"), P.theta(0) * P.theta(1)).verdict


def test_closed_routes():
    rng = SplitMix64(502)
    for _ in range(15):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        om = random_two_form(rng, mu.phase_space)
        rep = is_closed(mu, om)
        assert rep.condition("torsion_route_agrees").ok
    # top form on the rank-2 nonabelian algebra is closed
    P = fixed_instance("aff1-2").phase_space
    assert is_closed(mu_of("aff1-2"), P.xi(0) * P.xi(1)).verdict


def test_nijenhuis_routes():
    rng = SplitMix64(503)
    mu = mu_of("aff1-2")
    P = mu.phase_space
    # diagonal tensors are torsion-free on the rank-2 nonabelian algebra
    for a, b in ((1, 2), (2, -1), (3, 3)):
        N = [[Fraction(a), Fraction(0)], [Fraction(0), Fraction(b)]]
        rep = is_nijenhuis_lie(mu, N)
        assert rep.verdict
        if a == b:  # the function route needs a scalar square
            assert rep.condition("function_route_agrees").ok
    # nilpotent N has scalar square zero; routes must agree either way
    N = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    rep = is_nijenhuis_lie(mu, N)
    assert rep.condition("function_route_agrees").ok
    # random tensors on random structures: agreement is the assertion
    for _ in range(10):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        N = scalar_matrix(P, rng.choice((-2, -1, 1, 2)))
        rep = is_nijenhuis_lie(mu, N)
        assert rep.condition("function_route_agrees").ok


def test_compatible_pair_example():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    om = P.xi(0) * P.xi(1)
    JN = EndoTensor.from_lie_matrix(P, scalar_matrix(P, 3))
    rep = is_compatible_pair(mu, function_to_endo(om), JN)
    assert rep.verdict
    assert rep.condition("polarization_identity_holds").ok


def test_pn_examples():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    pi = P.theta(0) * P.theta(1)
    assert is_PN(mu, pi, scalar_matrix(P, 2)).verdict
    rep = is_PN(mu, pi, [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]])
    assert not rep.verdict
    assert not rep.condition("sharp_maps_intertwine").ok
    assert all_routes_ok(rep)


def test_omegan_examples():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    om = P.xi(0) * P.xi(1)
    rep = is_OmegaN(mu, om, scalar_matrix(P, 2))
    assert rep.verdict and all_routes_ok(rep)
    # rank-3 Heisenberg: verdicts are whatever they are, routes must agree
    mu3 = mu_of("heisenberg-3")
    P3 = mu3.phase_space
    rng = SplitMix64(504)
    for _ in range(8):
        om3 = random_two_form(rng, P3)
        N3 = scalar_matrix(P3, rng.choice((-2, 1, 2)))
        assert all_routes_ok(is_OmegaN(mu3, om3, N3))


def test_hitchin_example():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    varpi = P.xi(0) * P.xi(1)
    rep = is_Hitchin(mu, varpi, scalar_matrix(P, 2))
    assert rep.verdict and all_routes_ok(rep)
    degenerate = P.zero()
    assert not is_Hitchin(mu, degenerate, scalar_matrix(P, 2)).verdict


def test_pomega_and_relations():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    pi = P.theta(0) * P.theta(1)
    om = P.xi(0) * P.xi(1)
    rep = is_POmega(mu, pi, om)
    assert rep.verdict and all_routes_ok(rep)
    assert rep.condition("proof_identity_holds").ok
    rel = relations_check(mu, pi, om)
    assert rel.verdict
    # the composite tensor of the pair gives PN and OmegaN structures
    N = composite_tensor(pi, om)
    assert is_PN(mu, pi, N).verdict
    assert is_OmegaN(mu, om, N).verdict


def test_pqn_background_witness():
    P, mu, pi, N, omega, H, lam = pqn_witness()
    assert not H.is_zero()
    rep = is_exact_PqN_background(mu, pi, N, omega, H, lam)
    assert rep.verdict
    assert rep.condition("background_torsion_route_agrees").ok
    # the general predicate holds with the differential of omega
    phi = cartan_differential(mu, omega)
    assert is_PqN_background(mu, pi, N, phi, H).verdict


def test_pqn_background_negative_keeps_route_agreement():
    P, mu, pi, N, omega, H, lam = pqn_witness()
    # wrong background scaling: verdict flips, the two routes still agree
    rep = is_exact_PqN_background(mu, pi, N, omega, H.scale(3), lam)
    assert not rep.verdict
    assert rep.condition("background_torsion_route_agrees").ok


def test_exact_pqn_implications():
    mu = mu_of("heisenberg-3")
    P = mu.phase_space
    rep = is_exact_PqN(mu, P.zero(), scalar_matrix(P, 1), P.xi(0) * P.xi(1))
    assert rep.verdict
    rng = SplitMix64(505)
    for _ in range(8):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        om = random_two_form(rng, P)
        rep = is_exact_PqN(mu, P.zero(), scalar_matrix(P, rng.choice((-1, 1, 2))), om)
        assert rep.condition("forward_implication_holds").ok


def test_complementary_routes():
    rng = SplitMix64(506)
    done = 0
    while done < 12:
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        pi = random_bivector(rng, P)
        if not big_bracket(pi, big_bracket(pi, mu)).is_zero():
            continue
        om = random_two_form(rng, P)
        rep = is_complementary_form(mu, pi, om)
        assert rep.condition("dualized_torsion_route_agrees").ok
        done += 1


def test_compatible_pn():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    pi = P.theta(0) * P.theta(1)
    N1, N2 = scalar_matrix(P, 1), scalar_matrix(P, 2)
    rep = compatible_PN(mu, (pi, N1), (pi.scale(2), N2))
    assert rep.verdict
    with pytest.raises(PreconditionError):
        compatible_PN(mu, (pi, [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]]), (pi, N2))


def test_compatible_omegan_and_hitchin():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    om = P.xi(0) * P.xi(1)
    rep = compatible_OmegaN(mu, (om, scalar_matrix(P, 1)), (om.scale(2), scalar_matrix(P, 3)))
    assert rep.verdict
    rep = compatible_Hitchin(mu, (om, scalar_matrix(P, 1)), (om.scale(2), scalar_matrix(P, 3)))
    assert rep.verdict


def test_compatible_pomega_and_complementary():
    mu = mu_of("aff1-2")
    P = mu.phase_space
    pi = P.theta(0) * P.theta(1)
    om = P.xi(0) * P.xi(1)
    rep = compatible_POmega(mu, (pi, om), (pi.scale(2), om.scale(-1)))
    assert rep.verdict
    rep = compatible_complementary(mu, pi, om, om.scale(3))
    assert rep.verdict
