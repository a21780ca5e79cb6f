"""Acceptance gate: one test per criterion, each printing a PASS line.

Everything is exact rational arithmetic, so every comparison is literal
equality; time budgets are met by construction (small ranks, seeded
deterministic instances)."""

import itertools
import json

from fractions import Fraction

from bigbracket.algebra import PhaseSpace, big_bracket, multiply
from bigbracket.courant import axioms_oracle, is_courant
from bigbracket.hierarchy import (
    HierarchyRequest,
    verify_hierarchy,
    verify_hierarchy_compatibility,
)
from bigbracket.instances import (
    InstanceFile,
    SplitMix64,
    fixed_instance,
    random_homogeneous,
    random_instance,
)
from bigbracket.structures import (
    compatible_complementary,
    compatible_Hitchin,
    compatible_OmegaN,
    compatible_PN,
    compatible_POmega,
    composite_tensor,
    is_closed,
    is_complementary_form,
    is_exact_PqN,
    is_exact_PqN_background,
    is_Hitchin,
    is_nijenhuis_lie,
    is_OmegaN,
    is_PN,
    is_poisson,
    is_POmega,
)
from bigbracket.supergeometry import identity_element
from bigbracket.tensors import (
    EndoTensor,
    anticommutator,
    bivector_element,
    concomitant_C,
    flat_matrix,
    function_to_endo,
    mat_det,
    mat_mul,
    nijenhuis_concomitant,
    sharp_matrix,
    torsion_function,
    torsion_sections,
    two_form_element,
)
from bigbracket.cli import main as cli_main

from helpers import (
    mu_of,
    pqn_witness,
    random_bivector,
    random_closed_three_form,
    random_lie_mu,
    random_matrix,
    random_two_form,
    scalar_matrix,
)


def announce(num, text):
    print(f"PASS criterion {num}: {text}")


def sections_of(P):
    return [P.theta(a) for a in range(P.rank)] + [P.xi(a) for a in range(P.rank)]


def poly_matrix(rng, P, S):
    """a*id + b*S^2 for antisymmetric S: commutes with both maps built
    from S, so all matrix preconditions hold by construction."""
    d = P.rank
    S2 = mat_mul(S, S)
    a = Fraction(rng.choice((-2, -1, 0, 1, 2)))
    b = Fraction(rng.choice((-1, 1)))
    return [[(a if i == j else Fraction(0)) + b * S2[i][j] for j in range(d)] for i in range(d)]


def routes_ok(rep):
    return all(c.ok for c in rep.conditions if c.name.endswith("route_agrees"))


def has_route(rep):
    return any(c.name.endswith("route_agrees") for c in rep.conditions)


# -- 1: algebra laws ---------------------------------------------------------------


def test_criterion_01_algebra_laws():
    rng = SplitMix64(1001)
    checked = 0
    while checked < 200:
        P = PhaseSpace(rng.randint(0, 1), rng.randint(2, 4))
        degs = [(rng.randint(0, 2), rng.randint(0, 2)) for _ in range(3)]
        u, v, w = (random_homogeneous(rng, P, k, l, 2) for k, l in degs)
        (ku, lu), (kv, lv), _ = degs
        du, dv = ku + lu, kv + lv
        nu, nv = du - 2, dv - 2
        assert multiply(u, v) == multiply(v, u).scale((-1) ** (du * dv))
        assert big_bracket(u, v) == big_bracket(v, u).scale(-((-1) ** (nu * nv)))
        assert big_bracket(u, multiply(v, w)) == multiply(big_bracket(u, v), w) + multiply(
            v, big_bracket(u, w)
        ).scale((-1) ** (nu * dv))
        assert big_bracket(u, big_bracket(v, w)) == big_bracket(
            big_bracket(u, v), w
        ) + big_bracket(v, big_bracket(u, w)).scale((-1) ** (nu * nv))
        b = big_bracket(u, v)
        assert b.is_zero() or b.bidegree_component(ku + kv - 1, lu + lv - 1) == b
        checked += 1
    announce(1, f"graded algebra and bracket laws on {checked} seeded triples")


# -- 2: identity element convention ------------------------------------------------


def test_criterion_02_identity_element_anchor():
    P = PhaseSpace(1, 2)
    e = identity_element(P)
    checked = 0
    # spanning monomials of every bidegree with k + l <= 4
    odd_sets = []
    for nxi in range(3):
        for nth in range(3):
            for xi_ids in itertools.combinations(range(2), nxi):
                for th_ids in itertools.combinations(range(2), nth):
                    odd_sets.append((xi_ids, th_ids))
    for s in range(3):  # p exponent
        for xe in range(2):  # x exponent, irrelevant to the bidegree
            for xi_ids, th_ids in odd_sets:
                k = s + len(th_ids)
                l = s + len(xi_ids)
                if k + l > 4:
                    continue
                u = P.monomial(Fraction(1), (xe,), (s,), xi_ids, th_ids)
                assert big_bracket(e, u) == u.scale(l - k)
                checked += 1
    announce(2, f"identity element grading law on {checked} spanning monomials")


# -- 3: Courant correspondence -----------------------------------------------------


def test_criterion_03_courant_oracle():
    rng = SplitMix64(1003)
    valid = invalid = 0
    for i in range(50):
        inst = random_instance(rng.randint(0, 2**31), "lie-algebra-solvable", rng.randint(2, 3))
        mu = inst.mu()
        P = mu.phase_space
        if i % 2 == 1:
            # deliberately perturb the structure constants
            a = rng.randint(0, P.rank - 2)
            b = rng.randint(a + 1, P.rank - 1)
            c = rng.randint(0, P.rank - 1)
            mu = mu - P.xi(a) * P.xi(b) * P.theta(c)
        rep = axioms_oracle(mu)
        assert rep.all_ok == is_courant(mu).verdict
        assert rep.axiom1_ok and rep.axiom2_ok
        if rep.all_ok:
            valid += 1
        else:
            invalid += 1
    assert valid > 0 and invalid > 0
    announce(3, f"bracket route matches the axiom oracle ({valid} valid, {invalid} invalid)")


# -- 4: the three basic equivalences -----------------------------------------------


def test_criterion_04_basic_equivalences():
    rng = SplitMix64(1004)
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 4))
        P = mu.phase_space
        assert is_poisson(mu, random_bivector(rng, P)).condition("torsion_route_agrees").ok
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 4))
        P = mu.phase_space
        assert is_closed(mu, random_two_form(rng, P)).condition("torsion_route_agrees").ok
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 4))
        P = mu.phase_space
        if rng.randint(0, 1):
            N = scalar_matrix(P, rng.choice((-2, -1, 1, 2)))
        else:
            # strictly upper triangular in one slot: scalar (zero) square
            N = scalar_matrix(P, 0)
            N[0][P.rank - 1] = Fraction(rng.choice((-2, -1, 1, 2)))
        rep = is_nijenhuis_lie(mu, N)
        assert rep.condition("function_route_agrees").ok
    announce(4, "Poisson/closed/Nijenhuis equivalences dual-path on 50 instances each")


# -- 5: torsion and concomitant identities ------------------------------------------


def test_criterion_05_torsion_identities():
    rng = SplitMix64(1005)

    def random_endo(P):
        return EndoTensor.from_blocks(
            P,
            N=random_matrix(rng, P),
            pi=random_matrix(rng, P, antisymmetric=True),
            omega=random_matrix(rng, P, antisymmetric=True),
        )

    # torsion sum rule and its diagonal specialisation
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        I, J = random_endo(P), random_endo(P)
        secs = sections_of(P)
        X = secs[rng.randint(0, len(secs) - 1)]
        Y = secs[rng.randint(0, len(secs) - 1)]
        assert torsion_sections(mu, I + J, X, Y) == torsion_sections(
            mu, I, X, Y
        ) + torsion_sections(mu, J, X, Y) + nijenhuis_concomitant(mu, I, J, X, Y)
        assert nijenhuis_concomitant(mu, I, I, X, Y) == torsion_sections(mu, I, X, Y).scale(2)

    # element-level concomitant doubles the section one under anticommutation
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        if rng.randint(0, 1):
            I = function_to_endo(random_bivector(rng, P))
        else:
            I = function_to_endo(random_two_form(rng, P))
        # a scalar endomorphism anticommutes with every off-diagonal one
        J = EndoTensor.from_lie_matrix(P, scalar_matrix(P, rng.choice((-2, -1, 1, 2))))
        assert anticommutator(I, J).is_zero()
        C = concomitant_C(mu, I, J).theta
        for X in sections_of(P):
            for Y in sections_of(P):
                assert big_bracket(big_bracket(X, C), Y) == nijenhuis_concomitant(
                    mu, I, J, X, Y
                ).scale(2)

    # graded-function torsion shortcut whenever the square is scalar
    for _ in range(50):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        I = random_endo(P)
        lam = I.square().proportional_to_identity()
        if lam is None or not I.is_skew():
            I = EndoTensor.from_lie_matrix(P, scalar_matrix(P, rng.choice((-2, -1, 1, 2))))
            lam = I.square().proportional_to_identity()
        F = torsion_function(mu, I, lam).theta
        for X in sections_of(P):
            for Y in sections_of(P):
                assert big_bracket(big_bracket(X, F), Y) == torsion_sections(mu, I, X, Y)
    announce(5, "torsion sum rule, polarization, and the scalar-square shortcut")


# -- 6: pair characterizations ------------------------------------------------------


def test_criterion_06_pair_characterizations():
    rng = SplitMix64(1006)
    # the rank-2 nonabelian family
    mu2 = mu_of("aff1-2")
    P2 = mu2.phase_space
    for a in (1, 2, -3):
        pi = (P2.theta(0) * P2.theta(1)).scale(a)
        om = (P2.xi(0) * P2.xi(1)).scale(a)
        N = scalar_matrix(P2, a)
        for rep in (is_PN(mu2, pi, N), is_OmegaN(mu2, om, N), is_Hitchin(mu2, om, N)):
            assert rep.verdict and has_route(rep) and routes_ok(rep)
        rep = is_POmega(mu2, pi, om)
        assert rep.verdict and has_route(rep) and routes_ok(rep)
        assert rep.condition("proof_identity_holds").ok

    # search-generated seeds at ranks 3 and 4
    for seed, rank in ((21, 3), (22, 3)):
        inst = random_instance(seed, "pomega-search", rank)
        mu = inst.mu()
        pi, om = inst.tensor_element("pi"), inst.tensor_element("omega")
        rep = is_POmega(mu, pi, om)
        assert rep.verdict and routes_ok(rep)
        N = composite_tensor(pi, om)
        assert is_PN(mu, pi, N).verdict
        assert is_OmegaN(mu, om, N).verdict
    for seed, rank in ((31, 3), (32, 4)):
        inst = random_instance(seed, "omegan-search", rank)
        mu = inst.mu()
        rep = is_OmegaN(mu, inst.tensor_element("omega"), inst.tensor_matrix("N"))
        assert rep.verdict and routes_ok(rep)

    # random instances where the verdicts vary: agreement is the assertion
    for _ in range(30):
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        pi = random_bivector(rng, P)
        om = random_two_form(rng, P)
        N = scalar_matrix(P, rng.choice((-2, -1, 1, 2)))
        assert routes_ok(is_PN(mu, pi, N))
        assert routes_ok(is_OmegaN(mu, om, N))
        assert routes_ok(is_POmega(mu, pi, om))
    announce(6, "pair characterizations dual-path on fixed, searched, and random seeds")


# -- 7: exact quasi-Nijenhuis with background ---------------------------------------


def const_matrix(M):
    """Fraction matrix from a constant GradedElement matrix."""
    out = []
    for row in M:
        vals = []
        for el in row:
            vals.append(sum((c for (_xe, _pe, odd), c in el.terms() if not odd), Fraction(0)))
        out.append(vals)
    return out


def preconditioned_tuple(rng, P):
    """(pi, N, omega, lam) satisfying every matrix precondition exactly:
    start from an antisymmetric S, take N = a*id + b*S^2 and pick the flat
    map as the odd polynomial in S that makes N^2 + sharp o flat scalar."""
    d = P.rank
    while True:
        S = random_matrix(rng, P, antisymmetric=True)
        pi = bivector_element(P, S)
        A = const_matrix(sharp_matrix(pi))
        a = Fraction(rng.choice((-2, -1, 1, 2)))
        b = Fraction(rng.choice((-1, 1)))
        A2 = mat_mul(A, A)
        N = [[(a if i == j else Fraction(0)) + b * A2[i][j] for j in range(d)] for i in range(d)]
        A3 = mat_mul(A2, A)
        B = [[(-2 * a * b) * A[i][j] + (-b * b) * A3[i][j] for j in range(d)] for i in range(d)]
        N2 = mat_mul(N, N)
        for sign in (1, -1):
            om = two_form_element(P, [[v * sign for v in row] for row in B])
            comb = mat_mul(A, const_matrix(flat_matrix(om)))
            total = [[N2[i][j] + comb[i][j] for j in range(d)] for i in range(d)]
            if all(total[i][j] == 0 for i in range(d) for j in range(d) if i != j) and len(
                {total[i][i] for i in range(d)}
            ) == 1:
                return pi, N, om, total[0][0]


def test_criterion_07_exact_quasi_nijenhuis():
    rng = SplitMix64(1007)
    # rank-2 family: flat o sharp is scalar automatically, so the converse
    # implication is exercised on every member
    mu2 = mu_of("aff1-2")
    P2 = mu2.phase_space
    for a, b in ((1, 1), (2, -1), (-1, 3)):
        pi = (P2.theta(0) * P2.theta(1)).scale(a)
        om = (P2.xi(0) * P2.xi(1)).scale(b)
        N = scalar_matrix(P2, 0)
        rep = is_exact_PqN(mu2, pi, N, om)
        assert rep.condition("forward_implication_holds").ok
        assert rep.condition("converse_implication_holds").ok

    # searched rank-3 witnesses with nonzero background
    for seed in (3, 42, 7):
        inst = random_instance(seed, "pqn-search", 3)
        mu = inst.mu()
        H = inst.tensor_element("H")
        assert not H.is_zero()
        rep = is_exact_PqN_background(
            mu,
            inst.tensor_element("pi"),
            inst.tensor_matrix("N"),
            inst.tensor_element("omega"),
            H,
            inst.tensor_scalar("lambda"),
        )
        assert rep.verdict
        assert rep.condition("background_torsion_route_agrees").ok

    # the deterministic witness family, plus a wrong-background negative
    P, mu, pi, N, omega, H, lam = pqn_witness(Fraction(3))
    rep = is_exact_PqN_background(mu, pi, N, omega, H, lam)
    assert rep.verdict and rep.condition("background_torsion_route_agrees").ok
    rep = is_exact_PqN_background(mu, pi, N, omega, H.scale(-1), lam)
    assert not rep.verdict and rep.condition("background_torsion_route_agrees").ok

    # random preconditioned rank-4 tuples: both routes agree on every verdict
    agree = 0
    while agree < 12:
        mu = random_lie_mu(rng, 4)
        P = mu.phase_space
        pi, N, om, lam = preconditioned_tuple(rng, P)
        H = random_closed_three_form(rng, P, mu)
        rep = is_exact_PqN_background(mu, pi, N, om, H, lam)
        if not any(c.name == "background_torsion_route_agrees" for c in rep.conditions):
            continue
        assert rep.condition("background_torsion_route_agrees").ok
        agree += 1
    announce(7, "exact quasi-Nijenhuis characterization dual-path, background witnesses included")


# -- 8: complementary forms ----------------------------------------------------------


def test_criterion_08_complementary_forms():
    rng = SplitMix64(1008)
    done = 0
    while done < 30:
        mu = random_lie_mu(rng, rng.randint(2, 3))
        P = mu.phase_space
        pi = random_bivector(rng, P)
        if not big_bracket(pi, big_bracket(pi, mu)).is_zero():
            continue
        om = random_two_form(rng, P)
        rep = is_complementary_form(mu, pi, om)
        assert rep.condition("dualized_torsion_route_agrees").ok
        done += 1
    announce(8, "complementary-form condition matches the dualized torsion on 30 instances")


# -- 9: compatibility ----------------------------------------------------------------


def test_criterion_09_compatibility():
    rng = SplitMix64(1009)

    # hypothesis-satisfying pairs on an abelian structure: only the matrix
    # conditions are non-trivial, so both verdicts vary and must agree
    def abelian_pair(P, invertible=False):
        while True:
            S = random_matrix(rng, P, antisymmetric=True)
            if invertible and mat_det(P, [[P.scalar(v) for v in row] for row in S]).is_zero():
                continue
            return bivector_element(P, S), poly_matrix(rng, P, S), two_form_element(P, S)

    P3 = PhaseSpace(0, 3)
    mu0 = P3.zero()

    done = 0
    while done < 30:
        pi1, N1, _ = abelian_pair(P3)
        pi2, N2, _ = abelian_pair(P3)
        if not (is_PN(mu0, pi1, N1, deep=False).verdict
                and is_PN(mu0, pi2, N2, deep=False).verdict):
            continue
        rep = compatible_PN(mu0, (pi1, N1), (pi2, N2), check_inputs=False)
        assert rep.condition("criterion_route_agrees").ok
        done += 1

    done = 0
    while done < 30:
        _, N1, om1 = abelian_pair(P3)
        _, N2, om2 = abelian_pair(P3)
        if not (is_OmegaN(mu0, om1, N1, deep=False).verdict
                and is_OmegaN(mu0, om2, N2, deep=False).verdict):
            continue
        rep = compatible_OmegaN(mu0, (om1, N1), (om2, N2), check_inputs=False)
        assert rep.condition("criterion_route_agrees").ok
        done += 1

    # the bivector/2-form kind needs the cross composites to anticommute,
    # which a scaled second pair provides by construction
    done = 0
    while done < 30:
        pi1, _, om1 = abelian_pair(P3)
        s = Fraction(rng.choice((-2, -1, 1, 2, 3)))
        pi2, om2 = pi1.scale(s), om1.scale(-s)
        if not (is_POmega(mu0, pi1, om1, deep=False).verdict
                and is_POmega(mu0, pi2, om2, deep=False).verdict):
            continue
        rep = compatible_POmega(mu0, (pi1, om1), (pi2, om2), check_inputs=False)
        if not has_route(rep):
            continue
        assert routes_ok(rep)
        done += 1

    done = 0
    while done < 30:
        pi1, _, om1 = abelian_pair(P3)
        _, _, om2 = abelian_pair(P3)
        if not (is_complementary_form(mu0, pi1, om1).verdict
                and is_complementary_form(mu0, pi1, om2).verdict):
            continue
        rep = compatible_complementary(mu0, pi1, om1, om2, check_inputs=False)
        assert rep.condition("criterion_route_agrees").ok
        done += 1

    # the nondegenerate kind needs invertible forms, hence even rank
    P4 = PhaseSpace(0, 4)
    mu4 = P4.zero()
    done = 0
    while done < 30:
        pi1, N1, om1 = abelian_pair(P4, invertible=True)
        pi2, N2, om2 = abelian_pair(P4, invertible=True)
        if not (is_Hitchin(mu4, om1, N1, deep=False).verdict
                and is_Hitchin(mu4, om2, N2, deep=False).verdict):
            continue
        rep = compatible_Hitchin(mu4, (om1, N1), (om2, N2), check_inputs=False)
        if has_route(rep):
            assert routes_ok(rep)
            done += 1

    # derived suite 1: four 2-form/tensor structures from a compatible cross
    inst = random_instance(31, "omegan-search", 3)
    mu = inst.mu()
    om, N = inst.tensor_element("omega"), inst.tensor_matrix("N")
    om2, N2 = om.scale(2), [[v * 3 for v in row] for row in N]
    assert is_OmegaN(mu, om, N2).verdict  # the cross hypothesis
    assert is_OmegaN(mu, om2, N).verdict  # the derived conclusion
    quads = [(om, N), (om, N2), (om2, N), (om2, N2)]
    for i, one in enumerate(quads):
        for other in quads[i + 1:]:
            assert compatible_OmegaN(mu, one, other).verdict

    # derived suite 2: the bivector analogue through composite tensors
    inst = random_instance(21, "pomega-search", 3)
    mu = inst.mu()
    pi, om = inst.tensor_element("pi"), inst.tensor_element("omega")
    N = composite_tensor(pi, om)
    pi2, N2 = pi.scale(2), [[v * 3 for v in row] for row in N]
    assert is_PN(mu, pi, N2).verdict
    assert is_PN(mu, pi2, N).verdict
    quads = [(pi, N), (pi, N2), (pi2, N), (pi2, N2)]
    for i, one in enumerate(quads):
        for other in quads[i + 1:]:
            assert compatible_PN(mu, one, other).verdict

    # derived suite 3: the bivector/2-form square with anticommuting
    # cross composites
    pi2, om2 = pi.scale(2), om.scale(-2)
    quads = [(pi, om), (pi, om2), (pi2, om), (pi2, om2)]
    for p, o in quads:
        assert is_POmega(mu, p, o).verdict
    N_hat = composite_tensor(pi, om2)
    minus_hat = composite_tensor(pi2, om)
    assert N_hat == [[-v for v in row] for row in minus_hat]
    for i, one in enumerate(quads):
        for other in quads[i + 1:]:
            assert compatible_POmega(mu, one, other).verdict
    announce(9, "compatibility criteria agree on 30 instances per kind; derived suites pass")


# -- 10: hierarchies ------------------------------------------------------------------


def test_criterion_10_hierarchies():
    mu2 = mu_of("aff1-2")
    P2 = mu2.phase_space
    for a, b in ((1, 1), (2, -1), (-1, 2)):
        pi = (P2.theta(0) * P2.theta(1)).scale(a)
        om = (P2.xi(0) * P2.xi(1)).scale(b)
        N = composite_tensor(pi, om)
        for fam, kwargs in (
            ("pomega", {"pi": pi, "omega": om}),
            ("omegan", {"omega": om, "N": N}),
            ("complementary", {"pi": pi, "omega": om}),
        ):
            req = HierarchyRequest(mu2, fam, n_max=3, m_max=3, k_max=3, **kwargs)
            assert verify_hierarchy(req).verdict, fam
        req = HierarchyRequest(
            mu2, "prop94", pi=pi, omega=om, n_max=3, m_max=3, k_max=3,
            extra={"pi2": pi.scale(2), "omega2": om.scale(-2)},
        )
        assert verify_hierarchy(req).verdict
        for fam, kwargs in (
            ("pn", {"pi": pi, "N": N}),
            ("omegan", {"omega": om, "N": N}),
            ("pomega", {"pi": pi, "omega": om}),
            ("complementary", {"pi": pi, "omega": om}),
        ):
            req = HierarchyRequest(mu2, fam, n_max=3, m_max=3, k_max=3, **kwargs)
            assert verify_hierarchy_compatibility(req).verdict, fam

    # a search-generated rank-3 seed whose tensor is not scalar
    found = None
    for seed in range(40, 200):
        inst = random_instance(seed, "omegan-search", 3)
        N = inst.tensor_matrix("N")
        if any(N[i][j] != 0 for i in range(3) for j in range(3) if i != j):
            found = (inst.mu(), inst.tensor_element("omega"), N)
            break
    assert found is not None, "no non-scalar tensor seed found"
    mu, om, N = found
    req = HierarchyRequest(mu, "omegan", omega=om, N=N, n_max=3, m_max=3, k_max=3)
    assert verify_hierarchy(req).verdict
    req = HierarchyRequest(mu, "omegan", omega=om, N=N, n_max=3, m_max=3, k_max=3)
    assert verify_hierarchy_compatibility(req).verdict
    announce(10, "hierarchy grids at indices <= 3 on fixed and non-scalar searched seeds")


# -- 11: CLI contract -----------------------------------------------------------------


def test_criterion_11_cli_contract(tmp_path, capsys):
    inst = fixed_instance("aff1-2")
    P = inst.phase_space
    inst.tensors["pi"] = ("bivector", [[P.zero(), P.one()], [-P.one(), P.zero()]])
    inst.tensors["omega"] = ("two-form", [[P.zero(), P.one()], [-P.one(), P.zero()]])
    path = tmp_path / "inst.json"
    path.write_text(inst.dumps())

    # round trip
    assert InstanceFile.loads(path.read_text()).dumps() == path.read_text()

    # exit codes: true, false, input error
    assert cli_main(["check", str(path), "--structure", "pomega"]) == 0
    capsys.readouterr()
    bad = fixed_instance("aff1-2")
    bad.tensors["pi"] = ("bivector", [[P.zero(), P.one()], [-P.one(), P.zero()]])
    bad.tensors["N"] = ("endomorphism", [[P.one(), P.zero()], [P.zero(), P.one().scale(2)]])
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(bad.dumps())
    assert cli_main(["check", str(bad_path), "--structure", "pn"]) == 1
    capsys.readouterr()
    assert cli_main(["validate", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()

    # selftest reproducibility: two consecutive runs are bitwise identical
    assert cli_main(["selftest", "--seed", "42", "--cases", "100", "--report", "json"]) == 0
    first = capsys.readouterr().out
    assert cli_main(["selftest", "--seed", "42", "--cases", "100", "--report", "json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["verdict"] is True and payload["seed"] == 42
    announce(11, "CLI round-trip, exit codes, and bitwise-reproducible selftest")
