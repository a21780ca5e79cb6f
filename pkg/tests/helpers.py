"""Shared builders for the test suite: seeded random elements, matrices and
algebroid structures, all exact over the rationals."""

from fractions import Fraction

from bigbracket.algebra import PhaseSpace, big_bracket
from bigbracket.instances import (
    SplitMix64,
    fixed_instance,
    random_homogeneous,
    random_instance,
)
from bigbracket.supergeometry import AlgebroidSpec, mu_from_spec
from bigbracket.tensors import (
    bivector_element,
    form3_from_values,
    mat_mul,
    two_form_element,
)


def mu_of(name):
    return fixed_instance(name).mu()


def random_matrix(rng, P, antisymmetric=False, entries=(-2, -1, 0, 1, 2)):
    d = P.rank
    M = [[Fraction(rng.choice(entries)) for _ in range(d)] for _ in range(d)]
    if antisymmetric:
        for a in range(d):
            M[a][a] = Fraction(0)
            for b in range(a + 1, d):
                M[b][a] = -M[a][b]
    return M


def random_lie_mu(rng, rank=None):
    inst = random_instance(rng.randint(0, 2**31), "lie-algebra-solvable", rank)
    return inst.mu()


def random_two_form(rng, P):
    return two_form_element(P, random_matrix(rng, P, antisymmetric=True))


def random_bivector(rng, P):
    return bivector_element(P, random_matrix(rng, P, antisymmetric=True))


def random_three_form(rng, P):
    vals = {}
    d = P.rank
    for a in range(d):
        for b in range(a + 1, d):
            for c in range(b + 1, d):
                vals[(a, b, c)] = P.scalar(Fraction(rng.choice((-2, -1, 0, 1, 2))))
    return form3_from_values(P, lambda a, b, c: vals[(a, b, c)])


def random_closed_three_form(rng, P, mu, attempts=30):
    """A 3-form in the kernel of the differential, by combining two samples
    so the top-degree part of the differential cancels (rank 4) or trivially
    (rank <= 3)."""
    if P.rank <= 3:
        return random_three_form(rng, P)

    def top_coeff(el):
        for (xe, pe, odd), c in el.terms():
            if len(odd) == 4 and all(o < P.rank for o in odd):
                return c
        return Fraction(0)

    for _ in range(attempts):
        h1, h2 = random_three_form(rng, P), random_three_form(rng, P)
        c1 = top_coeff(big_bracket(mu, h1))
        c2 = top_coeff(big_bracket(mu, h2))
        H = h1.scale(c2) - h2.scale(c1) if (c1 != 0 or c2 != 0) else h1
        if big_bracket(mu, H).is_zero() and not H.is_zero():
            return H
    return P.zero()


def scalar_matrix(P, c):
    d = P.rank
    return [[Fraction(c) if i == j else Fraction(0) for j in range(d)] for i in range(d)]


def pqn_witness(c=Fraction(2)):
    """A deterministic exact quasi-Nijenhuis witness with nonzero background:
    the aff(1)-plus-line algebra, a non-closed 2-form, a scalar tensor, zero
    bivector, and the matching background 3-form."""
    inst = fixed_instance("aff1-line-3")
    P = inst.phase_space
    mu = inst.mu()
    omega = P.xi(1) * P.xi(2)
    H = big_bracket(mu, omega).scale(Fraction(1, 2 * c))
    N = scalar_matrix(P, c)
    return P, mu, P.zero(), N, omega, H, c * c
