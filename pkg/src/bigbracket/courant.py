"""Courant structures as degree-3 elements, derived brackets and anchors,
Lie algebroid differentials, backgrounds, and the axiom-level oracle."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import GradedElement, PhaseSpace, big_bracket, multiply
from .errors import DegreeError
from .report import StructureReport
from .supergeometry import pairing


class CourantStructure:
    """A total-degree-3 element with its bidegree decomposition cached.

    ``is_valid`` means {theta, theta} = 0; invalid structures are still
    useful (torsions, concomitants and deformations are plain elements).
    """

    def __init__(self, theta: GradedElement):
        if not theta.is_zero() and theta.total_degree_component(3) != theta:
            raise DegreeError("a Courant structure must have total degree 3")
        self.theta = theta
        self.mu = theta.bidegree_component(1, 2)
        self.gamma = theta.bidegree_component(2, 1)
        self.phi = theta.bidegree_component(0, 3)
        self.psi = theta.bidegree_component(3, 0)

    @property
    def phase_space(self) -> PhaseSpace:
        return self.theta.phase_space

    def residual(self) -> GradedElement:
        return big_bracket(self.theta, self.theta)

    @property
    def is_valid(self) -> bool:
        return self.residual().is_zero()

    def __eq__(self, other):
        if isinstance(other, CourantStructure):
            return self.theta == other.theta
        return NotImplemented

    def __repr__(self):
        return f"CourantStructure({self.theta})"


def as_element(theta) -> GradedElement:
    """Accept either a CourantStructure or a raw element."""
    return theta.theta if isinstance(theta, CourantStructure) else theta


def dorfman(theta, X: GradedElement, Y: GradedElement) -> GradedElement:
    """Derived bracket {{X, theta}, Y}."""
    t = as_element(theta)
    return big_bracket(big_bracket(X, t), Y)


def anchor_apply(theta, X: GradedElement, f: GradedElement) -> GradedElement:
    """Anchor action {{X, theta}, f} on a base function f."""
    t = as_element(theta)
    if not f.is_zero() and f.bidegree_component(0, 0) != f:
        raise DegreeError("anchor_apply expects a base function")
    return big_bracket(big_bracket(X, t), f)


def differential(mu: GradedElement, f: GradedElement) -> GradedElement:
    """The algebroid differential {mu, f}."""
    if not mu.is_zero() and mu.bidegree_component(1, 2) != mu:
        raise DegreeError("differential expects a (1,2) element")
    return big_bracket(mu, f)


def with_background(mu: GradedElement, H: GradedElement) -> CourantStructure:
    """theta = mu + H for a (1,2) element and a 3-form."""
    if not mu.is_zero() and mu.bidegree_component(1, 2) != mu:
        raise DegreeError("background construction expects mu in bidegree (1,2)")
    if not H.is_zero() and H.bidegree_component(0, 3) != H:
        raise DegreeError("background must be a 3-form (bidegree (0,3))")
    return CourantStructure(mu + H)


def is_courant(theta) -> StructureReport:
    """Verdict: {theta, theta} = 0 (the residual is the witness)."""
    struct = theta if isinstance(theta, CourantStructure) else CourantStructure(theta)
    rep = StructureReport("courant")
    res = struct.residual()
    rep.add("self_bracket_vanishes", res.is_zero(), residual=res)
    return rep


def is_lie_algebroid(mu: GradedElement) -> StructureReport:
    """Verdict: mu is homogeneous of bidegree (1,2) and {mu, mu} = 0."""
    rep = StructureReport("lie-algebroid")
    if not rep.add("bidegree_is_1_2", mu.bidegree_component(1, 2) == mu, residual=mu):
        return rep
    res = big_bracket(mu, mu)
    rep.add("jacobi_self_bracket_vanishes", res.is_zero(), residual=res)
    return rep


# -- section bases -----------------------------------------------------------


def basis_sections(P: PhaseSpace):
    """The 2d constant basis sections: th_0..th_{d-1}, xi_0..xi_{d-1}."""
    d = P.rank
    return [P.theta(a) for a in range(d)] + [P.xi(a) for a in range(d)]


def test_functions(P: PhaseSpace):
    """Base polynomials used to probe polynomial-coefficient behaviour:
    1, x_i, and x_i x_j.  Fixed once; enough to detect failures at the
    degrees produced by one bracket of the instance families in use."""
    funcs = [P.one()]
    for i in range(P.base_dim):
        funcs.append(P.x(i))
    for i in range(P.base_dim):
        for j in range(i, P.base_dim):
            funcs.append(multiply(P.x(i), P.x(j)))
    return funcs


def probe_sections(P: PhaseSpace):
    """Basis sections, multiplied by test functions when the base is not a
    point."""
    base = basis_sections(P)
    if P.base_dim == 0:
        return base
    out = []
    for f in test_functions(P):
        for s in base:
            out.append(multiply(f, s))
    return out


# -- validity and the axiom oracle -------------------------------------------


@dataclass
class AxiomReport:
    """Outcome of the definition-level Dorfman axiom check."""

    axiom1_ok: bool = True
    axiom2_ok: bool = True
    axiom3_ok: bool = True
    witness: tuple | None = None  # (axiom, X, Y, Z, residual)
    checked: int = 0

    @property
    def all_ok(self):
        return self.axiom1_ok and self.axiom2_ok and self.axiom3_ok


def axioms_oracle(theta) -> AxiomReport:
    """Check the three Dorfman-bracket axioms directly on probe sections.

    (1) rho(X).<Y,Z> = <[X,Y],Z> + <Y,[X,Z]>
    (2) rho(X).<Y,Z> = <X, [Y,Z] + [Z,Y]>
    (3) [X,[Y,Z]] = [[X,Y],Z] + [Y,[X,Z]]

    This is the oracle against which the {theta,theta}=0 route is validated.
    """
    t = as_element(theta)
    P = t.phase_space
    secs = probe_sections(P)
    rep = AxiomReport()
    bt = [big_bracket(X, t) for X in secs]
    dorf = {
        (i, j): big_bracket(bt[i], Y)
        for i in range(len(secs))
        for j, Y in enumerate(secs)
    }
    for i, X in enumerate(secs):
        for j, Y in enumerate(secs):
            for k, Z in enumerate(secs):
                rep.checked += 1
                rho_pair = big_bracket(bt[i], big_bracket(Y, Z))
                r1 = rho_pair - big_bracket(dorf[i, j], Z) - big_bracket(Y, dorf[i, k])
                if not r1.is_zero() and rep.axiom1_ok:
                    rep.axiom1_ok = False
                    rep.witness = rep.witness or (1, i, j, k, r1)
                r2 = rho_pair - big_bracket(X, dorf[j, k] + dorf[k, j])
                if not r2.is_zero() and rep.axiom2_ok:
                    rep.axiom2_ok = False
                    rep.witness = rep.witness or (2, i, j, k, r2)
                r3 = (
                    big_bracket(bt[i], dorf[j, k])
                    - big_bracket(big_bracket(dorf[i, j], t), Z)
                    - big_bracket(bt[j], dorf[i, k])
                )
                if not r3.is_zero() and rep.axiom3_ok:
                    rep.axiom3_ok = False
                    rep.witness = rep.witness or (3, i, j, k, r3)
    return rep
