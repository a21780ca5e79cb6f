"""Phase-space construction, Lie algebroid data as degree-(1,2) elements,
the identity element, the canonical pairing, and dualization.

Indexing is 0-based throughout: fibre basis e_0..e_{d-1} (the th generators),
dual basis eps^0..eps^{d-1} (the xi generators), base coordinates x0..x{n-1}.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import GradedElement, PhaseSpace, big_bracket
from .errors import DegreeError, PreconditionError, UnsupportedModeError


class AlgebroidSpec:
    """Anchor and structure-constant data of a Lie (or pre-Lie) algebroid.

    ``anchor``   d x n matrix; entry (a, i) is a polynomial in x (a
                 GradedElement of bidegree (0,0), or anything Fraction()
                 accepts for a constant).
    ``structure`` map (a, b, c) -> polynomial coefficient of e_c in
                 [e_a, e_b], stored for a < b only; antisymmetry is implied.
    """

    def __init__(self, phase_space: PhaseSpace, anchor=None, structure=None):
        self.phase_space = phase_space
        n, d = phase_space.base_dim, phase_space.rank
        self.anchor = [[self._coerce(anchor[a][i] if anchor else 0) for i in range(n)] for a in range(d)]
        self.structure = {}
        for (a, b, c), v in (structure or {}).items():
            v = self._coerce(v)
            if v.is_zero():
                continue
            if a == b:
                raise ValueError(f"structure constant c^{c}_{{{a},{a}}} must vanish")
            if not (0 <= a < d and 0 <= b < d and 0 <= c < d):
                raise ValueError(f"structure index ({a},{b},{c}) out of range")
            if a > b:
                a, b, v = b, a, -v
            key = (a, b, c)
            prev = self.structure.get(key, phase_space.zero())
            total = prev + v
            if total.is_zero():
                self.structure.pop(key, None)
            else:
                self.structure[key] = total

    def _coerce(self, v) -> GradedElement:
        if isinstance(v, GradedElement):
            if v.phase_space != self.phase_space:
                raise ValueError("coefficient from a different phase space")
            if not v.is_zero() and v.bidegree() != (0, 0):
                raise DegreeError("coefficients must be base polynomials")
            return v
        return self.phase_space.scalar(Fraction(v))

    def bracket_coefficient(self, a: int, b: int, c: int) -> GradedElement:
        """c^c_{ab}, with antisymmetry applied."""
        if a == b:
            return self.phase_space.zero()
        if a < b:
            return self.structure.get((a, b, c), self.phase_space.zero())
        return -self.structure.get((b, a, c), self.phase_space.zero())


def mu_from_spec(P: PhaseSpace, spec: AlgebroidSpec) -> GradedElement:
    """Encode algebroid data as a (1,2) element.

    Signs are placed so that the derived-bracket contracts hold:
    {{th_a, mu}, th_b} = sum_c c^c_ab th_c and {{th_a, mu}, f} = rho applied
    to f.
    """
    if spec.phase_space != P:
        raise PreconditionError("spec built over a different phase space")
    n, d = P.base_dim, P.rank
    mu = P.zero()
    for (a, b, c), coeff in sorted(spec.structure.items()):
        mu = mu - coeff * P.xi(a) * P.xi(b) * P.theta(c)
    for a in range(d):
        for i in range(n):
            rho = spec.anchor[a][i]
            if not rho.is_zero():
                mu = mu + rho * P.p(i) * P.xi(a)
    return mu


def identity_element(P: PhaseSpace) -> GradedElement:
    """The (1,1) element with {id, u} = (q - p) u on each bidegree (p, q)."""
    out = P.zero()
    for a in range(P.rank):
        out = out + P.xi(a) * P.theta(a)
    return out


def pairing(u: GradedElement, v: GradedElement) -> GradedElement:
    """Canonical fibrewise pairing of two degree-1 elements, as {u, v}."""
    for w in (u, v):
        if not w.is_zero() and w.total_degree_component(1) != w:
            raise DegreeError("pairing arguments must have total degree 1")
    return big_bracket(u, v)


def dualize(f: GradedElement) -> GradedElement:
    """Exchange the roles of the xi and th generators (constant-coefficient
    mode only).  Bidegree (k, l) maps to (l, k); the map is an involution
    and commutes with the big bracket."""
    P = f.phase_space
    if P.base_dim != 0:
        raise UnsupportedModeError("dualize requires base_dim = 0")
    d = P.rank
    # swap ids in the written order, then renormalize with the Koszul sign
    terms = {}
    for (xe, pe, odd), c in f.terms():
        swapped = [o + d if o < d else o - d for o in odd]
        sign, canon = _sort_swapped(swapped)
        key = (xe, pe, canon)
        terms[key] = terms.get(key, 0) + sign * c
    return GradedElement(P, terms)


def _sort_swapped(odd):
    inv = 0
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if odd[i] > odd[j]:
                inv += 1
    return (-1) ** inv, tuple(sorted(odd))
