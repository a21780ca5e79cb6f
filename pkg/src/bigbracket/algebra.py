"""Exact arithmetic in the free graded-commutative algebra on the generators
of the shifted cotangent space of a degree-shifted vector bundle.

Generators and bidegrees, for base dimension ``n`` and fibre rank ``d``:

    x^i   (0,0)   even, i = 0..n-1      base coordinates
    p_i   (1,1)   even                  moments of x^i
    xi^a  (0,1)   odd,  a = 0..d-1      fibre coordinates
    th_a  (1,0)   odd                   moments of xi^a

Elements are finite sums of monomials with exact rational coefficients.
The canonical Poisson bracket ("big bracket") has bidegree (-1,-1) and is
generated by the pairings {p_i, x^i} = {th_a, xi^a} = 1, extended as a
biderivation with Koszul signs.  The sign convention is pinned operationally
by the identity-element law {id, u} = (q - p) u for u of bidegree (p, q).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import AmbientMismatchError, DegreeError

Scalar = Fraction


class PhaseSpace:
    """Generator table for a fixed base dimension and rank.

    Odd generators are numbered 0..2d-1: ids 0..d-1 are the xi's, ids
    d..2d-1 are the th's.  The canonical monomial order lists odd ids
    increasingly, so xi^0 < ... < xi^{d-1} < th_0 < ... < th_{d-1}.
    """

    __slots__ = ("base_dim", "rank")

    def __init__(self, base_dim: int, rank: int):
        if base_dim < 0 or rank < 1:
            raise ValueError("need base_dim >= 0 and rank >= 1")
        self.base_dim = base_dim
        self.rank = rank

    def __eq__(self, other):
        return (
            isinstance(other, PhaseSpace)
            and self.base_dim == other.base_dim
            and self.rank == other.rank
        )

    def __hash__(self):
        return hash((self.base_dim, self.rank))

    def __repr__(self):
        return f"PhaseSpace(base_dim={self.base_dim}, rank={self.rank})"

    # -- element constructors -------------------------------------------

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def scalar(self, c) -> "GradedElement":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return GradedElement(self, {self._unit_key(): c})

    def one(self) -> "GradedElement":
        return self.scalar(1)

    def x(self, i: int) -> "GradedElement":
        self._check_base(i)
        xe = tuple(1 if j == i else 0 for j in range(self.base_dim))
        pe = (0,) * self.base_dim
        return GradedElement(self, {(xe, pe, ()): Fraction(1)})

    def p(self, i: int) -> "GradedElement":
        self._check_base(i)
        xe = (0,) * self.base_dim
        pe = tuple(1 if j == i else 0 for j in range(self.base_dim))
        return GradedElement(self, {(xe, pe, ()): Fraction(1)})

    def xi(self, a: int) -> "GradedElement":
        self._check_fibre(a)
        return self._odd_gen(a)

    def theta(self, a: int) -> "GradedElement":
        self._check_fibre(a)
        return self._odd_gen(self.rank + a)

    def monomial(self, coeff, x_exps=(), p_exps=(), xi_ids=(), theta_ids=()) -> "GradedElement":
        """Build a single monomial; odd factors are given in the written
        order and normalized with the Koszul sign."""
        coeff = Fraction(coeff)
        n, d = self.base_dim, self.rank
        xe = list(x_exps) + [0] * (n - len(x_exps))
        pe = list(p_exps) + [0] * (n - len(p_exps))
        if len(xe) != n or len(pe) != n or min(xe + pe, default=0) < 0:
            raise ValueError("bad even exponents")
        odd = [int(a) for a in xi_ids] + [self.rank + int(a) for a in theta_ids]
        for o in odd:
            if not 0 <= o < 2 * d:
                raise ValueError(f"odd generator id {o} out of range")
        sign, canon = _sort_odd(tuple(odd))
        if canon is None:
            return self.zero()
        coeff *= sign
        if coeff == 0:
            return self.zero()
        return GradedElement(self, {(tuple(xe), tuple(pe), canon): coeff})

    # -- helpers ---------------------------------------------------------

    def _unit_key(self):
        z = (0,) * self.base_dim
        return (z, z, ())

    def _odd_gen(self, oid: int) -> "GradedElement":
        z = (0,) * self.base_dim
        return GradedElement(self, {(z, z, (oid,)): Fraction(1)})

    def _check_base(self, i):
        if not 0 <= i < self.base_dim:
            raise ValueError(f"base index {i} out of range for n={self.base_dim}")

    def _check_fibre(self, a):
        if not 0 <= a < self.rank:
            raise ValueError(f"fibre index {a} out of range for d={self.rank}")

    def odd_name(self, oid: int) -> str:
        d = self.rank
        return f"xi{oid}" if oid < d else f"th{oid - d}"


def _sort_odd(odd):
    """Sort an odd-id tuple, returning (koszul sign, sorted tuple).

    Returns (0, None) when an id repeats (odd generators square to zero).
    """
    if len(set(odd)) != len(odd):
        return 0, None
    inv = 0
    lst = list(odd)
    for i in range(len(lst)):
        for j in range(i + 1, len(lst)):
            if lst[i] > lst[j]:
                inv += 1
    return (-1) ** inv, tuple(sorted(lst))


def _merge_odd(o1, o2):
    """Concatenate two canonical odd tuples; (sign, merged) or (0, None)."""
    if not o1:
        return 1, o2
    if not o2:
        return 1, o1
    s1 = set(o1)
    if s1 & set(o2):
        return 0, None
    # inversions between the two sorted blocks
    inv = 0
    for a in o1:
        for b in o2:
            if a > b:
                inv += 1
    return (-1) ** inv, tuple(sorted(o1 + o2))


def _key_bidegree(key, d):
    xe, pe, odd = key
    np = sum(pe)
    nth = sum(1 for o in odd if o >= d)
    nxi = len(odd) - nth
    return (np + nth, np + nxi)


class GradedElement:
    """A finite rational-coefficient sum of canonical monomials.

    Internal representation: ``_terms`` maps a key
    ``(x_exponents, p_exponents, odd_ids)`` to a nonzero Fraction.  Keys are
    canonical (odd ids strictly increasing), so equality is structural.
    Instances are treated as immutable.
    """

    __slots__ = ("phase_space", "_terms")

    def __init__(self, phase_space: PhaseSpace, terms: dict):
        self.phase_space = phase_space
        self._terms = {k: c for k, c in terms.items() if c != 0}

    # -- basic predicates --------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        """Sorted list of (key, coefficient) pairs."""
        return sorted(self._terms.items())

    def num_terms(self) -> int:
        return len(self._terms)

    def bidegree_components(self) -> dict:
        """Map (k, l) -> homogeneous component."""
        comps: dict = {}
        d = self.phase_space.rank
        for key, c in self._terms.items():
            bd = _key_bidegree(key, d)
            comps.setdefault(bd, {})[key] = c
        return {
            bd: GradedElement(self.phase_space, t)
            for bd, t in sorted(comps.items())
        }

    def bidegree_component(self, k: int, l: int) -> "GradedElement":
        d = self.phase_space.rank
        terms = {
            key: c
            for key, c in self._terms.items()
            if _key_bidegree(key, d) == (k, l)
        }
        return GradedElement(self.phase_space, terms)

    def total_degree_component(self, t: int) -> "GradedElement":
        d = self.phase_space.rank
        terms = {
            key: c
            for key, c in self._terms.items()
            if sum(_key_bidegree(key, d)) == t
        }
        return GradedElement(self.phase_space, terms)

    def is_homogeneous(self) -> bool:
        return len(self.bidegree_components()) <= 1

    def bidegree(self):
        """Bidegree of a homogeneous element, None for 0, DegreeError else."""
        comps = self.bidegree_components()
        if not comps:
            return None
        if len(comps) > 1:
            raise DegreeError(f"element is not homogeneous: bidegrees {sorted(comps)}")
        return next(iter(comps))

    def total_degree(self):
        bd = self.bidegree()
        return None if bd is None else bd[0] + bd[1]

    def parity(self) -> int:
        """0 for even, 1 for odd; DegreeError for mixed parity."""
        pars = {len(key[2]) % 2 for key in self._terms}
        if len(pars) > 1:
            raise DegreeError("element has mixed parity")
        return pars.pop() if pars else 0

    # -- arithmetic --------------------------------------------------------

    def _check_space(self, other):
        if self.phase_space != other.phase_space:
            raise AmbientMismatchError(
                f"{self.phase_space} vs {other.phase_space}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.phase_space.scalar(other)
        self._check_space(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            nc = terms.get(k, 0) + c
            if nc == 0:
                terms.pop(k, None)
            else:
                terms[k] = nc
        return GradedElement(self.phase_space, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.phase_space, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.phase_space.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(other, self)

    def __truediv__(self, other):
        return self.scale(Fraction(1, 1) / Fraction(other))

    def scale(self, c) -> "GradedElement":
        c = Fraction(c)
        if c == 0:
            return self.phase_space.zero()
        return GradedElement(self.phase_space, {k: c * v for k, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.phase_space.scalar(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.phase_space == other.phase_space and self._terms == other._terms

    def __hash__(self):
        return hash((self.phase_space, frozenset(self._terms.items())))

    def bracket(self, other) -> "GradedElement":
        return big_bracket(self, other)

    # -- presentation --------------------------------------------------------

    def __repr__(self):
        return f"GradedElement({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        P = self.phase_space
        parts = []
        for key, c in self.terms():
            xe, pe, odd = key
            factors = []
            for i, e in enumerate(xe):
                if e:
                    factors.append(f"x{i}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(pe):
                if e:
                    factors.append(f"p{i}" + (f"^{e}" if e > 1 else ""))
            for o in odd:
                factors.append(P.odd_name(o))
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


# -- products and the bracket ------------------------------------------------


def multiply(f: GradedElement, g: GradedElement) -> GradedElement:
    """Graded-commutative product."""
    f._check_space(g)
    out: dict = {}
    for (x1, p1, o1), c1 in f._terms.items():
        for (x2, p2, o2), c2 in g._terms.items():
            sign, odd = _merge_odd(o1, o2)
            if sign == 0:
                continue
            xe = tuple(a + b for a, b in zip(x1, x2))
            pe = tuple(a + b for a, b in zip(p1, p2))
            key = (xe, pe, odd)
            nc = out.get(key, 0) + sign * c1 * c2
            if nc == 0:
                out.pop(key, None)
            else:
                out[key] = nc
    return GradedElement(f.phase_space, out)


def _d_even(key, c, i, which):
    """Partial derivative along x_i (which=0) or p_i (which=1)."""
    xe, pe, odd = key
    exps = xe if which == 0 else pe
    e = exps[i]
    if e == 0:
        return None
    new = list(exps)
    new[i] = e - 1
    if which == 0:
        return (tuple(new), pe, odd), c * e
    return (xe, tuple(new), odd), c * e


def _d_odd(key, c, oid):
    """Left derivative along the odd generator with id ``oid``."""
    xe, pe, odd = key
    try:
        pos = odd.index(oid)
    except ValueError:
        return None
    sign = -1 if pos % 2 else 1
    return (xe, pe, odd[:pos] + odd[pos + 1 :]), sign * c


def _acc_product(out, k1, c1, k2, c2):
    x1, p1, o1 = k1
    x2, p2, o2 = k2
    sign, odd = _merge_odd(o1, o2)
    if sign == 0:
        return
    key = (
        tuple(a + b for a, b in zip(x1, x2)),
        tuple(a + b for a, b in zip(p1, p2)),
        odd,
    )
    nc = out.get(key, 0) + sign * c1 * c2
    if nc == 0:
        out.pop(key, None)
    else:
        out[key] = nc


def big_bracket(f: GradedElement, g: GradedElement) -> GradedElement:
    """The canonical degree-(-1,-1) Poisson bracket.

    On monomials m1, m2 (with |m1| the total parity of m1):

        {m1, m2} = sum_i [ d_p_i m1 * d_x_i m2 - d_x_i m1 * d_p_i m2 ]
                 - (-1)^{|m1|} sum over odd ids o of  d_o m1 * d_o' m2,

    where o' is the conjugate odd id (xi^a <-> th_a) and d_o is the left
    derivative.  This is the unique biderivation with the generator pairings
    {p_i, x^i} = {th_a, xi^a} = 1 that satisfies {id, u} = (q - p) u.
    """
    f._check_space(g)
    P = f.phase_space
    n, d = P.base_dim, P.rank
    out: dict = {}
    for k1, c1 in f._terms.items():
        x1, p1, o1 = k1
        pref = 1 if len(o1) % 2 else -1
        for k2, c2 in g._terms.items():
            x2, p2, o2 = k2
            for i in range(n):
                if p1[i] and x2[i]:
                    (ka, ca) = _d_even(k1, c1, i, 1)
                    (kb, cb) = _d_even(k2, c2, i, 0)
                    _acc_product(out, ka, ca, kb, cb)
                if x1[i] and p2[i]:
                    (ka, ca) = _d_even(k1, c1, i, 0)
                    (kb, cb) = _d_even(k2, c2, i, 1)
                    _acc_product(out, ka, ca, kb, -cb)
            if not o2:
                continue
            o2set = set(o2)
            for o in o1:
                conj = o + d if o < d else o - d
                if conj not in o2set:
                    continue
                ka, ca = _d_odd(k1, c1, o)
                kb, cb = _d_odd(k2, c2, conj)
                _acc_product(out, ka, pref * ca, kb, cb)
    return GradedElement(P, out)


def bidegree_component(f: GradedElement, k: int, l: int) -> GradedElement:
    return f.bidegree_component(k, l)
