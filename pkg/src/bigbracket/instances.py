"""Instance files: JSON serialization of phase spaces, algebroid data and
named tensors, a small polynomial grammar for coefficients, a deterministic
64-bit RNG, and seeded random instance generation with search profiles.

File conventions are 1-based: fibre indices run 1..d and base variables are
written x1..xn.  In memory everything is 0-based.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import GradedElement, PhaseSpace
from .errors import InstanceError, PreconditionError
from .courant import differential, is_lie_algebroid
from .supergeometry import AlgebroidSpec, mu_from_spec
from .structures import is_exact_PqN_background, is_OmegaN, is_PN, is_POmega
from .tensors import (
    bivector_element,
    form3_value,
    mat_identity,
    mat_scale,
    three_form_element,
    two_form_element,
)


# -- deterministic RNG --------------------------------------------------------


class SplitMix64:
    """The splitmix64 mixing generator; deterministic across platforms."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.next_u64() % len(seq)]


# -- polynomial grammar -------------------------------------------------------
#
# expr   := term (('+' | '-') term)*
# term   := factor ('*' factor)*
# factor := ('-')* atom ('^' nat)?
# atom   := rational | variable | '(' expr ')'
# rational := int ('/' int)? ; variable := x1..xn


def _tokenize(text: str, where: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise InstanceError(f"{where}: variable must be x1..xn, got {text[i:]!r}")
            tokens.append(("var", int(text[i + 1:j])))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise InstanceError(f"{where}: unexpected character {ch!r} in polynomial")
    return tokens


class _PolyParser:
    def __init__(self, P: PhaseSpace, tokens, where: str):
        self.P = P
        self.tokens = tokens
        self.pos = 0
        self.where = where

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        if self.pos >= len(self.tokens):
            raise InstanceError(f"{self.where}: unexpected end of polynomial")
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise InstanceError(f"{self.where}: expected {kind!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def expr(self) -> GradedElement:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> GradedElement:
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self) -> GradedElement:
        sign = 1
        while self.peek() == "-":
            self.take()
            sign = -sign
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.take("num")[1]
            out = self.P.one()
            for _ in range(exp):
                out = out * base
            base = out
        return base if sign == 1 else -base

    def atom(self) -> GradedElement:
        kind = self.peek()
        if kind == "num":
            num = self.take()[1]
            if self.peek() == "/":
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise InstanceError(f"{self.where}: zero denominator")
                return self.P.scalar(Fraction(num, den))
            return self.P.scalar(Fraction(num))
        if kind == "var":
            idx = self.take()[1]
            if not 1 <= idx <= self.P.base_dim:
                raise InstanceError(f"{self.where}: variable x{idx} out of range (base_dim {self.P.base_dim})")
            return self.P.x(idx - 1)
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        raise InstanceError(f"{self.where}: malformed polynomial")


def parse_poly(P: PhaseSpace, text: str, where: str = "polynomial") -> GradedElement:
    """Parse a base polynomial string into a bidegree-(0,0) element."""
    if not isinstance(text, str):
        raise InstanceError(f"{where}: polynomial must be a string, got {type(text).__name__}")
    parser = _PolyParser(P, _tokenize(text, where), where)
    out = parser.expr()
    if parser.pos != len(parser.tokens):
        raise InstanceError(f"{where}: trailing input after polynomial")
    return out


def serialize_poly(el: GradedElement) -> str:
    """Canonical string form; parse(serialize(p)) == p and serializing a
    parsed canonical string reproduces it exactly."""
    if el.is_zero():
        return "0"
    if not el.bidegree_component(0, 0) == el:
        raise InstanceError("only base polynomials are serializable as coefficient strings")
    monos = sorted(el.terms())
    parts = []
    for (xe, pe, odd), c in monos:
        vars_part = "*".join(
            f"x{i + 1}" + (f"^{e}" if e > 1 else "")
            for i, e in enumerate(xe)
            if e > 0
        )
        mag = abs(c)
        if not vars_part:
            body = str(mag)
        elif mag == 1:
            body = vars_part
        else:
            body = f"{mag}*{vars_part}"
        parts.append((c < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- instance files ------------------------------------------------------------


TENSOR_TYPES = ("endomorphism", "bivector", "two-form", "three-form", "scalar", "element")


class InstanceFile:
    """In-memory form of an instance file.

    ``anchor``    d x n matrix of base polynomials (GradedElement).
    ``structure`` dict (a, b, c) -> base polynomial, 0-based, a < b.
    ``tensors``   dict name -> (type, payload): matrices of base polynomials
                  for endomorphism/bivector/two-form, a dict
                  (a, b, c) -> polynomial for three-form (0-based, a < b < c),
                  or a GradedElement for a raw element.
    """

    def __init__(self, base_dim: int, rank: int, anchor=None, structure=None, tensors=None):
        self.base_dim = base_dim
        self.rank = rank
        self.phase_space = PhaseSpace(base_dim, rank)
        P = self.phase_space
        self.anchor = anchor or [[P.zero()] * base_dim for _ in range(rank)]
        self.structure = dict(structure or {})
        self.tensors = dict(tensors or {})

    # -- building blocks -------------------------------------------------------

    def spec(self) -> AlgebroidSpec:
        return AlgebroidSpec(self.phase_space, anchor=self.anchor, structure=self.structure)

    def mu(self) -> GradedElement:
        return mu_from_spec(self.phase_space, self.spec())

    def tensor_element(self, name: str) -> GradedElement:
        """The named tensor as a graded element (quadratic avatar for
        endomorphisms, form/bivector element otherwise)."""
        from .tensors import lie_quadratic

        kind, payload = self._tensor(name)
        P = self.phase_space
        if kind == "endomorphism":
            return lie_quadratic(P, payload)
        if kind == "bivector":
            return bivector_element(P, payload)
        if kind == "two-form":
            return two_form_element(P, payload)
        if kind == "three-form":
            return three_form_element(P, lambda a, b, c: payload.get((a, b, c), P.zero()))
        if kind == "scalar":
            return P.scalar(payload)
        return payload

    def tensor_scalar(self, name: str) -> Fraction:
        kind, payload = self._tensor(name)
        if kind != "scalar":
            raise InstanceError(f"tensors.{name}: expected a scalar, found {kind}")
        return payload

    def tensor_matrix(self, name: str):
        kind, payload = self._tensor(name)
        if kind not in ("endomorphism", "bivector", "two-form"):
            raise InstanceError(f"tensors.{name}: expected a matrix tensor, found {kind}")
        return payload

    def _tensor(self, name: str):
        if name not in self.tensors:
            raise InstanceError(f"tensors.{name}: not present in instance")
        return self.tensors[name]

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"base_dim": self.base_dim, "rank": self.rank}
        if self.base_dim > 0:
            out["anchor"] = [[serialize_poly(v) for v in row] for row in self.anchor]
        out["structure"] = [
            {"a": a + 1, "b": b + 1, "c": c + 1, "value": serialize_poly(v)}
            for (a, b, c), v in sorted(self.structure.items())
            if not v.is_zero()
        ]
        tensors = {}
        for name in sorted(self.tensors):
            kind, payload = self.tensors[name]
            if kind in ("endomorphism", "bivector", "two-form"):
                tensors[name] = {
                    "type": kind,
                    "matrix": [[serialize_poly(v) for v in row] for row in payload],
                }
            elif kind == "three-form":
                tensors[name] = {
                    "type": kind,
                    "entries": [
                        {"a": a + 1, "b": b + 1, "c": c + 1, "value": serialize_poly(v)}
                        for (a, b, c), v in sorted(payload.items())
                        if not v.is_zero()
                    ],
                }
            elif kind == "scalar":
                tensors[name] = {"type": kind, "value": str(payload)}
            else:
                tensors[name] = {"type": "element", "terms": _element_terms(payload)}
        if tensors:
            out["tensors"] = tensors
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def dump(self, path: str):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceFile":
        if not isinstance(data, dict):
            raise InstanceError("instance file must be a JSON object")
        base_dim = _expect_int(data, "base_dim", minimum=0)
        rank = _expect_int(data, "rank", minimum=1)
        P = PhaseSpace(base_dim, rank)

        anchor = [[P.zero()] * base_dim for _ in range(rank)]
        if "anchor" in data:
            rows = data["anchor"]
            if not isinstance(rows, list) or len(rows) != rank:
                raise InstanceError(f"anchor: expected {rank} rows")
            for a, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != base_dim:
                    raise InstanceError(f"anchor[{a}]: expected {base_dim} entries")
                for i, cell in enumerate(row):
                    anchor[a][i] = parse_poly(P, cell, f"anchor[{a}][{i}]")

        structure = {}
        for k, entry in enumerate(data.get("structure", [])):
            where = f"structure[{k}]"
            a = _expect_int(entry, "a", where=where, minimum=1, maximum=rank) - 1
            b = _expect_int(entry, "b", where=where, minimum=1, maximum=rank) - 1
            c = _expect_int(entry, "c", where=where, minimum=1, maximum=rank) - 1
            if a == b:
                raise InstanceError(f"{where}: bracket indices must differ (antisymmetry)")
            if a > b:
                raise InstanceError(f"{where}: store constants with a < b only")
            v = parse_poly(P, entry.get("value", "0"), f"{where}.value")
            if (a, b, c) in structure:
                raise InstanceError(f"{where}: duplicate entry for ({a + 1},{b + 1},{c + 1})")
            if not v.is_zero():
                structure[(a, b, c)] = v

        tensors = {}
        for name, spec in (data.get("tensors") or {}).items():
            where = f"tensors.{name}"
            if not isinstance(spec, dict) or "type" not in spec:
                raise InstanceError(f"{where}: expected an object with a 'type' field")
            kind = spec["type"]
            if kind not in TENSOR_TYPES:
                raise InstanceError(f"{where}.type: unknown tensor type {kind!r}")
            if kind in ("endomorphism", "bivector", "two-form"):
                rows = spec.get("matrix")
                if not isinstance(rows, list) or len(rows) != rank:
                    raise InstanceError(f"{where}.matrix: expected {rank} rows")
                M = []
                for r, row in enumerate(rows):
                    if not isinstance(row, list) or len(row) != rank:
                        raise InstanceError(f"{where}.matrix[{r}]: expected {rank} entries")
                    M.append([parse_poly(P, cell, f"{where}.matrix[{r}][{j}]")
                              for j, cell in enumerate(row)])
                if kind in ("bivector", "two-form"):
                    for r in range(rank):
                        for j in range(r, rank):
                            if not (M[r][j] + M[j][r]).is_zero():
                                raise InstanceError(
                                    f"{where}.matrix[{r}][{j}]: antisymmetry violated"
                                )
                tensors[name] = (kind, M)
            elif kind == "three-form":
                entries = {}
                for k, entry in enumerate(spec.get("entries", [])):
                    ew = f"{where}.entries[{k}]"
                    a = _expect_int(entry, "a", where=ew, minimum=1, maximum=rank) - 1
                    b = _expect_int(entry, "b", where=ew, minimum=1, maximum=rank) - 1
                    c = _expect_int(entry, "c", where=ew, minimum=1, maximum=rank) - 1
                    if not a < b < c:
                        raise InstanceError(f"{ew}: indices must satisfy a < b < c")
                    if (a, b, c) in entries:
                        raise InstanceError(f"{ew}: duplicate entry")
                    v = parse_poly(P, entry.get("value", "0"), f"{ew}.value")
                    if not v.is_zero():
                        entries[(a, b, c)] = v
                tensors[name] = (kind, entries)
            elif kind == "scalar":
                raw = spec.get("value", "0")
                try:
                    tensors[name] = (kind, Fraction(str(raw)))
                except (ValueError, ZeroDivisionError):
                    raise InstanceError(f"{where}.value: expected a rational constant")
            else:
                tensors[name] = ("element", _element_from_terms(P, spec.get("terms", []), where))

        return cls(base_dim, rank, anchor=anchor, structure=structure, tensors=tensors)

    @classmethod
    def loads(cls, text: str) -> "InstanceFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "InstanceFile":
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise InstanceError(str(exc))
        return cls.loads(text)


def _expect_int(obj, field, where=None, minimum=None, maximum=None):
    label = f"{where}.{field}" if where else field
    if not isinstance(obj, dict) or field not in obj:
        raise InstanceError(f"{label}: missing")
    v = obj[field]
    if not isinstance(v, int) or isinstance(v, bool):
        raise InstanceError(f"{label}: expected an integer")
    if minimum is not None and v < minimum:
        raise InstanceError(f"{label}: must be >= {minimum}")
    if maximum is not None and v > maximum:
        raise InstanceError(f"{label}: must be <= {maximum}")
    return v


def _element_terms(el: GradedElement):
    d = el.phase_space.rank
    out = []
    for (xe, pe, odd), c in sorted(el.terms()):
        out.append(
            {
                "coeff": str(c),
                "x": list(xe),
                "p": list(pe),
                "xi": [o + 1 for o in odd if o < d],
                "theta": [o - d + 1 for o in odd if o >= d],
            }
        )
    return out


def _element_from_terms(P: PhaseSpace, terms, where: str) -> GradedElement:
    out = P.zero()
    for k, t in enumerate(terms):
        ew = f"{where}.terms[{k}]"
        if not isinstance(t, dict):
            raise InstanceError(f"{ew}: expected an object")
        try:
            coeff = Fraction(t.get("coeff", "1"))
        except (ValueError, ZeroDivisionError):
            raise InstanceError(f"{ew}.coeff: not a rational literal")
        xe = t.get("x", [])
        pe = t.get("p", [])
        for label, exps in (("x", xe), ("p", pe)):
            if not isinstance(exps, list) or len(exps) != P.base_dim:
                raise InstanceError(f"{ew}.{label}: expected {P.base_dim} exponents")
            if any(not isinstance(e, int) or e < 0 for e in exps):
                raise InstanceError(f"{ew}.{label}: exponents must be nonnegative integers")
        xi_ids, theta_ids = [], []
        for label, sink in (("xi", xi_ids), ("theta", theta_ids)):
            for idx in t.get(label, []):
                if not isinstance(idx, int) or not 1 <= idx <= P.rank:
                    raise InstanceError(f"{ew}.{label}: index out of range 1..{P.rank}")
                sink.append(idx - 1)
        out = out + P.monomial(coeff, tuple(xe), tuple(pe), tuple(xi_ids), tuple(theta_ids))
    return out


# -- random instances -----------------------------------------------------------


ENTRY_RANGE = (-2, -1, 0, 1, 2)

PROFILES = (
    "lie-algebra-solvable",
    "tensors-on-fixed-mu",
    "pomega-search",
    "omegan-search",
    "pqn-search",
)

SEARCH_CAP = 400


def _solvable_catalog(rank: int):
    """Structure-constant templates realizable as upper-triangular matrix
    subalgebras; every entry satisfies the Jacobi identity structurally."""
    if rank == 1:
        return [{}]
    if rank == 2:
        return [{}, {(0, 1, 1): 1}]
    if rank == 3:
        return [
            {},
            {(0, 1, 2): 1},                          # Heisenberg
            {(0, 1, 1): 1},                          # aff(1) + abelian line
            {(0, 1, 1): 1, (0, 2, 2): 1},            # diagonal solvable
            {(0, 1, 1): 1, (0, 2, 2): 2},
            {(0, 1, 1): 1, (0, 2, 1): 1, (0, 2, 2): 1},  # shear action
        ]
    if rank == 4:
        return [
            {},
            {(0, 1, 2): 1},
            {(0, 1, 2): 1, (0, 2, 3): 1},            # filiform nilpotent
            {(0, 1, 1): 1, (2, 3, 3): 1},            # aff(1) + aff(1)
            {(0, 1, 1): 1, (0, 2, 2): 1, (0, 3, 3): 2},
        ]
    raise PreconditionError(f"no solvable catalog for rank {rank}")


def _random_unimodular(rng: SplitMix64, d: int):
    """Integer matrix of determinant 1, built from a few shear operations."""
    T = [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]
    for _ in range(rng.randint(1, 3)):
        i = rng.randint(0, d - 1)
        j = rng.randint(0, d - 1)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(d):
            T[k][i] += c * T[k][j]
    return T


def _invert(T):
    d = len(T)
    A = [[Fraction(T[i][j]) for j in range(d)] + [Fraction(1 if i == j else 0) for j in range(d)]
         for i in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(d):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [v - f * w for v, w in zip(A[r], A[col])]
    return [row[d:] for row in A]


def _change_basis(structure: dict, T, d: int) -> dict:
    """Structure constants in the basis f_a = sum_p T[p][a] e_p."""
    Tinv = _invert(T)

    def c_of(p, q, r):
        if p == q:
            return Fraction(0)
        if p < q:
            return Fraction(structure.get((p, q, r), 0))
        return -Fraction(structure.get((q, p, r), 0))

    out = {}
    for a in range(d):
        for b in range(a + 1, d):
            for s in range(d):
                total = Fraction(0)
                for p in range(d):
                    for q in range(d):
                        if T[p][a] == 0 or T[q][b] == 0:
                            continue
                        for r in range(d):
                            cv = c_of(p, q, r)
                            if cv:
                                total += T[p][a] * T[q][b] * cv * Tinv[s][r]
                if total:
                    out[(a, b, s)] = total
    return out


def _structure_to_polys(P: PhaseSpace, structure: dict) -> dict:
    return {k: P.scalar(Fraction(v)) for k, v in structure.items() if Fraction(v) != 0}


def _random_lie_instance(rng: SplitMix64, rank: int) -> InstanceFile:
    template = rng.choice(_solvable_catalog(rank))
    structure = _change_basis(template, _random_unimodular(rng, rank), rank)
    inst = InstanceFile(0, rank, structure=_structure_to_polys(PhaseSpace(0, rank), structure))
    if not is_lie_algebroid(inst.mu()).verdict:
        raise PreconditionError("catalog produced a non-Lie structure (internal defect)")
    return inst


def _random_matrix(rng: SplitMix64, P: PhaseSpace, antisymmetric=False):
    d = P.rank
    M = [[P.zero()] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            if antisymmetric and j <= i:
                continue
            v = P.scalar(Fraction(rng.choice(ENTRY_RANGE)))
            M[i][j] = v
            if antisymmetric:
                M[j][i] = -v
    return M


def _random_three_form(rng: SplitMix64, P: PhaseSpace) -> dict:
    d = P.rank
    out = {}
    for a in range(d):
        for b in range(a + 1, d):
            for c in range(b + 1, d):
                v = rng.choice(ENTRY_RANGE)
                if v:
                    out[(a, b, c)] = P.scalar(Fraction(v))
    return out


def _tangent_like_instance(rng: SplitMix64, rank: int) -> InstanceFile:
    """base_dim = 1, abelian fibre bracket, anchor columns proportional to one
    polynomial so the structure equation holds identically."""
    P = PhaseSpace(1, rank)
    f = rng.choice([P.one(), P.x(0), P.x(0) * P.x(0)])
    anchor = [[P.scalar(Fraction(rng.choice(ENTRY_RANGE))) * f] for _ in range(rank)]
    return InstanceFile(1, rank, anchor=anchor)


FIXED_INSTANCES = ("abelian-2", "aff1-2", "heisenberg-3", "aff1-line-3", "tangent-1")


def fixed_instance(name: str) -> InstanceFile:
    """Named calibration instances used throughout the test suite: the
    abelian and nonabelian rank-2 Lie algebras, the rank-3 Heisenberg and
    aff(1)-plus-line algebras, and the rank-1 tangent algebroid over a line."""
    if name == "abelian-2":
        return InstanceFile(0, 2)
    if name == "aff1-2":
        P = PhaseSpace(0, 2)
        return InstanceFile(0, 2, structure={(0, 1, 1): P.one()})
    if name == "heisenberg-3":
        P = PhaseSpace(0, 3)
        return InstanceFile(0, 3, structure={(0, 1, 2): P.one()})
    if name == "aff1-line-3":
        P = PhaseSpace(0, 3)
        return InstanceFile(0, 3, structure={(0, 1, 1): P.one()})
    if name == "tangent-1":
        P = PhaseSpace(1, 1)
        return InstanceFile(1, 1, anchor=[[P.one()]])
    raise InstanceError(f"unknown fixed instance {name!r}; expected one of {FIXED_INSTANCES}")


def _three_form_components(phi: GradedElement) -> dict:
    P = phi.phase_space
    out = {}
    for a in range(P.rank):
        for b in range(a + 1, P.rank):
            for c in range(b + 1, P.rank):
                v = form3_value(phi, a, b, c)
                if not v.is_zero():
                    out[(a, b, c)] = v
    return out


def random_instance(seed: int, profile: str, rank: int | None = None) -> InstanceFile:
    """Deterministic instance generation; search profiles rejection-sample
    until their predicate holds and raise InstanceError when the attempt cap
    is exhausted (never a silent fallback)."""
    if profile not in PROFILES:
        raise PreconditionError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    rng = SplitMix64(seed)

    if profile == "lie-algebra-solvable":
        return _random_lie_instance(rng, rank or rng.randint(2, 4))

    if profile == "tensors-on-fixed-mu":
        r = rank or rng.randint(2, 4)
        if rng.randint(0, 3) == 0:
            inst = _tangent_like_instance(rng, r)
        else:
            inst = _random_lie_instance(rng, r)
        P = inst.phase_space
        inst.tensors["N"] = ("endomorphism", _random_matrix(rng, P))
        inst.tensors["pi"] = ("bivector", _random_matrix(rng, P, antisymmetric=True))
        inst.tensors["omega"] = ("two-form", _random_matrix(rng, P, antisymmetric=True))
        if P.rank >= 3:
            inst.tensors["H"] = ("three-form", _random_three_form(rng, P))
        return inst

    if profile == "pomega-search":
        r = rank or 2
        for _ in range(SEARCH_CAP):
            inst = _random_lie_instance(rng, r)
            P = inst.phase_space
            pi_m = _random_matrix(rng, P, antisymmetric=True)
            om_m = _random_matrix(rng, P, antisymmetric=True)
            pi = bivector_element(P, pi_m)
            om = two_form_element(P, om_m)
            if pi.is_zero() or om.is_zero():
                continue
            try:
                ok = is_POmega(inst.mu(), pi, om).verdict
            except PreconditionError:
                continue
            if ok:
                inst.tensors["pi"] = ("bivector", pi_m)
                inst.tensors["omega"] = ("two-form", om_m)
                return inst
        raise InstanceError(f"no instance found: pomega-search rank {r}, seed {seed}")

    if profile == "omegan-search":
        r = rank or 3
        for _ in range(SEARCH_CAP):
            inst = _random_lie_instance(rng, r)
            P = inst.phase_space
            om_m = _random_matrix(rng, P, antisymmetric=True)
            # bias toward sparse upper-triangular N so torsion has a chance
            N_m = mat_scale(mat_identity(P, r), Fraction(rng.choice(ENTRY_RANGE)))
            for _ in range(rng.randint(0, 2)):
                i = rng.randint(0, r - 2)
                j = rng.randint(i + 1, r - 1)
                N_m[i][j] = P.scalar(Fraction(rng.choice(ENTRY_RANGE)))
            om = two_form_element(P, om_m)
            if om.is_zero():
                continue
            if is_OmegaN(inst.mu(), om, N_m).verdict:
                inst.tensors["N"] = ("endomorphism", N_m)
                inst.tensors["omega"] = ("two-form", om_m)
                return inst
        raise InstanceError(f"no instance found: omegan-search rank {r}, seed {seed}")

    if profile == "pqn-search":
        r = rank or 3
        for _ in range(SEARCH_CAP):
            inst = _random_lie_instance(rng, r)
            P = inst.phase_space
            mu = inst.mu()
            om_m = _random_matrix(rng, P, antisymmetric=True)
            om = two_form_element(P, om_m)
            c = Fraction(rng.choice([-2, -1, 1, 2]))
            N_m = mat_scale(mat_identity(P, r), c)
            pi_m = [[P.zero()] * r for _ in range(r)]
            if rng.randint(0, 2) == 0:
                pi_m = _random_matrix(rng, P, antisymmetric=True)
            pi = bivector_element(P, pi_m)
            d_om = differential(mu, om)
            if d_om.is_zero():
                continue
            H = d_om.scale(Fraction(1, 2 * c))
            try:
                rep = is_exact_PqN_background(mu, pi, N_m, om, H, c * c)
            except PreconditionError:
                continue
            if rep.verdict:
                inst.tensors["pi"] = ("bivector", pi_m)
                inst.tensors["N"] = ("endomorphism", N_m)
                inst.tensors["omega"] = ("two-form", om_m)
                inst.tensors["H"] = ("three-form", _three_form_components(H))
                inst.tensors["lambda"] = ("scalar", c * c)
                return inst
        raise InstanceError(f"no instance found: pqn-search rank {r}, seed {seed}")


def random_element(rng: SplitMix64, P: PhaseSpace, max_degree: int = 4,
                   terms: int = 4) -> GradedElement:
    """A random element with a handful of monomials of total degree at most
    max_degree; used by the self test and the law checks."""
    out = P.zero()
    d = P.rank
    for _ in range(terms):
        for _attempt in range(20):
            xe = tuple(rng.randint(0, 2) for _ in range(P.base_dim))
            pe = tuple(rng.randint(0, 1) for _ in range(P.base_dim))
            odd = tuple(sorted(o for o in range(2 * d) if rng.randint(0, 3) == 0))
            deg = sum(pe) * 2 + len(odd)  # p has total degree 2, odd ids 1
            if deg <= max_degree:
                break
        coeff = Fraction(rng.choice([-2, -1, 1, 2]))
        out = out + P.monomial(coeff, xe, pe,
                               tuple(o for o in odd if o < d),
                               tuple(o - d for o in odd if o >= d))
    return out


def random_homogeneous(rng: SplitMix64, P: PhaseSpace, k: int, l: int,
                       terms: int = 3) -> GradedElement:
    """A random element of bidegree (k, l)."""
    d = P.rank
    out = P.zero()
    for _ in range(terms):
        for _attempt in range(200):
            pe_total = rng.randint(0, min(k, l))
            n_theta = k - pe_total
            n_xi = l - pe_total
            if n_theta > d or n_xi > d or (P.base_dim == 0 and pe_total > 0):
                continue
            if P.base_dim:
                pe = [0] * P.base_dim
                for _ in range(pe_total):
                    pe[rng.randint(0, P.base_dim - 1)] += 1
                pe = tuple(pe)
                xe = tuple(rng.randint(0, 2) for _ in range(P.base_dim))
            else:
                pe, xe = (), ()
            xi_ids = _pick_distinct(rng, d, n_xi)
            th_ids = _pick_distinct(rng, d, n_theta)
            if xi_ids is not None and th_ids is not None:
                coeff = Fraction(rng.choice([-2, -1, 1, 2]))
                out = out + P.monomial(coeff, xe, pe, xi_ids, th_ids)
                break
    return out


def _pick_distinct(rng: SplitMix64, d: int, count: int):
    if count > d:
        return None
    ids = list(range(d))
    for i in range(count):
        j = rng.randint(i, d - 1)
        ids[i], ids[j] = ids[j], ids[i]
    return tuple(sorted(ids[:count]))
