"""Iterated deformations of a Lie algebroid structure and grid verification
of the hierarchy statements: deformed structures stay Lie, deformed pairs
stay structures of the same kind, and hierarchy members are pairwise
compatible.

Grids run with k outermost, then n, then m, so a failure is always reported
at the smallest offending index triple.  The default bound is 3 for every
index and can be overridden with the BIGBRACKET_HIERARCHY_BOUND environment
variable.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .algebra import GradedElement, PhaseSpace, big_bracket
from .courant import is_lie_algebroid
from .errors import EngineError, PreconditionError
from .report import StructureReport
from .structures import (
    compatible_OmegaN,
    compatible_PN,
    compatible_POmega,
    composite_tensor,
    is_complementary_form,
    is_nijenhuis_lie,
    is_OmegaN,
    is_PN,
    is_POmega,
)
from .tensors import (
    bivector_element,
    coerce_matrix,
    lie_quadratic,
    mat_eq,
    mat_mul,
    mat_pow,
    mat_transpose,
    sharp_matrix,
    two_form_components,
    two_form_element,
)

DEFAULT_BOUND = 3
BOUND_ENV_VAR = "BIGBRACKET_HIERARCHY_BOUND"


def default_bound() -> int:
    raw = os.environ.get(BOUND_ENV_VAR)
    if raw is None:
        return DEFAULT_BOUND
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"{BOUND_ENV_VAR} must be an integer, got {raw!r}")
    if value < 0:
        raise PreconditionError(f"{BOUND_ENV_VAR} must be nonnegative")
    return value


class HierarchyRequest:
    """A verification job: base structure, tensors, family tag and bounds."""

    def __init__(self, mu: GradedElement, family: str, *, pi=None, omega=None,
                 N=None, extra=None, n_max=None, m_max=None, k_max=None):
        self.mu = mu
        self.family = family
        self.pi = pi
        self.omega = omega
        self.N = N
        self.extra = extra or {}
        bound = default_bound()
        self.n_max = bound if n_max is None else n_max
        self.m_max = bound if m_max is None else m_max
        self.k_max = bound if k_max is None else k_max
        for b in (self.n_max, self.m_max, self.k_max):
            if b < 0:
                raise PreconditionError("hierarchy bounds must be nonnegative")


def deform_iterated(mu: GradedElement, N, k: int) -> GradedElement:
    """k-fold deformation {N, {N, ... {N, mu}}}; k = 0 gives mu back."""
    P = mu.phase_space
    q = lie_quadratic(P, coerce_matrix(P, N))
    out = mu
    for _ in range(k):
        out = big_bracket(q, out)
    return out


def omega_hierarchy(omega: GradedElement, N, n: int) -> GradedElement:
    """The 2-form deformed n times by N, via the half-bracket recursion;
    checked against the matrix composite on every call."""
    P = omega.phase_space
    N = coerce_matrix(P, N)
    Om = two_form_components(omega)
    if not mat_eq(mat_mul(Om, N), mat_mul(mat_transpose(N), Om)):
        raise PreconditionError("omega and N do not commute (flat vs transpose)")
    q = lie_quadratic(P, N)
    out = omega
    for _ in range(n):
        out = big_bracket(q, out).scale(Fraction(1, 2))
    expected = two_form_element(P, mat_mul(mat_transpose(mat_pow(P, N, n)), Om))
    if out != expected:
        raise EngineError("bracket and matrix routes for the deformed form disagree")
    return out


def pi_hierarchy(pi: GradedElement, N, n: int) -> GradedElement:
    """The bivector whose sharp map is the n-th power of N composed with the
    sharp map of pi."""
    P = pi.phase_space
    N = coerce_matrix(P, N)
    S = sharp_matrix(pi)
    if not mat_eq(mat_mul(N, S), mat_mul(S, mat_transpose(N))):
        raise PreconditionError("pi and N do not commute (sharp vs transpose)")
    S_n = mat_mul(mat_pow(P, N, n), S)
    return bivector_element(P, mat_transpose(S_n))


def _mus(mu, N, k_max):
    """mu deformed 0..k_max times, each checked to still be a Lie algebroid."""
    out = [mu]
    for _ in range(k_max):
        out.append(deform_iterated(out[-1], N, 1))
    return out


def _require_seed(ok: bool, what: str):
    if not ok:
        raise PreconditionError(f"hierarchy seed is not a {what}")


def _add_lemma_conditions(rep, mu, N, n_max, k_max):
    """Power-compatibility facts for a Nijenhuis N: the k-fold deformation
    equals the one-shot deformation by the k-th power, and every power of N
    stays torsion-free for every deformed structure."""
    P = mu.phase_space
    ok, witness = True, None
    for k in range(1, k_max + 1):
        if deform_iterated(mu, N, k) != big_bracket(lie_quadratic(P, mat_pow(P, N, k)), mu):
            ok, witness = False, f"k={k}"
            break
    rep.add("power_deformation_coincides", ok, witness=witness)
    ok, witness = True, None
    for k in range(k_max + 1):
        mu_k = deform_iterated(mu, N, k)
        for n in range(n_max + 1):
            if not is_nijenhuis_lie(mu_k, mat_pow(P, N, n)).verdict:
                ok, witness = False, f"(n={n}, k={k})"
                break
        if not ok:
            break
    rep.add("powers_stay_torsion_free", ok, witness=witness)


def verify_hierarchy(request: HierarchyRequest) -> StructureReport:
    """Grid-check a hierarchy family.

    Families:
      pomega:        (N^n pi, omega_{N^m}) stays POmega on the k-deformed mu,
                     with N the composite tensor of the seed pair.
      omegan:        (omega_{N^n}, N^m) stays OmegaN on the k-deformed mu.
      complementary: omega_{N^n} stays a closed complementary form of
                     N^m pi on the k-deformed mu.
      prop94:        the OmegaN grids for two 2-forms and the three composite
                     tensors arising from a cross-anticommuting POmega square.
    """
    mu, fam = request.mu, request.family
    P = mu.phase_space
    rep = StructureReport(f"hierarchy-{fam}")

    if fam == "pomega":
        pi, omega = request.pi, request.omega
        _require_seed(is_POmega(mu, pi, omega).verdict, "POmega pair")
        N = composite_tensor(pi, omega)
        mus = _mus(mu, N, request.k_max)
        _add_lemma_conditions(rep, mu, N, request.n_max, request.k_max)
        for k, mu_k in enumerate(mus):
            if not rep.add(f"lie_algebroid[k={k}]", is_lie_algebroid(mu_k).verdict):
                return rep
            ok, witness = True, None
            for n in range(request.n_max + 1):
                for m in range(request.m_max + 1):
                    r = is_POmega(mu_k, pi_hierarchy(pi, N, n), omega_hierarchy(omega, N, m), deep=False)
                    if not r.verdict:
                        ok, witness = False, f"(n={n}, m={m}): " + ", ".join(c.name for c in r.failing())
                        break
                if not ok:
                    break
            rep.add(f"grid[k={k}]", ok, witness=witness)
        return rep

    if fam == "omegan":
        omega, N = request.omega, coerce_matrix(P, request.N)
        _require_seed(is_OmegaN(mu, omega, N).verdict, "OmegaN pair")
        mus = _mus(mu, N, request.k_max)
        _add_lemma_conditions(rep, mu, N, request.n_max, request.k_max)
        for k, mu_k in enumerate(mus):
            if not rep.add(f"lie_algebroid[k={k}]", is_lie_algebroid(mu_k).verdict):
                return rep
            ok, witness = True, None
            for n in range(request.n_max + 1):
                for m in range(request.m_max + 1):
                    r = is_OmegaN(mu_k, omega_hierarchy(omega, N, n), mat_pow(P, N, m), deep=False)
                    if not r.verdict:
                        ok, witness = False, f"(n={n}, m={m}): " + ", ".join(c.name for c in r.failing())
                        break
                if not ok:
                    break
            rep.add(f"grid[k={k}]", ok, witness=witness)
        return rep

    if fam == "complementary":
        pi, omega = request.pi, request.omega
        _require_seed(
            is_complementary_form(mu, pi, omega).verdict
            and big_bracket(mu, omega).is_zero(),
            "closed complementary form",
        )
        N = composite_tensor(pi, omega)
        mus = _mus(mu, N, request.k_max)
        _add_lemma_conditions(rep, mu, N, request.n_max, request.k_max)
        for k, mu_k in enumerate(mus):
            if not rep.add(f"lie_algebroid[k={k}]", is_lie_algebroid(mu_k).verdict):
                return rep
            ok, witness = True, None
            for n in range(request.n_max + 1):
                om_n = omega_hierarchy(omega, N, n)
                for m in range(request.m_max + 1):
                    pi_m = pi_hierarchy(pi, N, m)
                    closed = big_bracket(mu_k, om_n).is_zero()
                    compl = is_complementary_form(mu_k, pi_m, om_n).verdict
                    if not (closed and compl):
                        ok, witness = False, f"(n={n}, m={m})"
                        break
                if not ok:
                    break
            rep.add(f"grid[k={k}]", ok, witness=witness)
        return rep

    if fam == "prop94":
        pi, omega = request.pi, request.omega
        pi2, omega2 = request.extra["pi2"], request.extra["omega2"]
        for tag, (p, o) in {
            "(pi,omega)": (pi, omega),
            "(pi,omega2)": (pi, omega2),
            "(pi2,omega)": (pi2, omega),
            "(pi2,omega2)": (pi2, omega2),
        }.items():
            _require_seed(is_POmega(mu, p, o).verdict, f"POmega pair {tag}")
        N = composite_tensor(pi, omega)
        N_hat = composite_tensor(pi, omega2)
        minus_hat = composite_tensor(pi2, omega)
        if not mat_eq(N_hat, [[-v for v in row] for row in minus_hat]):
            raise PreconditionError("cross composites do not anticommute")
        N2 = composite_tensor(pi2, omega2)
        for tag, I in (("N", N), ("N2", N2), ("Nhat", N_hat)):
            mus = _mus(mu, I, request.k_max)
            for k, mu_k in enumerate(mus):
                if not rep.add(f"lie_algebroid[{tag},k={k}]", is_lie_algebroid(mu_k).verdict):
                    return rep
                ok, witness = True, None
                for n in range(request.n_max + 1):
                    for m in range(request.m_max + 1):
                        for label, om in (("omega", omega), ("omega2", omega2)):
                            r = is_OmegaN(mu_k, omega_hierarchy(om, I, n), mat_pow(P, I, m), deep=False)
                            if not r.verdict:
                                ok, witness = False, f"({label}, n={n}, m={m})"
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                rep.add(f"grid[{tag},k={k}]", ok, witness=witness)
        return rep

    raise PreconditionError(f"unknown hierarchy family: {fam}")


def verify_hierarchy_compatibility(request: HierarchyRequest) -> StructureReport:
    """Grid-check pairwise compatibility inside one hierarchy family.

    Families: pn, omegan, pomega (compatibility of hierarchy members over
    each deformed structure) and complementary (the triple-bracket identity
    {omega_{N^n}, {omega_{N^m}, {N^k pi, mu}}} = 0).
    """
    mu, fam = request.mu, request.family
    P = mu.phase_space
    rep = StructureReport(f"hierarchy-compat-{fam}")

    if fam == "complementary":
        pi, omega = request.pi, request.omega
        _require_seed(
            is_complementary_form(mu, pi, omega).verdict
            and big_bracket(mu, omega).is_zero(),
            "closed complementary form",
        )
        N = composite_tensor(pi, omega)
        ok, witness = True, None
        for k in range(request.k_max + 1):
            mu_pi_k = big_bracket(pi_hierarchy(pi, N, k), mu)
            for n in range(request.n_max + 1):
                om_n = omega_hierarchy(omega, N, n)
                for m in range(request.m_max + 1):
                    om_m = omega_hierarchy(omega, N, m)
                    if not big_bracket(om_n, big_bracket(om_m, mu_pi_k)).is_zero():
                        ok, witness = False, f"(n={n}, m={m}, k={k})"
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("triple_bracket_vanishes", ok, witness=witness)
        return rep

    if fam == "pn":
        pi, N = request.pi, coerce_matrix(P, request.N)
        _require_seed(is_PN(mu, pi, N).verdict, "PN pair")
        members = [
            (k, n, pi_hierarchy(pi, N, k), mat_pow(P, N, n))
            for k in range(request.n_max + 1)
            for n in range(request.m_max + 1)
        ]
        member_ok = lambda mu_r, a: is_PN(mu_r, a[2], a[3], deep=False).verdict
        check = lambda mu_r, a, b: compatible_PN(mu_r, (a[2], a[3]), (b[2], b[3]),
                                                 deep=False, check_inputs=False)
    elif fam == "omegan":
        omega, N = request.omega, coerce_matrix(P, request.N)
        _require_seed(is_OmegaN(mu, omega, N).verdict, "OmegaN pair")
        members = [
            (k, n, omega_hierarchy(omega, N, k), mat_pow(P, N, n))
            for k in range(request.n_max + 1)
            for n in range(request.m_max + 1)
        ]
        member_ok = lambda mu_r, a: is_OmegaN(mu_r, a[2], a[3], deep=False).verdict
        check = lambda mu_r, a, b: compatible_OmegaN(mu_r, (a[2], a[3]), (b[2], b[3]),
                                                     deep=False, check_inputs=False)
    elif fam == "pomega":
        pi, omega = request.pi, request.omega
        _require_seed(is_POmega(mu, pi, omega).verdict, "POmega pair")
        N = composite_tensor(pi, omega)
        members = [
            (k, n, pi_hierarchy(pi, N, k), omega_hierarchy(omega, N, n))
            for k in range(request.n_max + 1)
            for n in range(request.m_max + 1)
        ]
        member_ok = lambda mu_r, a: is_POmega(mu_r, a[2], a[3], deep=False).verdict
        check = lambda mu_r, a, b: compatible_POmega(mu_r, (a[2], a[3]), (b[2], b[3]),
                                                     deep=False, check_inputs=False)
    else:
        raise PreconditionError(f"unknown compatibility family: {fam}")

    mus = _mus(mu, N, request.k_max)
    for r, mu_r in enumerate(mus):
        if not rep.add(f"lie_algebroid[r={r}]", is_lie_algebroid(mu_r).verdict):
            return rep
        bad = next((a for a in members if not member_ok(mu_r, a)), None)
        if not rep.add(f"members_are_structures[r={r}]", bad is None,
                       witness=None if bad is None else f"member ({bad[0]},{bad[1]})"):
            continue
        ok, witness = True, None
        for i, a in enumerate(members):
            for b in members[i:]:
                res = check(mu_r, a, b)
                if not res.verdict:
                    ok = False
                    witness = f"members ({a[0]},{a[1]}) and ({b[0]},{b[1]}): " + ", ".join(
                        c.name for c in res.failing()
                    )
                    break
            if not ok:
                break
        rep.add(f"pairwise[r={r}]", ok, witness=witness)
    return rep
