"""Command-line surface: instance validation, bracket/torsion/concomitant
computations, structure checks, hierarchy verification, and the self test.

Exit codes: 0 when the verdict is true (or every self-test case passes),
1 when the verdict is false, 2 on any input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import PhaseSpace, big_bracket, multiply
from .courant import is_courant, is_lie_algebroid, with_background
from .errors import EngineError, InstanceError
from .hierarchy import (
    HierarchyRequest,
    default_bound,
    verify_hierarchy,
    verify_hierarchy_compatibility,
)
from .instances import InstanceFile, PROFILES, SplitMix64, random_homogeneous, random_instance
from .report import StructureReport, _element_terms
from .structures import (
    is_compatible_pair,
    is_complementary_form,
    is_exact_PqN,
    is_exact_PqN_background,
    is_Hitchin,
    is_OmegaN,
    is_PN,
    is_POmega,
    is_PqN_background,
)
from .supergeometry import identity_element
from .tensors import EndoTensor, concomitant_C, function_to_endo, torsion_function


def _load_instance(path: str) -> InstanceFile:
    return InstanceFile.load(path)


def _named_element(inst: InstanceFile, name: str):
    if name == "mu":
        return inst.mu()
    return inst.tensor_element(name)


def _named_endo(inst: InstanceFile, name: str) -> EndoTensor:
    P = inst.phase_space
    kind, payload = inst.tensors.get(name, (None, None))
    if kind is None:
        raise InstanceError(f"tensors.{name}: not present in instance")
    if kind == "endomorphism":
        return EndoTensor.from_lie_matrix(P, payload)
    if kind in ("bivector", "two-form", "three-form", "element"):
        return function_to_endo(inst.tensor_element(name))
    raise InstanceError(f"tensors.{name}: cannot build a tensor from kind {kind!r}")


def _emit(report: StructureReport, args, inst: InstanceFile | None = None, extra: dict | None = None):
    if getattr(args, "report", None) == "json":
        payload = report.to_dict()
        if inst is not None:
            payload["instance"] = inst.to_dict()
        if extra:
            payload.update(extra)
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(report.summary())
        if extra:
            for k, v in sorted(extra.items()):
                print(f"{k}: {v}")
    return 0 if report.verdict else 1


# -- commands --------------------------------------------------------------------


def cmd_validate(args) -> int:
    inst = _load_instance(args.instance)
    mu = inst.mu()
    rep = StructureReport("validate")
    rep.add_report("lie-algebroid", is_lie_algebroid(mu))
    if "H" in inst.tensors:
        rep.add_report("courant-with-background", is_courant(with_background(mu, inst.tensor_element("H"))))
    return _emit(rep, args, inst)


def cmd_bracket(args) -> int:
    inst = _load_instance(args.instance)
    left = _named_element(inst, args.left)
    right = _named_element(inst, args.right)
    out = big_bracket(left, right)
    rep = StructureReport("bracket")
    rep.add("computed", True, witness=str(out))
    return _emit(rep, args, inst, extra={"result": _element_terms(out), "result_str": str(out)})


def cmd_torsion(args) -> int:
    inst = _load_instance(args.instance)
    mu = inst.mu()
    I = _named_endo(inst, args.tensor)
    theta = mu
    if args.background:
        theta = with_background(mu, inst.tensor_element(args.background)).theta
    if args.lam is not None:
        lam = Fraction(args.lam)
    else:
        lam = I.square().proportional_to_identity()
        if lam is None:
            raise InstanceError(
                "the tensor square is not a scalar multiple of the identity; pass --lam"
            )
    tor = torsion_function(theta, I, lam).theta
    rep = StructureReport("torsion")
    rep.add("torsion_vanishes", tor.is_zero(), residual=tor)
    return _emit(rep, args, inst, extra={"torsion": _element_terms(tor), "lambda": str(lam)})


def cmd_concomitant(args) -> int:
    inst = _load_instance(args.instance)
    mu = inst.mu()
    I = _named_endo(inst, args.first)
    J = _named_endo(inst, args.second)
    C = concomitant_C(mu, I, J).theta
    rep = StructureReport("concomitant")
    rep.add("concomitant_vanishes", C.is_zero(), residual=C)
    return _emit(rep, args, inst, extra={"concomitant": _element_terms(C)})


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    mu = inst.mu()
    s = args.structure
    if s == "pn":
        rep = is_PN(mu, inst.tensor_element("pi"), inst.tensor_matrix("N"))
    elif s == "omegan":
        rep = is_OmegaN(mu, inst.tensor_element("omega"), inst.tensor_matrix("N"))
    elif s == "pomega":
        rep = is_POmega(mu, inst.tensor_element("pi"), inst.tensor_element("omega"))
    elif s == "hitchin":
        rep = is_Hitchin(mu, inst.tensor_element("omega"), inst.tensor_matrix("N"))
    elif s == "pqn-bg":
        rep = is_PqN_background(
            mu,
            inst.tensor_element("pi"),
            inst.tensor_matrix("N"),
            inst.tensor_element("phi"),
            inst.tensor_element("H"),
        )
    elif s == "exact-pqn":
        if "H" in inst.tensors or "lambda" in inst.tensors:
            rep = is_exact_PqN_background(
                mu,
                inst.tensor_element("pi"),
                inst.tensor_matrix("N"),
                inst.tensor_element("omega"),
                inst.tensor_element("H") if "H" in inst.tensors else mu.phase_space.zero(),
                inst.tensor_scalar("lambda"),
            )
        else:
            rep = is_exact_PqN(
                mu, inst.tensor_element("pi"), inst.tensor_matrix("N"), inst.tensor_element("omega")
            )
    elif s == "complementary":
        rep = is_complementary_form(mu, inst.tensor_element("pi"), inst.tensor_element("omega"))
    elif s == "compatible-pair":
        rep = is_compatible_pair(mu, _named_endo(inst, args.first), _named_endo(inst, args.second))
    else:  # pragma: no cover - argparse restricts choices
        raise InstanceError(f"unknown structure: {s}")
    return _emit(rep, args, inst)


def cmd_hierarchy(args) -> int:
    inst = _load_instance(args.instance)
    mu = inst.mu()
    bound = default_bound()
    n = bound if args.n is None else args.n
    m = bound if args.m is None else args.m
    k = bound if args.k is None else args.k
    fam = args.family
    if fam == "pomega":
        req = HierarchyRequest(mu, "pomega", pi=inst.tensor_element("pi"),
                               omega=inst.tensor_element("omega"), n_max=n, m_max=m, k_max=k)
        rep = verify_hierarchy(req)
    elif fam == "omegan":
        req = HierarchyRequest(mu, "omegan", omega=inst.tensor_element("omega"),
                               N=inst.tensor_matrix("N"), n_max=n, m_max=m, k_max=k)
        rep = verify_hierarchy(req)
    elif fam == "complementary":
        req = HierarchyRequest(mu, "complementary", pi=inst.tensor_element("pi"),
                               omega=inst.tensor_element("omega"), n_max=n, m_max=m, k_max=k)
        rep = verify_hierarchy(req)
    elif fam == "pn-compat":
        req = HierarchyRequest(mu, "pn", pi=inst.tensor_element("pi"),
                               N=inst.tensor_matrix("N"), n_max=n, m_max=m, k_max=k)
        rep = verify_hierarchy_compatibility(req)
    else:  # pragma: no cover
        raise InstanceError(f"unknown family: {fam}")
    return _emit(rep, args, inst, extra={"bounds": {"n": n, "m": m, "k": k}})


# -- self test -------------------------------------------------------------------


def _laws_case(rng: SplitMix64) -> bool:
    P = PhaseSpace(rng.randint(0, 1), rng.randint(2, 4))
    deg = lambda: (rng.randint(0, 2), rng.randint(0, 2))
    (ku, lu), (kv, lv), (kw, lw) = deg(), deg(), deg()
    u = random_homogeneous(rng, P, ku, lu, 2)
    v = random_homogeneous(rng, P, kv, lv, 2)
    w = random_homogeneous(rng, P, kw, lw, 2)
    du, dv = ku + lu, kv + lv
    nu, nv = du - 2, dv - 2
    ok = multiply(u, v) == multiply(v, u).scale((-1) ** (du * dv))
    ok = ok and big_bracket(u, v) == big_bracket(v, u).scale(-((-1) ** (nu * nv)))
    lhs = big_bracket(u, multiply(v, w))
    rhs = multiply(big_bracket(u, v), w) + multiply(v, big_bracket(u, w)).scale((-1) ** (nu * dv))
    ok = ok and lhs == rhs
    lhs = big_bracket(u, big_bracket(v, w))
    rhs = big_bracket(big_bracket(u, v), w) + big_bracket(v, big_bracket(u, w)).scale((-1) ** (nu * nv))
    ok = ok and lhs == rhs
    b = big_bracket(u, v)
    ok = ok and (b.is_zero() or b.bidegree_component(ku + kv - 1, lu + lv - 1) == b)
    return ok


def _identity_case(rng: SplitMix64) -> bool:
    P = PhaseSpace(rng.randint(0, 1), rng.randint(2, 4))
    k, l = rng.randint(0, 2), rng.randint(0, 2)
    u = random_homogeneous(rng, P, k, l, 3)
    return big_bracket(identity_element(P), u) == u.scale(l - k)


def _roundtrip_case(rng: SplitMix64) -> bool:
    profile = ("lie-algebra-solvable", "tensors-on-fixed-mu")[rng.randint(0, 1)]
    inst = random_instance(rng.randint(0, 2**31), profile)
    text = inst.dumps()
    again = InstanceFile.loads(text)
    return again.dumps() == text


def _lie_case(rng: SplitMix64) -> bool:
    inst = random_instance(rng.randint(0, 2**31), "lie-algebra-solvable")
    return is_lie_algebroid(inst.mu()).verdict


def _search_case(rng: SplitMix64) -> bool:
    profile = ("pomega-search", "omegan-search", "pqn-search")[rng.randint(0, 2)]
    inst = random_instance(rng.randint(0, 2**31), profile)
    mu = inst.mu()
    if profile == "pomega-search":
        return is_POmega(mu, inst.tensor_element("pi"), inst.tensor_element("omega")).verdict
    if profile == "omegan-search":
        return is_OmegaN(mu, inst.tensor_element("omega"), inst.tensor_matrix("N")).verdict
    return is_exact_PqN_background(
        mu,
        inst.tensor_element("pi"),
        inst.tensor_matrix("N"),
        inst.tensor_element("omega"),
        inst.tensor_element("H"),
        inst.tensor_scalar("lambda"),
    ).verdict


SELFTEST_SUITES = (
    ("bracket-laws", _laws_case, 1),
    ("identity-element", _identity_case, 1),
    ("instance-roundtrip", _roundtrip_case, 1),
    ("lie-structure", _lie_case, 1),
    ("search-profiles", _search_case, 20),
)


def cmd_selftest(args) -> int:
    seed, cases = args.seed, args.cases
    results = []
    for si, (name, fn, stride) in enumerate(SELFTEST_SUITES):
        count = max(1, cases // stride)
        # one RNG stream per case so sharding across workers cannot change
        # any case outcome; aggregation is by sorted case index
        outcomes = {}
        for ci in range(count):
            rng = SplitMix64((seed << 8) ^ (si * 0x100000001B3) ^ ci)
            outcomes[ci] = bool(fn(rng))
        passed = sum(1 for ci in sorted(outcomes) if outcomes[ci])
        results.append({"suite": name, "passed": passed, "cases": count})
    verdict = all(r["passed"] == r["cases"] for r in results)
    payload = {
        "kind": "selftest",
        "seed": seed,
        "cases": cases,
        "suites": results,
        "verdict": verdict,
    }
    if args.report == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"selftest: {'PASS' if verdict else 'FAIL'} (seed {seed})")
        for r in results:
            print(f"  {r['suite']}: {r['passed']}/{r['cases']}")
    return 0 if verdict else 1


def cmd_generate(args) -> int:
    inst = random_instance(args.seed, args.profile, args.rank)
    text = inst.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="bigbracket", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, with_instance=True):
        if with_instance:
            p.add_argument("instance", help="path to an instance JSON file")
        p.add_argument("--report", choices=["text", "json"], default="text")

    p = sub.add_parser("validate", help="check the algebroid (and background) structure equations")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("bracket", help="big bracket of two named elements")
    common(p)
    p.add_argument("--left", required=True, help="'mu' or a tensor name")
    p.add_argument("--right", required=True, help="'mu' or a tensor name")
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("torsion", help="torsion of a named tensor as a graded function")
    common(p)
    p.add_argument("--tensor", required=True)
    p.add_argument("--lam", default=None, help="rational scalar with I^2 = lam id")
    p.add_argument("--background", default=None, help="name of a 3-form tensor to add to mu")
    p.set_defaults(fn=cmd_torsion)

    p = sub.add_parser("concomitant", help="concomitant of two named tensors")
    common(p)
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.set_defaults(fn=cmd_concomitant)

    p = sub.add_parser("check", help="structure predicate on the instance tensors")
    common(p)
    p.add_argument(
        "--structure",
        required=True,
        choices=["pn", "omegan", "pomega", "hitchin", "pqn-bg", "exact-pqn", "complementary", "compatible-pair"],
    )
    p.add_argument("--first", default="pi", help="tensor name for compatible-pair")
    p.add_argument("--second", default="N", help="tensor name for compatible-pair")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("hierarchy", help="grid verification of a hierarchy family")
    common(p)
    p.add_argument("--family", required=True, choices=["pomega", "omegan", "complementary", "pn-compat"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(fn=cmd_hierarchy)

    p = sub.add_parser("selftest", help="deterministic randomized self test")
    common(p, with_instance=False)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(fn=cmd_selftest)

    p = sub.add_parser("generate", help="emit a deterministic random instance file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", required=True, choices=list(PROFILES))
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_generate)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (EngineError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
