"""Structure reports: verdict plus a per-condition breakdown with witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Condition:
    name: str
    ok: bool
    residual: object | None = None  # GradedElement, when meaningful
    witness: object | None = None   # e.g. a failing basis pair description

    def to_dict(self):
        out = {"name": self.name, "ok": self.ok}
        if self.residual is not None:
            out["residual"] = _element_terms(self.residual)
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class StructureReport:
    kind: str
    conditions: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.ok for c in self.conditions)

    def add(self, name, ok, residual=None, witness=None):
        if ok:
            residual = None
        self.conditions.append(Condition(name, bool(ok), residual, witness))
        return ok

    def add_report(self, prefix: str, sub: "StructureReport"):
        """Fold a sub-report in as namespaced conditions."""
        for c in sub.conditions:
            self.conditions.append(
                Condition(f"{prefix}.{c.name}", c.ok, c.residual, c.witness)
            )
        return sub.verdict

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def failing(self):
        return [c for c in self.conditions if not c.ok]

    def to_dict(self):
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "conditions": [c.to_dict() for c in self.conditions],
        }

    def summary(self) -> str:
        lines = [f"{self.kind}: {'TRUE' if self.verdict else 'FALSE'}"]
        for c in self.conditions:
            mark = "ok  " if c.ok else "FAIL"
            extra = ""
            if not c.ok and c.witness is not None:
                extra = f"  [witness: {c.witness}]"
            if not c.ok and c.residual is not None:
                extra += f"  [residual: {c.residual}]"
            lines.append(f"  {mark} {c.name}{extra}")
        return "\n".join(lines)


def _element_terms(el):
    """Serialize a GradedElement residual as a term list.

    Fibre indices (xi, theta) are 1-based in serialized form, matching
    instance files; exponent vectors for x and p are positional."""
    if el is None:
        return None
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


def _jsonable(obj):
    from .algebra import GradedElement

    if isinstance(obj, GradedElement):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj if isinstance(obj, (int, float, bool, str, type(None))) else str(obj)
