"""Check results and their JSON and markdown renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Jet

PASS, FAIL, SKIP = "pass", "fail", "skip"


def jsonable(x):
    """Fractions become ``"p/q"`` strings; tuples become lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Jet):
        return {"value": jsonable(x.a), "delta": jsonable(x.b)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)
    witness: object = None

    def as_dict(self):
        d = {"name": self.name, "status": self.status}
        if self.detail:
            d["detail"] = jsonable(self.detail)
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        return d


def check(name, ok, detail=None, witness=None) -> Check:
    return Check(name, PASS if ok else FAIL, detail or {}, None if ok else witness)


@dataclass
class Report:
    suite: str
    source: str
    checks: list = field(default_factory=list)
    conventions: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    timing: dict | None = None

    @property
    def status(self):
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    def add(self, c: Check):
        self.checks.append(c)
        return c

    def extend(self, cs):
        self.checks.extend(cs)

    def as_dict(self):
        d = {
            "suite": self.suite,
            "source": self.source,
            "status": self.status,
            "params": jsonable(self.params),
            "conventions": jsonable(self.conventions),
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.timing is not None:
            d["timing"] = jsonable(self.timing)
        return d


def render_json(reports) -> str:
    docs = [r.as_dict() for r in reports]
    return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2, sort_keys=False) + "\n"


def render_markdown(reports) -> str:
    out = []
    for r in reports:
        out.append(f"# {r.suite}: {r.source}")
        out.append("")
        out.append(f"Overall: **{r.status}**")
        out.append("")
        if r.params:
            out.append("Parameters: " + ", ".join(f"{k}={jsonable(v)}" for k, v in r.params.items()))
            out.append("")
        if r.conventions:
            out.append("## Conventions")
            out.append("")
            for k, v in r.conventions.items():
                out.append(f"- {k}: `{jsonable(v)}`")
            out.append("")
        out.append("## Checks")
        out.append("")
        out.append("| check | status | detail |")
        out.append("| --- | --- | --- |")
        for c in r.checks:
            detail = json.dumps(jsonable(c.detail)) if c.detail else ""
            out.append(f"| {c.name} | {c.status} | {detail} |")
        out.append("")
        fails = [c for c in r.checks if c.witness is not None]
        if fails:
            out.append("## Witnesses")
            out.append("")
            for c in fails:
                out.append(f"- {c.name}: `{json.dumps(jsonable(c.witness))}`")
            out.append("")
        if r.timing is not None:
            out.append("Timing: " + ", ".join(f"{k}={v:.3f}s" for k, v in r.timing.items()))
            out.append("")
    return "\n".join(out)
