"""Command-line batch interface: ``qstab verify --spec job.json --out report.json``.

Flags override the corresponding job fields.  Exit codes: 0 every check
Proven, 1 some check Refuted, 2 some check Inconclusive (and none Refuted),
3 tool error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from . import __version__
from .action import ActionError, Coaction, build_standard_action, finite_space
from .hopf import (
    build_presented_quantum_group,
    build_quantum_permutation_group,
    check_hopf_axioms,
    quotient_quantum_group,
)
from .ncpoly import ParseError, StructuralError
from .oracle import DEFAULT_ENUMERATION_CAP, OracleError, classical_orbit, classical_subgroup, haar_average
from .presentation import TrivialQuotientError
from .report import Check, Verdict, VerificationReport
from .rewrite import DEFAULT_DEGREE_BOUND, DEFAULT_RULE_CAP
from .stabilizer import (
    StabilizerError,
    SubgroupPresentation,
    build_stabilizer_subgroup,
    check_universality,
    counit_report,
    equivariance_report,
    fixes_report,
    quotient_space_check,
    restriction_report,
    stabilizer_ideal,
    subgroup_from_relations,
    verify_As_stabilizer_iso,
    check_woronowicz_ideal,
)

REPORT_SCHEMA_VERSION = 1
TASKS = ("hopf", "coaction", "stabilizer", "woronowicz", "universality", "iso", "quotient-space", "orbit", "all")
NEEDS_POINTS = {"stabilizer", "woronowicz", "universality", "quotient-space", "orbit"}
EXIT_PROVEN, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3


class JobParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class JobValidationError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("invalid job:\n" + "\n".join(f"  - {e}" for e in errors))
        self.errors = errors


def load_schema(name: str) -> dict:
    return json.loads(resources.files("qstab").joinpath("schemas", f"{name}.schema.json").read_text("utf-8"))


@dataclass
class JobSpec:
    group: dict
    task: str
    action: object = None
    points: list = field(default_factory=list)
    subgroups: list = field(default_factory=list)
    elements: list = field(default_factory=list)
    degree_bound: int = DEFAULT_DEGREE_BOUND
    rule_cap: int = DEFAULT_RULE_CAP
    oracle: bool = True
    full_trace: bool = False

    @property
    def magic(self) -> bool:
        return self.group["type"] == "quantum_permutation"

    @property
    def n(self) -> int | None:
        return self.group.get("n")

    def to_dict(self) -> dict:
        out = {
            "group": self.group, "task": self.task, "degree_bound": self.degree_bound,
            "rule_cap": self.rule_cap, "oracle": self.oracle, "full_trace": self.full_trace,
        }
        if self.action is not None:
            out["action"] = self.action
        for key in ("points", "subgroups", "elements"):
            if getattr(self, key):
                out[key] = getattr(self, key)
        return out


def _point_label(p) -> int:
    return int(p[2:]) if isinstance(p, str) else int(p)


def parse_job(text: str, overrides: dict | None = None) -> JobSpec:
    """Parse and validate a job; every violation is reported at once."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise JobValidationError(["job must be a JSON object"])
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})

    errors = []
    validator = jsonschema.Draft202012Validator(load_schema("jobspec"))
    for err in sorted(validator.iter_errors(raw), key=lambda e: (list(map(str, e.path)), e.message)):
        where = "/".join(map(str, err.path)) or "(root)"
        if err.validator == "required":
            missing = err.message.split("'")[1]
            where = "/".join([*map(str, err.path), missing])
            errors.append(f"{where}: required field missing")
        elif err.validator == "oneOf" and err.path and err.path[0] == "group":
            errors.append(f"{where}: expected a quantum_permutation builder or an inline presentation")
        else:
            errors.append(f"{where}: {err.message}")
    if errors:
        raise JobValidationError(errors)

    group = dict(raw["group"])
    group.setdefault("relations", [])
    spec = JobSpec(
        group=group, task=raw["task"], action=raw.get("action"),
        points=sorted({_point_label(p) for p in raw.get("points", [])}),
        subgroups=raw.get("subgroups", []), elements=raw.get("elements", []),
        degree_bound=raw.get("degree_bound", DEFAULT_DEGREE_BOUND), rule_cap=raw.get("rule_cap", DEFAULT_RULE_CAP),
        oracle=raw.get("oracle", True), full_trace=raw.get("full_trace", False),
    )
    if spec.action is None and spec.magic:
        spec.action = "standard"

    task = spec.task
    size = None
    if isinstance(spec.action, dict):
        m = spec.action["matrix"]
        size = len(m)
        if any(len(row) != size for row in m):
            errors.append("action/matrix: must be square")
    elif spec.action == "standard":
        if not spec.magic:
            errors.append("action: the standard action needs a quantum_permutation group")
        size = spec.n
    if task in NEEDS_POINTS and not spec.points:
        errors.append(f"points: required for task {task!r}")
    if task not in ("hopf", "iso") and spec.action is None:
        errors.append(f"action: required for task {task!r} with an inline group")
    if size is not None:
        for p in spec.points:
            if p > size:
                errors.append(f"points: x_{p} is not a point of X_{size}")
    if task == "iso":
        if not spec.magic:
            errors.append("group: iso needs a quantum_permutation group")
        elif spec.n < 3:
            errors.append("group/n: iso requires n >= 3")
        elif spec.group["relations"]:
            errors.append("group/relations: iso is stated for A_s(n) itself")
    if task == "orbit":
        if not spec.oracle:
            errors.append("oracle: orbit task evaluates classical points and needs the oracle")
        if not spec.magic:
            errors.append("group: orbit needs a quantum_permutation group")
    if spec.oracle and spec.magic and spec.n > DEFAULT_ENUMERATION_CAP:
        errors.append(f"group/n: n = {spec.n} exceeds the oracle enumeration cap {DEFAULT_ENUMERATION_CAP}"
                      " (use --no-oracle)")
    if spec.subgroups and task not in ("universality", "all"):
        errors.append("subgroups: only used by the universality task")
    if errors:
        raise JobValidationError(errors)
    return spec


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


@dataclass
class JobResult:
    spec: JobSpec
    report: VerificationReport
    results: dict = field(default_factory=dict)
    error: str | None = None
    elapsed_ms: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_ERROR
        return exit_code_for(self.report.verdict)


def exit_code_for(verdict: Verdict) -> int:
    return {Verdict.PROVEN: EXIT_PROVEN, Verdict.REFUTED: EXIT_REFUTED,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


class _Context:
    """Lazily built objects shared between the suites of one job."""

    def __init__(self, spec: JobSpec):
        self.spec = spec
        self.kw = dict(oracle=spec.oracle, full_trace=spec.full_trace)
        self._group = self._action = None
        self._h0 = self._ideal = None

    @property
    def group(self):
        if self._group is None:
            s, g = self.spec, self.spec.group
            if s.magic:
                G = build_quantum_permutation_group(s.n, s.degree_bound, s.rule_cap, oracle=s.oracle)
                if g["relations"]:
                    G, _ = quotient_quantum_group(G, g["relations"], g.get("name", f"{G.name}/J"), oracle=s.oracle)
            else:
                G = build_presented_quantum_group(g["name"], g["generators"], g["relations"], g["coproduct"],
                                                  g["counit"], g["antipode"], degree_bound=s.degree_bound,
                                                  rule_cap=s.rule_cap, oracle=s.oracle)
            self._group = G
        return self._group

    @property
    def action(self) -> Coaction:
        if self._action is None:
            a = self.spec.action
            if a == "standard":
                self._action = build_standard_action(self.group, oracle=self.spec.oracle)
            else:
                X = finite_space(len(a["matrix"]), degree_bound=self.spec.degree_bound)
                self._action = Coaction(X, self.group, a["matrix"])
        return self._action

    @property
    def h0(self) -> SubgroupPresentation:
        if self._h0 is None:
            self._h0 = build_stabilizer_subgroup(self.action, self.spec.points, ideal=self.ideal, **self.kw)
        return self._h0

    @property
    def ideal(self):
        if self._ideal is None:
            self._ideal = stabilizer_ideal(self.action, self.spec.points)
            self._ideal_report = check_woronowicz_ideal(self._ideal, **self.kw)
        return self._ideal


def _suite_hopf(ctx, rep, results):
    rep.extend(check_hopf_axioms(ctx.group, **ctx.kw))


def _suite_coaction(ctx, rep, results):
    from .action import check_coaction_axioms

    rep.extend(check_coaction_axioms(ctx.action, **ctx.kw))


def _suite_woronowicz(ctx, rep, results):
    I = ctx.ideal
    results["stabilizer_ideal_generators"] = [str(g) for g in I.generators]
    rep.extend(counit_report(I.generators, ctx.group))
    rep.extend(ctx._ideal_report)
    return ctx._ideal_report.verdict


def _suite_stabilizer(ctx, rep, results):
    if _suite_woronowicz(ctx, rep, results) is not Verdict.PROVEN:
        return
    H0 = ctx.h0
    results["stabilizer_subgroup"] = H0.name
    for c in H0.reports["hopf"]:
        rep.add(c)
    rep.extend(fixes_report(H0, ctx.action, ctx.spec.points, **ctx.kw))
    for x in ctx.spec.points:
        rep.extend(restriction_report(H0, ctx.action, x, oracle=ctx.spec.oracle))


def _counit_subgroup(G) -> list:
    return [G.gen(g.name) - G.counit.images[g].constant() for g in G.generators]


def _suite_universality(ctx, rep, results):
    G, alpha, Y = ctx.group, ctx.action, ctx.spec.points
    H0 = ctx.h0
    candidates = [("H_0", H0), ("C", subgroup_from_relations(G, _counit_subgroup(G), "C", oracle=ctx.spec.oracle))]
    for sg in ctx.spec.subgroups:
        extra = list(H0.ideal_generators) + [G.algebra.parse(r) for r in sg["relations"]]
        candidates.append((sg["name"], subgroup_from_relations(G, extra, sg["name"], oracle=ctx.spec.oracle)))
    results["universality_subgroups"] = [label for label, _ in candidates]
    for label, H in candidates:
        for c in fixes_report(H, alpha, Y, **ctx.kw):
            c.target = f"{label}: {c.target}"
            rep.add(c)
        for c in check_universality(H, H0, **ctx.kw):
            c.target = f"{label}: {c.target}"
            rep.add(c)


def _suite_quotient_space(ctx, rep, results):
    from .action import evaluate_at_point

    alpha, H0 = ctx.action, ctx.h0
    for x in ctx.spec.points:
        for k in alpha.space.labels:
            a = evaluate_at_point(alpha, x, alpha.space.e(k), reduce=False)
            c = quotient_space_check(a, H0, **ctx.kw)
            c.target = f"(ev_x{x}⊗id)α(e_{k}) = {c.target}"
            rep.add(c)
    for text in ctx.spec.elements:
        rep.add(quotient_space_check(ctx.group.algebra.parse(text), H0, **ctx.kw))
    for x in ctx.spec.points:
        for c in equivariance_report(alpha, x, H0, **ctx.kw):
            c.target = f"x_{x}: {c.target}"
            rep.add(c)


def _suite_iso(ctx, rep, results):
    s = ctx.spec
    rep.extend(verify_As_stabilizer_iso(s.n, degree_bound=s.degree_bound, rule_cap=s.rule_cap, **ctx.kw))


def _suite_orbit(ctx, rep, results):
    from .action import evaluate_at_point

    alpha, n, Y = ctx.action, ctx.spec.n, ctx.spec.points
    gens = ctx.ideal.generators
    try:
        H = classical_subgroup(gens, n)
        rep.add(Check("classical_subgroup", f"I_Y, Y = {_fmt_points(Y)}", Verdict.PROVEN,
                      {"method": "oracle", "size": len(H), "closed": True}))
    except OracleError as exc:
        rep.add(Check("classical_subgroup", f"I_Y, Y = {_fmt_points(Y)}", Verdict.REFUTED,
                      {"method": "oracle", "reason": str(exc)}))
        return
    orbits = {f"x_{k}": _fmt_points(sorted(classical_orbit(H, k))) for k in alpha.space.labels}
    results["classical_orbits"] = orbits
    results["classical_subgroup_size"] = len(H)
    for x in Y:
        orb = classical_orbit(H, x)
        rep.add(Check("classical_orbit", f"Orb(x_{x})", Verdict.PROVEN if orb == {x} else Verdict.REFUTED,
                      {"method": "oracle", "orbit": _fmt_points(sorted(orb))}))
    # the state f -> h((ev_x ⊗ id)α(f)) on the basis, per point
    states = {}
    for k in alpha.space.labels:
        states[k] = tuple(haar_average(evaluate_at_point(alpha, k, alpha.space.e(i), reduce=False), H)
                          for i in alpha.space.labels)
    results["haar_states"] = {f"x_{k}": [str(v) for v in vals] for k, vals in states.items()}
    for x in Y:
        others = [k for k in alpha.space.labels if k not in Y]
        separated = all(states[k] != states[x] for k in others)
        rep.add(Check("haar_average", f"state at x_{x} vs points outside Y",
                      Verdict.PROVEN if separated else Verdict.REFUTED,
                      {"method": "oracle", "state": [str(v) for v in states[x]]}))


def _fmt_points(points) -> str:
    return "{" + ", ".join(f"x_{k}" for k in points) + "}"


SUITES = {
    "hopf": _suite_hopf, "coaction": _suite_coaction, "stabilizer": _suite_stabilizer,
    "woronowicz": _suite_woronowicz, "universality": _suite_universality, "iso": _suite_iso,
    "quotient-space": _suite_quotient_space, "orbit": _suite_orbit,
}


def suites_for(spec: JobSpec) -> list[str]:
    if spec.task != "all":
        return [spec.task]
    out = ["hopf"]
    if spec.action is not None:
        out.append("coaction")
        if spec.points:
            out += ["stabilizer", "universality", "quotient-space"]
            if spec.magic and spec.oracle:
                out.append("orbit")
    if spec.magic and spec.n >= 3 and not spec.group["relations"]:
        out.append("iso")
    return out


def run_job(spec: JobSpec) -> JobResult:
    rep = VerificationReport()
    results = {}
    start = time.perf_counter()
    ctx = _Context(spec)
    error = None
    try:
        for name in suites_for(spec):
            SUITES[name](ctx, rep, results)
    except (StabilizerError, ActionError, TrivialQuotientError, StructuralError, ParseError, OracleError,
            ValueError) as exc:
        error = f"{type(exc).__name__}: {exc}"
    systems = {}
    for obj in (ctx._group, ctx._h0):
        if obj is not None:
            systems[obj.name] = obj.algebra.system.status()
    if systems:
        results["rewrite_systems"] = systems
    capped = any(s["capped"] for s in systems.values()) or any(c.witness.get("capped") for c in rep)
    if capped and not any(c.verdict is Verdict.PROVEN for c in rep):
        results["resource"] = "rule cap reached before any check was proven"
    if not len(rep) and error is None:
        error = "no checks produced"
    return JobResult(spec, rep, results, error, (time.perf_counter() - start) * 1000)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def report_dict(result: JobResult) -> dict:
    rep = result.report
    return {
        "tool": {"name": "qstab", "version": __version__, "report_schema": REPORT_SCHEMA_VERSION},
        "job": result.spec.to_dict(),
        "degree_bound": result.spec.degree_bound,
        "checks": [c.to_json() for c in rep],
        "summary": rep.summary(),
        "verdict": "Error" if result.error else rep.verdict.value,
        "exit_code": result.exit_code,
        "results": result.results,
        **({"error": result.error} if result.error else {}),
        "timings": {"total_ms": round(result.elapsed_ms, 3), "checks_ms": [round(c.elapsed_ms, 3) for c in rep]},
    }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def strip_timings(text: str) -> str:
    """The report with its timing block removed, for byte comparison."""
    obj = json.loads(text)
    obj.pop("timings", None)
    return canonical_json(obj)


def emit_report(result: JobResult, fmt: str = "json") -> bytes:
    d = report_dict(result)
    if fmt == "json":
        return canonical_json(d).encode("utf-8")
    lines = [f"qstab {__version__}  task={result.spec.task}  degree_bound={result.spec.degree_bound}"]
    for c in d["checks"]:
        w = c["witness"]
        extra = f"  [{w['point']}]" if "point" in w else ""
        lines.append(f"{c['verdict']:<12} {c['name']}  {c['target']}{extra}")
    for key, val in d["results"].items():
        lines.append(f"{key}: {val}")
    s = d["summary"]
    lines.append(f"summary: {s['Proven']} Proven, {s['Inconclusive']} Inconclusive, {s['Refuted']} Refuted"
                 f" ({s['total']} checks, {d['timings']['total_ms']:.0f} ms)")
    if result.error:
        lines.append(f"error: {result.error}")
    lines.append(f"verdict: {d['verdict']}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstab", description="Verify quantum stabilizer subgroup claims.")
    parser.add_argument("--version", action="version", version=f"qstab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification job")
    v.add_argument("--spec", required=True, help="job specification (JSON); '-' reads stdin")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--degree-bound", type=int)
    v.add_argument("--max-rules", type=int)
    v.add_argument("--no-oracle", action="store_true")
    v.add_argument("--task", choices=TASKS)
    v.add_argument("--full-trace", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
    except OSError as exc:
        print(f"qstab: cannot read job: {exc}", file=sys.stderr)
        return EXIT_ERROR
    overrides = {"degree_bound": args.degree_bound, "rule_cap": args.max_rules, "task": args.task,
                 "oracle": False if args.no_oracle else None, "full_trace": True if args.full_trace else None}
    try:
        spec = parse_job(text, overrides)
    except (JobParseError, JobValidationError) as exc:
        print(f"qstab: {exc}", file=sys.stderr)
        return EXIT_ERROR
    result = run_job(spec)
    data = emit_report(result, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    if result.error:
        print(f"qstab: {result.error}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
