"""Command line: parse instance files, run theorem suites, write reports.

Instance files are TOML with sections [ring], [ideal], [a] and an optional
[run]; see README.md for the grammar.  Exit codes: 0 all verified or
hypotheses-not-met, 1 some verdict refuted, 2 with --strict when a verdict is
hypotheses-not-met or undecidable, 3 I/O error, 4 invalid instance file,
5 random generation exhausted its attempts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import tomli_w

from . import __version__
from .algebra import AlgebraError, Field, Ring
from .homology import betti_table, regularity, type_of
from .residual import ResidualComplex, ResidualInstance, omega_coefficients
from .verify import (
    NOT_MET,
    REFUTED,
    SUITES,
    UNDECIDABLE,
    InstanceRecipe,
    depth_report,
    quotient_module,
    random_instance,
    run_suite,
)

EXIT_OK, EXIT_REFUTED, EXIT_STRICT, EXIT_IO, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4, 5

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "report.schema.json")

_ALLOWED = {
    "": {"name", "ring", "ideal", "a", "run"},
    "ring": {"field", "variables", "degrees", "order"},
    "ideal": {"generators", "family", "vars", "exponent", "exponents", "columns"},
    "a": {"generators", "degrees", "seed", "max_attempts"},
    "run": {"suite", "degree_bound"},
}


class InstanceError(Exception):
    """Invalid instance file (syntax, unknown key, bad polynomial, ...)."""


@dataclass
class InstanceFile:
    """Validated contents of an instance file."""

    name: str
    field: str
    variables: list
    degrees: list = None
    order: str = "grevlex"
    ideal: list = None
    family: str = "explicit"
    params: dict = dc_field(default_factory=dict)
    a_generators: list = None
    a_degrees: list = None
    seed: int = None
    max_attempts: int = 20
    suite: list = None
    degree_bound: int = 8

    def to_dict(self):
        out = {"name": self.name}
        ring = {"field": self.field, "variables": list(self.variables), "order": self.order}
        if self.degrees is not None:
            ring["degrees"] = list(self.degrees)
        out["ring"] = ring
        ideal = {"family": self.family} if self.family != "explicit" else {}
        if self.ideal is not None:
            ideal["generators"] = list(self.ideal)
        ideal.update(self.params)
        out["ideal"] = ideal
        a = {}
        if self.a_generators is not None:
            a["generators"] = list(self.a_generators)
        else:
            a["degrees"] = list(self.a_degrees)
            a["seed"] = self.seed
            a["max_attempts"] = self.max_attempts
        out["a"] = a
        run = {"degree_bound": self.degree_bound}
        if self.suite is not None:
            run["suite"] = list(self.suite)
        out["run"] = run
        return out

    def dumps(self):
        return tomli_w.dumps(self.to_dict())

    def recipe(self) -> InstanceRecipe:
        return InstanceRecipe(
            field=self.field, variables=list(self.variables), degrees=self.degrees,
            order=self.order, family=self.family, ideal=self.ideal, params=dict(self.params),
            a_degrees=self.a_degrees, a_explicit=self.a_generators, max_attempts=self.max_attempts,
        )

    def build(self, seed=None) -> ResidualInstance:
        seed = self.seed if seed is None else seed
        inst = random_instance(self.recipe(), seed)
        inst.name = self.name
        return inst


def _check_keys(table, section):
    allowed = _ALLOWED[section]
    for key in table:
        if key not in allowed:
            where = f"[{section}]" if section else "top level"
            raise InstanceError(f"unknown key {key!r} in {where}")


def _str_list(value, what):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InstanceError(f"{what} must be a list of strings")
    return list(value)


def _int_list(value, what):
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InstanceError(f"{what} must be a list of integers")
    return list(value)


def parse_text(text, default_name="instance") -> InstanceFile:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InstanceError(f"syntax error: {exc}") from None
    _check_keys(data, "")
    for section in ("ring", "ideal", "a"):
        if section not in data:
            raise InstanceError(f"missing section [{section}]")
    for section in ("ring", "ideal", "a", "run"):
        if section in data:
            if not isinstance(data[section], dict):
                raise InstanceError(f"{section} must be a table")
            _check_keys(data[section], section)
    ring_t, ideal_t, a_t = data["ring"], data["ideal"], data["a"]
    run_t = data.get("run", {})
    if "field" not in ring_t or "variables" not in ring_t:
        raise InstanceError("[ring] needs field and variables")
    inst = InstanceFile(
        name=str(data.get("name", default_name)),
        field=str(ring_t["field"]),
        variables=_str_list(ring_t["variables"], "variables"),
        degrees=_int_list(ring_t["degrees"], "degrees") if "degrees" in ring_t else None,
        order=str(ring_t.get("order", "grevlex")),
    )
    inst.family = str(ideal_t.get("family", "explicit"))
    if inst.family == "explicit":
        if "generators" not in ideal_t:
            raise InstanceError("[ideal] needs generators or a family")
        inst.ideal = _str_list(ideal_t["generators"], "ideal generators")
    inst.params = {k: v for k, v in ideal_t.items() if k not in ("generators", "family")}
    if "generators" in a_t:
        if "degrees" in a_t or "seed" in a_t:
            raise InstanceError("[a] takes either generators or a random recipe, not both")
        inst.a_generators = _str_list(a_t["generators"], "a generators")
    else:
        if "degrees" not in a_t:
            raise InstanceError("[a] needs generators or degrees")
        inst.a_degrees = _int_list(a_t["degrees"], "a degrees")
        if "seed" not in a_t:
            raise InstanceError("seed required for reproducibility")
        inst.seed = int(a_t["seed"])
        inst.max_attempts = int(a_t.get("max_attempts", 20))
    if "suite" in run_t:
        inst.suite = _str_list(run_t["suite"], "suite")
        _validate_suite(inst.suite)
    inst.degree_bound = int(run_t.get("degree_bound", 8))
    _validate_ring(inst)
    return inst


def _validate_suite(names):
    for s in names:
        if s not in SUITES:
            raise InstanceError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")


def _validate_ring(inst: InstanceFile):
    try:
        ring = Ring(Field.from_name(inst.field), inst.variables, inst.degrees, inst.order)
        f = inst.recipe().generators(ring)
        polys = list(f)
        if inst.a_generators is not None:
            polys += [ring.parse(t) for t in inst.a_generators]
    except AlgebraError as exc:
        raise InstanceError(str(exc)) from None
    inst.order = ring.order
    for p in polys:
        if not p:
            raise InstanceError("generators must be nonzero")
        if not p.is_homogeneous():
            raise InstanceError(f"degree mismatch: {p} is not homogeneous")


def parse_instance(path) -> InstanceFile:
    """Read and validate an instance file (OSError propagates)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_text(text, os.path.splitext(os.path.basename(path))[0])


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def invariants(inst: ResidualInstance, bound=8):
    Q = quotient_module(inst)
    hs = Q.hilbert_series()
    out = {
        "g": inst.g,
        "s": inst.s,
        "d": inst.d,
        "sigma": inst.sigma,
        "J": inst.J.to_strings(),
        "hilbert_series": hs.to_dict(),
        "hilbert_function": [hs.coefficients(0, bound)[n] for n in range(bound + 1)],
        "multiplicity": str(hs.multiplicity()),
        "dim": hs.dimension(),
    }
    out["betti"] = betti_table(Q).to_dict()
    if inst.ring.is_standard_graded:
        out["regularity"] = regularity(Q)
    try:
        out["type"] = type_of(Q)
    except AlgebraError:
        out["type"] = None
    out["depth_report"] = depth_report(inst).to_dict()
    return out


def build_report(inst: ResidualInstance, spec: InstanceFile, suites, seed, bound, threads=1):
    t0 = time.perf_counter()
    classification = inst.classify(arithmetic=True)
    t1 = time.perf_counter()
    inv = invariants(inst, bound)
    t2 = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: run_suite(inst, [s], seed=seed, bound=bound),
                                  [s for s in SUITES if s in suites]))
        verdicts = [v for part in parts for v in part]
    else:
        verdicts = run_suite(inst, suites, seed=seed, bound=bound)
    t3 = time.perf_counter()
    return {
        "version": __version__,
        "instance": spec.to_dict(),
        "generated": {"I": [str(x) for x in inst.f], "a": [str(x) for x in inst.a],
                      "lift": inst.lift.to_lists()},
        "classification": classification,
        "invariants": inv,
        "verdicts": [v.to_dict() for v in verdicts],
        "timing": {"classify": round(t1 - t0, 3), "invariants": round(t2 - t1, 3),
                   "suites": round(t3 - t2, 3)},
    }


def exit_code(report, strict=False):
    statuses = [v["status"] for v in report["verdicts"]]
    if REFUTED in statuses:
        return EXIT_REFUTED
    if strict and any(s in (NOT_MET, UNDECIDABLE) for s in statuses):
        return EXIT_STRICT
    return EXIT_OK


def _scalar(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def delimited(report):
    """Tab-separated lines section, key, value."""
    lines = []
    for k, v in sorted(report["classification"].items()):
        lines.append(f"classification\t{k}\t{v}")
    for k, v in sorted(report["invariants"].items()):
        lines.append(f"invariant\t{k}\t{_scalar(v)}")
    for v in report["verdicts"]:
        note = f"\t{v['note']}" if v.get("note") else ""
        lines.append(f"verdict\t{v['theorem']}\t{v['status']}{note}")
    return "\n".join(lines) + "\n"


def figures(report, inst: ResidualInstance, directory, bound):
    from .plotting import write_figures

    hf = report["invariants"]["hilbert_function"]
    functions = {"R/J": {n: hf[n] for n in range(len(hf))}}
    m = inst.s - inst.g + 1
    if m >= 1:
        top = inst.sym_power(m).presentation.twist(inst.sigma - inst.ring.canonical_degree)
        coeffs = top.hilbert_series().coefficients(-inst.sigma, bound)
        functions[f"Sym^{m}(I/a) twisted"] = coeffs
    inv = {k: _scalar(v) for k, v in report["invariants"].items() if not isinstance(v, dict)}
    return write_figures(directory, functions, betti_table(quotient_module(inst)), inv)


def _load(args):
    spec = parse_instance(args.file)
    seed = spec.seed if args.seed is None else args.seed
    return spec, spec.build(seed), seed


def cmd_run(args):
    spec, inst, seed = _load(args)
    suites = args.suite.split(",") if args.suite else (spec.suite or list(SUITES))
    _validate_suite(suites)
    bound = args.degree_bound or spec.degree_bound
    report = build_report(inst, spec, suites, seed or 0, bound, threads=args.threads)
    if args.json:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    if args.json != "-":
        sys.stdout.write(delimited(report))
    if args.figures:
        for path in figures(report, inst, args.figures, bound):
            sys.stderr.write(f"wrote {path}\n")
    return exit_code(report, args.strict)


def cmd_invariants(args):
    spec, inst, _ = _load(args)
    inv = invariants(inst, args.degree_bound or spec.degree_bound)
    for k, v in sorted(inv.items()):
        sys.stdout.write(f"{k}\t{_scalar(v)}\n")
    return EXIT_OK


def cmd_complex(args):
    spec, inst, _ = _load(args)
    M = omega_coefficients(inst.ring) if args.coefficients == "omega" else None
    C = ResidualComplex(inst, args.k, M)
    bound = args.degree_bound or spec.degree_bound
    sys.stdout.write(f"k\t{args.k}\ncoefficients\t{args.coefficients}\n")
    sys.stdout.write(f"d_squared_zero\t{C.is_complex()}\n")
    for i in range(inst.s + 1):
        F = C.ambient.module(i)
        twists = sorted(set(F.degrees))
        sys.stdout.write(f"term\t{i}\tgenerators={C.ranks()[i]}\tambient_rank={F.rank}\t"
                         f"twists={_scalar(twists)}\tsummands={_scalar(C.summands(i))}\n")
    for i in range(1, inst.s + 1):
        v = C.homology_vanishes(i, bound)
        sys.stdout.write(f"homology\t{i}\t{'vanishes' if v else 'nonzero'}\tdegrees<={bound}\n")
    sys.stdout.write(f"h0_series\t{C.h0().hilbert_series()}\n")
    return EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(prog="residua", description="Residual intersection toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="instance file (TOML)")
        sp.add_argument("--seed", type=int, default=None, help="override the recipe seed")
        sp.add_argument("--degree-bound", type=int, default=None, help="degree bound for degreewise checks")

    r = sub.add_parser("run", help="classify, compute invariants and run theorem suites")
    common(r)
    r.add_argument("--suite", default=None, help="comma-separated: " + ",".join(SUITES))
    r.add_argument("--json", default=None, help="write the JSON report here ('-' for stdout)")
    r.add_argument("--strict", action="store_true", help="exit 2 on hypotheses-not-met/undecidable")
    r.add_argument("--threads", type=int, default=1, help="run suites concurrently")
    r.add_argument("--figures", default=None, metavar="DIR", help="write figures and a TSV here")
    r.set_defaults(func=cmd_run)

    i = sub.add_parser("invariants", help="print the invariant table")
    common(i)
    i.set_defaults(func=cmd_invariants)

    c = sub.add_parser("complex", help="dump a residual approximation complex")
    common(c)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--coefficients", choices=["ring", "omega"], default="ring")
    c.set_defaults(func=cmd_complex)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        sys.stderr.write(f"residua: I/O error: {exc}\n")
        return EXIT_IO
    except InstanceError as exc:
        sys.stderr.write(f"residua: invalid instance: {exc}\n")
        return EXIT_PARSE
    except AlgebraError as exc:
        if "attempt cap" in str(exc):
            sys.stderr.write(f"residua: {exc}\n")
            return EXIT_CAP
        sys.stderr.write(f"residua: invalid instance: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
