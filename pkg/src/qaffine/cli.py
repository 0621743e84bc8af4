"""Command-line entry point.

JSON goes to stdout, a one-line human summary to stderr.  Exit codes:
0 pass, 1 check failed, 2 bad input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import cartan
from .algebra import verify_sc_presentation
from .cache import cache_from_env
from .cartan import SpecError, catalog, integrable_dominant, parse_labels, validate, weight_from_labels
from .report import VerificationReport
from .transmutation import SignCharacter, default_signs, specialized_relations_report, verify_twist
from .verma import (
    DEFAULT_DEPTH,
    HighestWeightModule,
    ResourceLimit,
    TensorModule,
    character_json,
    classical_action_check,
    verify_relations,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
VERIFY_DEPTH = 4

_FAMILY_ALIASES = {"B": "B1_0", "A2odd": "A2_0", "C": "C2", "A4": "A4_0"}


class InputError(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    algebra: str | None = None
    spec: str | None = None
    family: str | None = None
    n: int | None = None
    labels: tuple | None = None
    labels2: tuple | None = None
    lambda0: Fraction | None = None
    depth: int | None = None
    fmt: str = "json"
    cache_dir: str | None = None
    seed: int = 0
    timing: bool = False
    allow_nonintegrable: bool = False
    max_space: int = 5000
    mutate: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobSpec":
        try:
            labels = parse_labels(args.labels) if getattr(args, "labels", None) else None
            labels2 = parse_labels(args.labels2) if getattr(args, "labels2", None) else None
            lam0 = Fraction(args.lambda0) if getattr(args, "lambda0", None) is not None else None
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse labels: {exc}") from exc
        depth = getattr(args, "depth", None)
        if depth is not None and depth < 0:
            raise InputError("depth must be >= 0")
        return cls(
            command=args.command,
            algebra=getattr(args, "algebra", None),
            spec=getattr(args, "spec", None),
            family=getattr(args, "family", None),
            n=getattr(args, "n", None),
            labels=labels,
            labels2=labels2,
            lambda0=lam0,
            depth=depth,
            fmt=getattr(args, "format", "json"),
            cache_dir=getattr(args, "cache_dir", None),
            seed=getattr(args, "seed", 0),
            timing=getattr(args, "timing", False),
            allow_nonintegrable=getattr(args, "allow_nonintegrable", False),
            max_space=getattr(args, "max_space", 5000),
            mutate=getattr(args, "mutate", None),
        )


def load_algebra(job: JobSpec) -> cartan.AlgebraData:
    if job.spec:
        try:
            text = Path(job.spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read spec file: {exc}") from exc
        return cartan.from_json(text, name=Path(job.spec).stem)
    if job.family:
        fam = _FAMILY_ALIASES.get(job.family, job.family)
        if job.n is None:
            raise InputError("--family needs --n")
        try:
            return cartan._build_super(fam, job.n)
        except (KeyError, ValueError) as exc:
            raise InputError(f"unknown family or rank: {exc}") from exc
    if job.algebra:
        try:
            return catalog(job.algebra, job.n)
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    raise InputError("give --algebra, --family/--n or --spec")


def _labels_for(data, labels, lambda0=None):
    if labels is None:
        raise InputError("--labels is required")
    if len(labels) != len(data.matrix):
        raise InputError(f"expected {len(data.matrix)} labels for {data.name}, got {len(labels)}")
    try:
        return weight_from_labels(data, labels, lambda0)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _require_integrable(data, lam, allow: bool) -> None:
    if allow or integrable_dominant(data, lam):
        return
    raise InputError(
        "labels must be non-negative integers, and even at odd nodes "
        f"{sorted(data.theta)}, for an integrable highest weight (pass --allow-nonintegrable to override)"
    )


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# --- commands ----------------------------------------------------------------


def cmd_catalog(job: JobSpec, out, err) -> int:
    rows = cartan.catalog_families()
    if job.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "kind", "detail"])
        for r in rows:
            detail = f"n={r['ranks'][0]}..{r['ranks'][1]}" if r["kind"] == "super" else r["pattern"]
            w.writerow([r["family"], r["kind"], detail])
        out.write(buf.getvalue())
    else:
        out.write(_dump({"families": rows, "names": cartan.catalog_names()}))
    err.write(f"{sum(r['kind'] == 'super' for r in rows)} super families, "
              f"{sum(r['kind'] == 'partner' for r in rows)} partner families\n")
    return EXIT_PASS


def cmd_validate(job: JobSpec, out, err) -> int:
    try:
        data = load_algebra(job)
    except SpecError as exc:
        where = []
        if exc.field:
            where.append(f"field {exc.field!r}")
        if exc.line:
            where.append(f"line {exc.line}")
        err.write(f"parse error: {exc}" + (f" ({', '.join(where)})" if where else "") + "\n")
        return EXIT_INPUT
    report = validate(data)
    return _emit_report(report, job, out, err)


def cmd_export(job: JobSpec, out, err) -> int:
    data = load_algebra(job)
    out.write(_dump(data.to_json()))
    err.write(f"exported {data.name}\n")
    return EXIT_PASS


def cmd_character(job: JobSpec, out, err) -> int:
    data = load_algebra(job)
    lam = _labels_for(data, job.labels, job.lambda0)
    _require_integrable(data, lam, job.allow_nonintegrable)
    depth = DEFAULT_DEPTH if job.depth is None else job.depth
    cache = cache_from_env(job.cache_dir)
    module = HighestWeightModule(data, job.labels, lambda0=job.lambda0, seed=job.seed,
                                 max_space=job.max_space, rank_cache=cache)
    t0 = time.perf_counter()
    code = EXIT_PASS
    try:
        char = module.character(depth)
        partial = False
    except ResourceLimit as exc:
        char, partial, code = exc.partial, True, EXIT_LIMIT
        err.write(f"resource limit: {exc}\n")
    doc = character_json(module, depth, char)
    if partial:
        doc["partial"] = True
    if job.timing:
        doc["elapsed_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    if job.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"c{i}" for i in data.nodes] + ["multiplicity"])
        for e in doc["entries"]:
            w.writerow(e["alpha_coords"] + [e["multiplicity"]])
        out.write(buf.getvalue())
    else:
        out.write(_dump(doc))
    total = sum(e["multiplicity"] for e in doc["entries"])
    err.write(f"character of {data.name} labels={','.join(map(str, module.labels))} to depth {depth}: "
              f"{len(doc['entries'])} weights, total dimension {total}"
              + (" (partial)" if partial else "")
              + (f", cache hits {cache.hits}" if cache else "") + "\n")
    return code


def cmd_integrable(job: JobSpec, out, err) -> int:
    data = load_algebra(job)
    lam = _labels_for(data, job.labels, job.lambda0)
    m_max = 8 if job.depth is None else job.depth
    module = HighestWeightModule(data, job.labels, lambda0=job.lambda0, seed=job.seed)
    probes = {f"f{i}": module.nilpotency_index(i, None, m_max) for i in data.nodes}
    claim = integrable_dominant(data, lam)
    empirical = all(v is not None for v in probes.values())
    doc = {
        "algebra": data.name,
        "highest_weight_labels": [str(x) for x in module.labels],
        "integrable_dominant": claim,
        "nilpotency_index": probes,
        "m_max": m_max,
        "agree": claim == empirical,
    }
    out.write(_dump(doc))
    err.write(f"{data.name}: integrable={claim}, probes terminate={empirical}\n")
    return EXIT_PASS if claim == empirical else EXIT_FAIL


def _parse_mutation(data, spec: str) -> SignCharacter:
    base = default_signs(data)
    if spec == "omit-delta":
        return SignCharacter.chain(len(data.matrix), omit_delta=True)
    parts = spec.split(":")
    if len(parts) == 4 and parts[0] == "flip" and parts[1] in ("e", "f"):
        try:
            return base.with_flip(parts[1], int(parts[2]), int(parts[3]))
        except (ValueError, IndexError) as exc:
            raise InputError(f"bad mutation {spec!r}: {exc}") from exc
    raise InputError(f"unknown mutation {spec!r} (use omit-delta or flip:e|f:i:j)")


def cmd_verify(job: JobSpec, out, err) -> int:
    what = job.extra["what"]
    data = load_algebra(job)
    depth = job.depth
    t0 = time.perf_counter()
    if what == "presentation":
        report = verify_sc_presentation(data)
    elif what == "specialized":
        report = specialized_relations_report(data)
    elif what in ("serre", "relations", "classical", "twist"):
        labels = job.labels if job.labels is not None else (0,) * len(data.matrix)
        lam = _labels_for(data, labels, job.lambda0)
        depth = VERIFY_DEPTH if depth is None else depth
        if what == "twist":
            _require_integrable(data, lam, False)
            signs = _parse_mutation(data, job.mutate) if job.mutate else None
            try:
                report = verify_twist(data, labels, depth, signs=signs, seed=job.seed)
            except (ValueError, ArithmeticError) as exc:
                raise InputError(str(exc)) from exc
        elif what == "classical":
            report = classical_action_check(data, labels, depth, seed=job.seed)
        else:
            module = HighestWeightModule(data, labels, lambda0=job.lambda0, seed=job.seed)
            fams = ("serre_e", "serre_f") if what == "serre" else None
            report = verify_relations(module, depth, families=fams, check=what)
    elif what == "tensor":
        l1 = job.labels if job.labels is not None else (0,) * len(data.matrix)
        l2 = job.labels2 if job.labels2 is not None else l1
        _labels_for(data, l1)
        _labels_for(data, l2)
        depth = 2 if depth is None else depth
        tm = TensorModule(HighestWeightModule(data, l1, seed=job.seed), HighestWeightModule(data, l2, seed=job.seed))
        report = verify_relations(tm, depth, check="tensor")
        report.lambda_labels = [",".join(map(str, l1)), ",".join(map(str, l2))]
    else:
        raise InputError(f"unknown check {what}")
    report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return _emit_report(report, job, out, err)


def _emit_report(report: VerificationReport, job: JobSpec, out, err) -> int:
    out.write(_dump(report.to_json(timing=job.timing)))
    err.write(report.summary() + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


# --- parser ------------------------------------------------------------------


def _add_algebra_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algebra", help="catalog name, e.g. B1_0_1 or A2_2")
    p.add_argument("--spec", help="JSON algebra spec file")
    p.add_argument("--family", help="super family (B, A2odd, C, A4 or B1_0, ...)")
    p.add_argument("--n", type=int, help="rank parameter for --family or a bare catalog family")


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--labels", help="Dynkin labels, comma separated, one per node")
    p.add_argument("--lambda0", help="Lambda_0 coefficient (must agree with the labels)")
    p.add_argument("--depth", type=int)
    p.add_argument("--seed", type=int, default=0, help="seed for random evaluation points")
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (output no longer reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaffine", description="Quantum affine superalgebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the built-in families")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("validate", help="check Cartan data")
    _add_algebra_args(p)
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("export", help="print algebra data as a JSON spec")
    _add_algebra_args(p)

    p = sub.add_parser("character", help="weight multiplicities of the irreducible module")
    _add_algebra_args(p)
    _add_weight_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir", help="Gram-rank cache root (default: $QAFFINE_CACHE_DIR)")
    p.add_argument("--allow-nonintegrable", action="store_true")
    p.add_argument("--max-space", type=int, default=5000, help="largest weight space to attempt")

    p = sub.add_parser("integrable", help="compare the label criterion with nilpotency probes")
    _add_algebra_args(p)
    _add_weight_args(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("what", choices=("serre", "relations", "presentation", "specialized", "tensor", "classical", "twist"))
    _add_algebra_args(p)
    _add_weight_args(p)
    p.add_argument("--labels2", help="labels of the second tensor factor")
    p.add_argument("--mutate", help="twist sign mutation for negative controls: omit-delta or flip:e|f:i:j")
    return parser


COMMANDS = {
    "catalog": cmd_catalog,
    "validate": cmd_validate,
    "export": cmd_export,
    "character": cmd_character,
    "integrable": cmd_integrable,
    "verify": cmd_verify,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job = JobSpec.from_args(args)
        if args.command == "verify":
            job.extra["what"] = args.what
        return COMMANDS[args.command](job, out, err)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SpecError as exc:
        err.write(f"spec error: {exc}" + (f" (field {exc.field!r})" if exc.field else "") + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
