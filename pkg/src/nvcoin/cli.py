"""Command line entry point.

Exit status: 0 success, 1 invalid input data, 2 two computations disagreed, 3 unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import io
from .errors import MismatchDetected, NvCoinError
from .fixtures import FIXTURES, fixture
from .groups import validate_flat_group, verify_single_morphism
from .invariants import class_label, compute_invariants, fmt_count
from .morphism import reidemeister_classes_torus, sigma_analysis, verify_nv_morphism
from .oracle import derive_morphism, oracle_report, validate_map

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_PARSE = 0, 1, 2, 3
COMMANDS = ("validate", "compute", "classes", "oracle", "example")


class InvalidInput(Exception):
    pass


@dataclass(frozen=True)
class JobSpec:
    command: str
    input: str | None = None
    fixture: str | None = None
    format: str = "table"
    output: str | None = None


def _load(job: JobSpec) -> dict:
    if job.fixture is not None:
        try:
            return fixture(job.fixture)
        except KeyError as exc:
            raise io.ParseError(str(exc.args[0])) from None
    if job.input is None:
        raise io.ParseError("need --input or --fixture")
    try:
        with open(job.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise io.ParseError(f"cannot read {job.input}: {exc.strerror}") from None
    return io.load(text)


def _problem(doc):
    """(phi, psi, affine pair or None) from a problem or affine document, after validation."""
    kind = io.document_kind(doc)
    if kind == "affine":
        f, g = io.affine_from_json(doc)
        validate_map(f)
        phi, psi = derive_morphism(f, g)
        return phi, psi, (f, g)
    if kind != "problem":
        raise io.ParseError("expected a problem or an affine map document")
    phi, psi = io.problem_from_json(doc)
    failures = _validate_problem(phi, psi)
    if failures:
        raise InvalidInput("; ".join(failures))
    return phi, psi, None


def _validate_problem(phi, psi) -> list:
    failures = []
    for role, G in (("source", phi.source), ("target", phi.target)):
        rep = validate_flat_group(G)
        failures += [f"{role} {msg}" for msg in rep.failures]
    if not failures:
        if not verify_nv_morphism(phi):
            failures.append("phi does not respect the source relators")
        if not verify_single_morphism(psi):
            failures.append("psi does not respect the source relators")
    return failures


def _validate(doc):
    kind = io.document_kind(doc)
    if kind == "group":
        rep = validate_flat_group(io.group_from_json(doc))
        out = {"group": rep.to_json()}
        return out, rep.valid
    if kind == "affine":
        f, _ = io.affine_from_json(doc)
        rep = validate_map(f, strict=False)
        return {"map": rep.to_json()}, rep.valid
    phi, psi = io.problem_from_json(doc)
    out = {"source": validate_flat_group(phi.source).to_json(),
           "target": validate_flat_group(phi.target).to_json()}
    ok = out["source"]["valid"] and out["target"]["valid"]
    if ok:
        out["phi"] = verify_nv_morphism(phi)
        out["psi"] = verify_single_morphism(psi)
        ok = out["phi"] and out["psi"]
    return out, ok


def _validation_table(out) -> str:
    lines = []
    for key, val in out.items():
        if isinstance(val, bool):
            lines.append(f"{key}: {'ok' if val else 'FAILED relator check'}")
            continue
        lines.append(f"{key}: {'valid' if val['valid'] else 'INVALID'}")
        lines += [f"  {msg}" for msg in val["failures"]]
        lines += [f"  witness {name}: {w}" for name, w in val["witnesses"].items()]
    return "\n".join(lines)


def _classes(phi, psi):
    a = sigma_analysis(phi)
    out = []
    for i in range(phi.n):
        c = reidemeister_classes_torus(phi, i, psi, analysis=a)
        out.append({"branch": i + 1, "orbit_representative": a.representative(i) + 1,
                    "count": fmt_count(c.count) if c.count == float("inf") else c.count,
                    "relation_lattice": [list(v) for v in c.lattice.basis],
                    "classes": [class_label(i, r) for r in c.representatives]})
    return out


def _classes_table(rows) -> str:
    lines = []
    for r in rows:
        lines.append(f"branch {r['branch']} (orbit of {r['orbit_representative']}): {r['count']} classes")
        lines += [f"  {label}" for label in r["classes"]]
    return "\n".join(lines)


def _oracle_table(coins, rec) -> str:
    lines = ["point                 branch  class           index"]
    for p in coins.points:
        pt = "(" + ", ".join(map(str, p.point)) + ")"
        lines.append(f"{pt:<22}{p.branch + 1:>6}  {class_label(*p.label):<16}{p.index:>5}")
    lines += ["", f"#Coin = {rec.coincidences}, nonempty classes = {rec.nonempty_classes}, "
              f"essential classes = {rec.essential_classes}, index sum = {rec.index_sum}",
              f"L = {rec.L}, R = {fmt_count(rec.R)}, N = {rec.N}"]
    lines += [f"  {'pass' if ok else 'FAIL'}  {name}" for name, ok in rec.checks.items()]
    return "\n".join(lines)


def run(job: JobSpec, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        status, text = _dispatch(job)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except MismatchDetected as exc:
        print(f"mismatch: {exc}", file=stderr)
        return EXIT_MISMATCH
    except (InvalidInput, NvCoinError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=stderr)
        for attr in ("generator", "branch", "pair", "point"):
            val = getattr(exc, attr, None)
            if val is None:
                continue
            if attr == "point":
                val = "(" + ", ".join(map(str, val)) + ")"
            elif attr == "pair":
                val = tuple(v + 1 for v in val)
            else:
                val += 1
            print(f"  witness {attr}: {val}", file=stderr)
        return EXIT_INVALID
    if job.output:
        with open(job.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def _dispatch(job: JobSpec):
    as_json = job.format == "json"
    if job.command == "example":
        if job.fixture is None:
            raise io.ParseError("example needs --fixture NAME")
        return EXIT_OK, io.dump(_load(job))
    doc = _load(job)
    if job.command == "validate":
        out, ok = _validate(doc)
        text = io.dump(out) if as_json else _validation_table(out) + "\n"
        return (EXIT_OK if ok else EXIT_INVALID), text
    if job.command == "compute":
        phi, psi, _ = _problem(doc)
        report = compute_invariants(phi, psi)
        return EXIT_OK, io.dump(report.to_json()) if as_json else report.to_table() + "\n"
    if job.command == "classes":
        phi, psi, _ = _problem(doc)
        rows = _classes(phi, psi)
        return EXIT_OK, io.dump(rows) if as_json else _classes_table(rows) + "\n"
    if job.command == "oracle":
        if io.document_kind(doc) != "affine":
            raise io.ParseError("oracle needs an affine map document")
        f, g = io.affine_from_json(doc)
        validate_map(f)
        coins, rec, _ = oracle_report(f, g)
        if as_json:
            return EXIT_OK, io.dump({"coincidences": coins.to_json(), "comparison": rec.to_json()})
        return EXIT_OK, _oracle_table(coins, rec) + "\n"
    raise io.ParseError(f"unknown command {job.command!r}")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage, which would read as a mismatch
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nvcoin",
                                description="Coincidence invariants of n-valued maps on flat manifolds.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", help="JSON document to read")
    src.add_argument("--fixture", metavar="NAME", help=f"built-in document: {', '.join(sorted(FIXTURES))}")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output", metavar="PATH", help="write here instead of standard output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(JobSpec(args.command, args.input, args.fixture, args.format, args.output))


if __name__ == "__main__":
    sys.exit(main())
