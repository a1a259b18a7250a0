"""Command-line front end: ``leonard-lab verify`` and ``leonard-lab search``.

Exit codes: 0 all selected checks pass, 1 some check failed,
2 the input could not be parsed or validated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import LeonardLabError
from .leonard import (
    BASIS_TAGS,
    SEARCH_MAX_D,
    LeonardPairMatrices,
    ParameterArray,
    build_split_form,
    krawtchouk_pair,
    search_parameter_arrays,
)
from .linalg import ExactMatrix
from .report import CHECK_NAMES, VerificationReport
from .scalar import FieldSpec
from .theorems import verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILIES = ("krawtchouk",)


class InputError(Exception):
    """Bad input; the message names the offending field."""


@dataclass
class SubjectSpec:
    field: FieldSpec
    kind: str  # family | matrices | parameter_array
    payload: dict

    def describe(self) -> str:
        if self.kind == "family":
            return f"{self.payload['name']} family, d={self.payload['d']}, field {self.field}"
        if self.kind == "matrices":
            return f"matrix pair ({self.payload.get('basis_tag', 'other')}), field {self.field}"
        return f"parameter array, d={len(self.payload['theta']) - 1}, field {self.field}"

    def build(self) -> LeonardPairMatrices:
        try:
            if self.kind == "family":
                name, d = self.payload.get("name"), self.payload.get("d")
                if name not in FAMILIES:
                    raise InputError(f"subject.family.name: unknown family {name!r}")
                if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                    raise InputError(f"subject.family.d: expected a positive integer, got {d!r}")
                return krawtchouk_pair(d, self.field)
            if self.kind == "matrices":
                tag = self.payload.get("basis_tag", "other")
                if tag not in BASIS_TAGS:
                    raise InputError(f"subject.matrices.basis_tag: unknown tag {tag!r}")
                mats = {}
                for key in ("A", "A_star"):
                    rows = self.payload.get(key)
                    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
                        raise InputError(f"subject.matrices.{key}: expected a square array of scalar strings")
                    try:
                        mats[key] = ExactMatrix(self.field, rows)
                    except ValueError as exc:
                        raise InputError(f"subject.matrices.{key}: {exc}") from None
                try:
                    return LeonardPairMatrices(tag, mats["A"], mats["A_star"])
                except ValueError as exc:
                    raise InputError(f"subject.matrices: {exc}") from None
            for key in ("theta", "theta_star", "first_split", "second_split"):
                if not isinstance(self.payload.get(key), list):
                    raise InputError(f"subject.parameter_array.{key}: expected a list of scalar strings")
            pa = ParameterArray.from_json(self.field, self.payload)
            return build_split_form(pa, "first")
        except InputError:
            raise
        except LeonardLabError as exc:
            raise InputError(f"subject.{self.kind}: {type(exc).__name__}: {exc}") from None


def parse_subject(obj) -> SubjectSpec:
    if not isinstance(obj, dict):
        raise InputError("subject spec must be a JSON object")
    if "field" not in obj:
        raise InputError("field: missing field declaration")
    try:
        field = FieldSpec.from_json(obj)
    except LeonardLabError as exc:
        raise InputError(f"field: {exc}") from None
    subject = obj.get("subject")
    if not isinstance(subject, dict):
        raise InputError("subject: missing subject object")
    kinds = [k for k in ("family", "matrices", "parameter_array") if k in subject]
    if len(kinds) != 1 or len(subject) != 1:
        raise InputError("subject: exactly one of family, matrices, parameter_array is required")
    payload = subject[kinds[0]]
    if not isinstance(payload, dict):
        raise InputError(f"subject.{kinds[0]}: expected an object")
    return SubjectSpec(field, kinds[0], payload)


def subject_to_json(field: FieldSpec, kind: str, payload: dict) -> dict:
    out = field.to_json()
    out["subject"] = {kind: payload}
    return out


def _parse_checks(text: str | None) -> list[str] | None:
    if not text:
        return None
    names = [n.strip() for n in text.split(",") if n.strip()]
    unknown = [n for n in names if n not in CHECK_NAMES]
    if unknown:
        raise InputError(f"--checks: unknown check name(s) {', '.join(unknown)}")
    return names


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_verify(subjects: list[SubjectSpec], report_format: str = "text", checks=None, batch=False):
    """Verify each subject; returns (exit status, rendered report)."""
    pairs = [(s, s.build()) for s in subjects]  # InputError propagates before any work
    reports: list[VerificationReport] = []
    for spec, pair in pairs:
        rep = verify_all(pair, subject=spec.describe())
        if checks:
            rep = rep.filtered(["leonard_pair", *checks])
        reports.append(rep)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if report_format == "json":
        body = [r.to_json() for r in reports] if batch else reports[0].to_json()
        return status, json.dumps(body, indent=2) + "\n"
    return status, "\n\n".join(r.to_text() for r in reports) + "\n"


def _cmd_verify(args) -> int:
    try:
        checks = _parse_checks(args.checks)
        if args.input and args.family:
            raise InputError("--input and --family are mutually exclusive")
        if args.input:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    doc = json.load(fh)
            except OSError as exc:
                raise InputError(f"--input: {exc}") from None
            except json.JSONDecodeError as exc:
                raise InputError(f"--input: invalid JSON ({exc})") from None
            batch = isinstance(doc, list)
            subjects = [parse_subject(o) for o in (doc if batch else [doc])]
            if args.field:
                override = _field_arg(args.field)
                if any(s.field != override for s in subjects):
                    raise InputError("--field: disagrees with the field declared in the input")
        elif args.family:
            if args.d is None:
                raise InputError("--d: required with --family")
            field = _field_arg(args.field or "Q")
            subjects = [SubjectSpec(field, "family", {"name": args.family, "d": args.d})]
            batch = False
        else:
            raise InputError("one of --input or --family is required")
        status, text = run_verify(subjects, args.report, checks, batch)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, args.out)
    return status


def _field_arg(text: str) -> FieldSpec:
    try:
        return FieldSpec.from_cli(text)
    except LeonardLabError as exc:
        raise InputError(f"--field: {exc}") from None


def run_search(d: int, field: FieldSpec, limit: int) -> list[dict]:
    """Search and return subject specs, one per parameter array, ready for ``verify --input``."""
    if not field.is_prime_field:
        raise InputError("--field: search requires a prime field p=<prime>")
    if not 1 <= d <= SEARCH_MAX_D:
        raise InputError(f"--d: search supports 1 <= d <= {SEARCH_MAX_D}")
    if limit < 0:
        raise InputError("--limit: must be nonnegative")
    arrays = search_parameter_arrays(d, field, limit)
    return [subject_to_json(field, "parameter_array", pa.to_json()) for pa in arrays]


def _cmd_search(args) -> int:
    try:
        field = _field_arg(args.field)
        out = run_search(args.d, field, args.limit)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leonard-lab", description="Exact checks on the commutator of a Leonard pair.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify a Leonard pair and every commutator identity")
    v.add_argument("--input", help="JSON subject spec (or a JSON array of them)")
    v.add_argument("--family", choices=FAMILIES, help="built-in family")
    v.add_argument("--d", type=int, help="diameter d (dimension d+1) for --family")
    v.add_argument("--field", help="Q or p=<prime>")
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--checks", help="comma-separated check names to report")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("search", help="enumerate parameter arrays over a prime field")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--field", required=True, help="p=<prime>")
    s.add_argument("--limit", type=int, default=10)
    s.add_argument("--out", help="output JSON file (default stdout)")
    s.set_defaults(func=_cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
