"""Command-line client for the operator laboratory.

Thin by construction: every subcommand builds a request model, hands it to
the same handler the HTTP service uses (in process by default, over the wire
with --server), and prints the response JSON. All numbers in a report are
reproducible by calling the core operations directly with the same inputs;
output bytes are identical across runs for identical inputs and seed.

Exit codes: 0 success, 1 verify-suite failure, 2 invalid input,
3 hypothesis violation (symbol not a strict self-map), 4 analytic verdict
and matrix oracle disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import httpx
import numpy as np
from pydantic import ValidationError

from . import __version__
from .api import handle_check, handle_classify, handle_matrix, handle_spectrum, handle_verify
from .matrixio import dumps_matrix
from .operators import OperatorMatrix
from .schemas import (
    CheckRequest,
    ClassificationModel,
    ClassifyRequest,
    MatrixRequest,
    MatrixResponse,
    RunReport,
    SpectrumAudit,
    SpectrumRequest,
    VerifyReport,
    VerifyRequest,
    parse_function_spec,
)
from .series import NotExpandableError, SelfMapError
from .suite import SUITE_GROUPS

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_HYPOTHESIS = 3
EXIT_INCONSISTENT = 4

_RESPONSE_MODELS = {
    "matrix": MatrixResponse,
    "check": RunReport,
    "classify": ClassificationModel,
    "spectrum": SpectrumAudit,
    "verify": VerifyReport,
}
_HANDLERS = {
    "matrix": handle_matrix,
    "check": handle_check,
    "classify": handle_classify,
    "spectrum": handle_spectrum,
    "verify": handle_verify,
}


def _load_spec_arg(value: str):
    """A function spec given inline as JSON, as a file path, or '-' for stdin."""
    if value == "-":
        raw = json.load(sys.stdin)
    elif value.lstrip().startswith("{"):
        raw = json.loads(value)
    else:
        raw = json.loads(Path(value).read_text(encoding="utf-8"))
    return parse_function_spec(raw)


def _parse_complex_arg(value: str):
    """Complex CLI flags use the wire encoding: a number or a [re, im] pair."""
    raw = json.loads(value)
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return (float(raw), 0.0)
    if isinstance(raw, list) and len(raw) == 2:
        return (float(raw[0]), float(raw[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def _add_common(parser):
    parser.add_argument("--trunc", type=int, default=128, help="matrix truncation N")
    parser.add_argument(
        "--tol-entrywise", type=float, default=1e-9, help="tolerance for entrywise checks"
    )
    parser.add_argument(
        "--tol-product", type=float, default=1e-6, help="tolerance for product checks"
    )
    parser.add_argument("--seed", type=int, default=42, help="seed for randomized instances")
    parser.add_argument("--out", type=Path, default=None, help="write the report here")
    parser.add_argument(
        "--format", choices=("json", "csv"), default=None, help="output format"
    )
    parser.add_argument(
        "--server", default=None, help="base URL of a running service; default is in-process"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardylab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hardylab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_matrix = sub.add_parser("matrix", help="build and export an operator matrix")
    p_matrix.add_argument("--u", required=True, help="weight spec (JSON, file, or -)")
    p_matrix.add_argument("--phi", required=True, help="symbol spec (JSON, file, or -)")
    p_matrix.add_argument("--m", type=int, default=1, help="derivative order")
    _add_common(p_matrix)

    p_check = sub.add_parser("check", help="run all operator class checks")
    p_check.add_argument("--u", required=True)
    p_check.add_argument("--phi", required=True)
    p_check.add_argument("--lam", default="1", help="conjugation scale, number or [re,im]")
    p_check.add_argument("--alpha", default="1", help="conjugation twist, number or [re,im]")
    p_check.add_argument(
        "--timings", action="store_true", help="attach wall-clock timings to the report"
    )
    _add_common(p_check)

    p_classify = sub.add_parser("classify", help="analytic classification with oracle cross-check")
    p_classify.add_argument("--u", required=True)
    p_classify.add_argument("--phi", required=True)
    p_classify.add_argument("--lam", default="1")
    p_classify.add_argument("--alpha", default="1")
    _add_common(p_classify)

    p_spectrum = sub.add_parser("spectrum", help="diagonal-family spectrum and norm audit")
    p_spectrum.add_argument("--a", type=float, default=1.0)
    p_spectrum.add_argument("--c", type=float, required=True)
    _add_common(p_spectrum)

    p_verify = sub.add_parser("verify", help="run the full regression suite")
    p_verify.add_argument(
        "--skip",
        action="append",
        default=[],
        choices=SUITE_GROUPS,
        help="skip a check group (repeatable)",
    )
    _add_common(p_verify)

    return parser


def _build_request(args):
    if args.command == "matrix":
        return MatrixRequest(
            u=_load_spec_arg(args.u),
            phi=_load_spec_arg(args.phi),
            m=args.m,
            trunc=args.trunc,
        )
    if args.command in ("check", "classify"):
        model = CheckRequest if args.command == "check" else ClassifyRequest
        return model(
            u=_load_spec_arg(args.u),
            phi=_load_spec_arg(args.phi),
            lam=_parse_complex_arg(args.lam),
            alpha=_parse_complex_arg(args.alpha),
            trunc=args.trunc,
            tol_entrywise=args.tol_entrywise,
            tol_product=args.tol_product,
        )
    if args.command == "spectrum":
        return SpectrumRequest(a=args.a, c=args.c, trunc=args.trunc)
    if args.command == "verify":
        return VerifyRequest(
            trunc=args.trunc,
            seed=args.seed,
            skip=args.skip,
            tol_entrywise=args.tol_entrywise,
            tol_product=args.tol_product,
        )
    raise ValueError(f"unknown command {args.command!r}")


def _run_remote(server: str, command: str, request, client=None):
    """POST the request to a running service and revalidate the response."""
    own = client is None
    client = client or httpx.Client(base_url=server, timeout=600.0)
    try:
        response = client.post(f"/{command}", json=json.loads(request.model_dump_json()))
    finally:
        if own:
            client.close()
    if response.status_code != 200:
        detail = response.json()
        kind = detail.get("error", "invalid_input") if isinstance(detail, dict) else "invalid_input"
        message = detail.get("message", str(detail)) if isinstance(detail, dict) else str(detail)
        if kind == "hypothesis_violation":
            raise SelfMapError(message)
        raise ValueError(message)
    return _RESPONSE_MODELS[command].model_validate(response.json())


def _matrix_from_response(resp: MatrixResponse) -> OperatorMatrix:
    entries = np.array(
        [[complex(re, im) for (re, im) in row] for row in resp.entries],
        dtype=np.complex128,
    )
    meta = {
        "u_spec": resp.u_spec,
        "phi_spec": resp.phi_spec,
        "m": resp.m,
        "phi_sup_norm": resp.phi_sup_norm,
    }
    return OperatorMatrix(entries=entries, meta=meta)


def _emit(text: str, out: Path | None):
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _spectrum_csv(audit: SpectrumAudit) -> str:
    lines = ["n,re,im"]
    for n, value in enumerate(audit.entries):
        lines.append(f"{n},{value!r},{0.0!r}")
    return "\n".join(lines) + "\n"


def _render(args, response) -> tuple[str, int]:
    if args.command == "matrix":
        fmt = args.format or "csv"
        if fmt == "csv":
            return dumps_matrix(_matrix_from_response(response)), EXIT_OK
        return response.model_dump_json(indent=2), EXIT_OK
    if args.command == "spectrum":
        if args.format == "csv":
            return _spectrum_csv(response), EXIT_OK
        return response.model_dump_json(indent=2), EXIT_OK
    if args.command in ("check", "classify"):
        code = EXIT_OK if response.consistent else EXIT_INCONSISTENT
        return response.model_dump_json(indent=2), code
    if args.command == "verify":
        for check in response.checks:
            marker = {"passed": "pass", "skipped": "skip"}.get(check.status, "FAIL")
            print(f"[{marker:>4}] {check.name} ({check.status})", file=sys.stderr)
        code = EXIT_OK if response.passed else EXIT_SUITE_FAILURE
        return response.model_dump_json(indent=2), code
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        request = _build_request(args)
        if args.server:
            response = _run_remote(args.server, args.command, request)
        else:
            started = time.perf_counter()
            response = _HANDLERS[args.command](request)
            elapsed = time.perf_counter() - started
            if getattr(args, "timings", False) and isinstance(response, RunReport):
                response = response.model_copy(update={"timings": {"total_s": elapsed}})
    except SelfMapError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NotExpandableError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ValidationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    text, code = _render(args, response)
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
