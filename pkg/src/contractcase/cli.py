"""Command-line front end.

The CLI is a thin client of the HTTP service: it reads local files, sends
their contents to the API (an in-process instance by default, or a remote
one via --server), and renders the response. Exit codes: 0 no error
findings, 1 error findings, 2 usage or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import httpx

from .dsl import load_source
from .reporting import render_findings

_COLOR_CODES = {"error": "\033[31m", "warning": "\033[33m", "info": "\033[36m"}
_RESET = "\033[0m"
_SEVERITY_RE = re.compile(r"\b(error|warning|info)(?= [A-Z]\d+[:,]?)")


def _what_if_pair(value: str) -> tuple[str, str]:
    key, sep, token = value.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {value!r}")
    return key, token


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractcase",
        description="Check contract-based specification structures, generate modular "
        "risk checklists, analyze assurance cases, and propagate confidence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("-o", "--output", metavar="PATH", help="write output to PATH instead of stdout")
        p.add_argument("--coarse", action="store_true", help="attach all component assumptions to every contract")
        p.add_argument("--tolerate-cycles", action="store_true", help="downgrade cycle findings to warnings")
        p.add_argument("--allow-multi-discharge", action="store_true", help="downgrade multiple discharge to a warning")
        p.add_argument("--server", metavar="URL", help="use a remote service instead of the in-process one")

    p = sub.add_parser("check", help="parse and validate a specification")
    p.add_argument("spec")
    common(p)

    p = sub.add_parser("risks", help="print the risk checklist and register coverage")
    p.add_argument("spec")
    p.add_argument("--register", metavar="PATH")
    common(p)

    p = sub.add_parser("case", help="check the assurance case set structurally")
    p.add_argument("spec")
    p.add_argument("cases", help="directory of case files (*.json)")
    p.add_argument("--register", metavar="PATH")
    common(p)

    p = sub.add_parser("confidence", help="propagate confidence from an assessment")
    p.add_argument("spec")
    p.add_argument("cases", help="directory of case files (*.json)")
    p.add_argument("assessment", nargs="?", help="assessment file (defaults to empty)")
    p.add_argument("--what-if", metavar="KEY=VALUE", type=_what_if_pair, action="append", default=[])
    p.add_argument("--weakest", metavar="QID", help="list leaves gating this guarantee")
    common(p)

    p = sub.add_parser("export-dot", help="emit the structure as a Graphviz digraph")
    p.add_argument("spec")
    p.add_argument("--by-component", action="store_true", help="aggregate boxes per component")
    common(p)

    p = sub.add_parser("report", help="emit the combined report")
    p.add_argument("spec")
    p.add_argument("--cases", metavar="DIR")
    p.add_argument("--assessment", metavar="PATH")
    p.add_argument("--register", metavar="PATH")
    common(p)

    return parser


def _color_mode() -> str:
    mode = os.environ.get("CONTRACTCASE_COLOR", "auto")
    return mode if mode in ("auto", "always", "never") else "auto"


def _colorize(text: str) -> str:
    return _SEVERITY_RE.sub(lambda m: f"{_COLOR_CODES[m.group(1)]}{m.group(1)}{_RESET}", text)


class _Inputs:
    """Reads local files and converts them to request payload entries."""

    def __init__(self) -> None:
        self.decode_failures: list = []

    def named_text(self, path: str) -> dict | None:
        source, diags = load_source(path)
        if source is None:
            self.decode_failures += diags
            return None
        return {"name": source.path, "text": source.content}

    def case_dir(self, path: str) -> list[dict] | None:
        directory = Path(path)
        if not directory.is_dir():
            raise OSError(f"not a directory: {path}")
        texts = []
        for file in sorted(directory.glob("*.json")):
            named = self.named_text(str(file))
            if named is not None:
                texts.append(named)
        return texts


def _build_request(args: argparse.Namespace, inputs: _Inputs) -> tuple[str, dict]:
    options = {
        "coarse": args.coarse,
        "tolerate_cycles": args.tolerate_cycles,
        "allow_multi_discharge": args.allow_multi_discharge,
    }
    body: dict = {"spec": inputs.named_text(args.spec), "options": options}
    if args.command == "check":
        return "/v1/check", body
    if args.command == "risks":
        if args.register:
            body["risk_register"] = inputs.named_text(args.register)
        return "/v1/risks", body
    if args.command == "case":
        body["cases"] = inputs.case_dir(args.cases)
        if args.register:
            body["risk_register"] = inputs.named_text(args.register)
        return "/v1/case", body
    if args.command == "confidence":
        body["cases"] = inputs.case_dir(args.cases)
        if args.assessment:
            body["assessment"] = inputs.named_text(args.assessment)
        if args.what_if:
            body["what_if"] = dict(args.what_if)
        if args.weakest:
            body["weakest"] = args.weakest
        return "/v1/confidence", body
    if args.command == "export-dot":
        body["by_component"] = args.by_component
        return "/v1/export-dot", body
    if args.command == "report":
        if args.cases:
            body["cases"] = inputs.case_dir(args.cases)
        if args.assessment:
            body["assessment"] = inputs.named_text(args.assessment)
        if args.register:
            body["risk_register"] = inputs.named_text(args.register)
        return "/v1/report", body
    raise AssertionError(f"unhandled command {args.command}")


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=60.0)
    import warnings

    with warnings.catch_warnings():
        # Some starlette builds warn on importing their own test client.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _emit(args: argparse.Namespace, data: dict) -> None:
    if args.format == "json":
        output = json.dumps(data["payload"], indent=2, sort_keys=True) + "\n"
    else:
        output = data["text"]
        mode = _color_mode()
        if args.output is None and (mode == "always" or (mode == "auto" and sys.stdout.isatty())):
            output = _colorize(output)
    if args.output is not None:
        Path(args.output).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = _Inputs()
    try:
        path, body = _build_request(args, inputs)
    except OSError as exc:
        print(f"contractcase: {exc}", file=sys.stderr)
        return 2
    if inputs.decode_failures:
        sys.stdout.write("\n".join(render_findings(inputs.decode_failures)) + "\n")
        return 1
    try:
        with _make_client(args.server) as client:
            response = client.post(path, json=body)
    except httpx.HTTPError as exc:
        print(f"contractcase: service request failed: {exc}", file=sys.stderr)
        return 2
    if response.status_code != 200:
        print(f"contractcase: service returned HTTP {response.status_code}", file=sys.stderr)
        return 2
    data = response.json()
    try:
        _emit(args, data)
    except OSError as exc:
        print(f"contractcase: {exc}", file=sys.stderr)
        return 2
    return int(data["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
