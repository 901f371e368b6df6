"""
Report - the JSON envelope every CLI command prints, and its checker

Envelope:

    {
      "command":   "solve",                       subcommand name
      "input":     {"path": ..., "n": 5, "m": 4, "format": "graph6"} or {}
      "result":    {...}                           command-specific payload
      "timing_s":  0.0123,
      "version":   "1.0.0",
      "exit_code": 0
    }

Exit codes:

    0   success                    64  usage error
    1   other failure              65  parse error
    2   hypothesis failed          70  internal invariant failed
    3   budget exceeded            74  I/O error
    4   sweep found violations
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_HYPOTHESIS = 2
EXIT_BUDGET = 3
EXIT_VIOLATIONS = 4
EXIT_USAGE = 64
EXIT_PARSE = 65
EXIT_INTERNAL = 70
EXIT_IO = 74

EXIT_CODES = {
    EXIT_OK: "ok",
    EXIT_FAILURE: "failure",
    EXIT_HYPOTHESIS: "hypothesis violated",
    EXIT_BUDGET: "budget exceeded",
    EXIT_VIOLATIONS: "bound violations found",
    EXIT_USAGE: "usage error",
    EXIT_PARSE: "parse error",
    EXIT_INTERNAL: "internal invariant failed",
    EXIT_IO: "I/O error",
}

COMMANDS = (
    "verify", "solve", "construct", "twins", "family",
    "enum", "sweep", "convert", "check-report",
)

REQUIRED_KEYS = {
    "command": str,
    "input": dict,
    "result": dict,
    "timing_s": (int, float),
    "version": str,
    "exit_code": int,
}

# keys each command's result must carry when it succeeded
RESULT_KEYS: Dict[str, tuple] = {
    "verify": ("valid", "verdict"),
    "solve": ("value", "witness"),
    "construct": ("witness", "size", "fallback_count", "trace"),
    "twins": ("twins", "leaves", "supports"),
    "family": ("kind", "n", "witness", "claimed", "verified"),
    "enum": ("count",),
    "sweep": ("summary",),
    "convert": ("written",),
    "check-report": ("problems",),
}


@dataclass
class Report:
    command: str
    input: Dict[str, Any] = field(default_factory=dict)
    result: Dict[str, Any] = field(default_factory=dict)
    timing_s: float = 0.0
    version: str = ""
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "timing_s": round(self.timing_s, 6),
            "version": self.version,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def check_report(data: Any) -> List[str]:
    """Return the schema problems of a decoded report (empty when valid)."""
    problems: List[str] = []
    if not isinstance(data, dict):
        return ["report is not a JSON object"]
    for key, kind in REQUIRED_KEYS.items():
        if key not in data:
            problems.append(f"missing key {key!r}")
        elif not isinstance(data[key], kind) or isinstance(data[key], bool):
            problems.append(f"key {key!r} has type {type(data[key]).__name__}")
    extra = sorted(set(data) - set(REQUIRED_KEYS))
    if extra:
        problems.append(f"unexpected keys {extra}")
    if problems:
        return problems

    if data["command"] not in COMMANDS:
        problems.append(f"unknown command {data['command']!r}")
    if data["exit_code"] not in EXIT_CODES:
        problems.append(f"undocumented exit code {data['exit_code']}")
    if data["timing_s"] < 0:
        problems.append("negative timing")
    result = data["result"]
    if data["exit_code"] in (EXIT_OK, EXIT_VIOLATIONS):
        for key in RESULT_KEYS.get(data["command"], ()):
            if key not in result:
                problems.append(f"result of {data['command']!r} lacks {key!r}")
    elif "error" not in result:
        problems.append("failed report lacks result.error")
    return problems


def check_report_text(text: str) -> List[str]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return [f"not JSON: {exc.msg} at line {exc.lineno}"]
    return check_report(data)


def error_result(message: str, kind: str, **extra: Any) -> Dict[str, Any]:
    out: Dict[str, Any] = {"error": message, "error_kind": kind}
    out.update({k: v for k, v in extra.items() if v is not None})
    return out
