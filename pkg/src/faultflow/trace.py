"""Execution-trace data model and its line-oriented text format.

A run trace is an ordered stream of call / block / return events plus a
symbol table, produced either by the toy interpreter in
:mod:`faultflow.harness` or by external tooling that emits the same
format.  Parsing is strict: the canonical rendering of an accepted
trace is byte-identical to its input.

Trace grammar (UTF-8, LF endings, space-separated tokens, ``#`` at
column 0 starts a comment line, blank lines are skipped)::

    RUN <run_id> <golden|faulty>
    INJ <function_index> <dynamic_event_index> <bit>    # faulty runs only, before symbols
    FUN <index> <name>                                  # declared in index order 0..N-1
    SRC <index> <file>                                  # optional, after its FUN line
    MAP <index> <hexaddr> <line_start> <line_end>       # optional source-line ranges
    C <index>                                           # call
    B <index> <hexaddr>                                 # basic block executed
    R <index>                                           # return

All symbol lines precede all event lines.  Addresses are lowercase
``0x``-prefixed hex with no superfluous leading zeros.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

GOLDEN = "golden"
FAULTY = "faulty"

CALL = "C"
BLOCK = "B"
RETURN = "R"

_ADDR_RE = re.compile(r"^0x(?:0|[1-9a-f][0-9a-f]*)$")
_RUN_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_NAME_RE = re.compile(r"^\S+$")


class TraceError(Exception):
    """Base class for trace-format and trace-consistency failures."""


class MalformedLineError(TraceError):
    def __init__(self, line_no: int, text: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {text!r}")
        self.line_no = line_no
        self.text = text
        self.reason = reason


class UnknownFunctionError(TraceError):
    def __init__(self, line_no: int, index: int):
        super().__init__(f"line {line_no}: reference to undeclared function index {index}")
        self.line_no = line_no
        self.index = index


class UnbalancedEventsError(TraceError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateHeaderError(TraceError):
    def __init__(self, line_no: int):
        super().__init__(f"line {line_no}: second RUN header")
        self.line_no = line_no


def format_addr(value: int) -> str:
    """Canonical rendering of a block address: lowercase hex, 0x prefix."""
    if value < 0:
        raise ValueError(f"block address must be non-negative, got {value}")
    return hex(value)


def parse_addr(token: str) -> int:
    """Inverse of format_addr; rejects non-canonical spellings."""
    if not _ADDR_RE.match(token):
        raise ValueError(f"not a canonical block address: {token!r}")
    return int(token, 16)


@dataclass(frozen=True, slots=True)
class TraceEvent:
    kind: str  # CALL | BLOCK | RETURN
    function_index: int
    block: int | None = None  # set iff kind == BLOCK


@dataclass(frozen=True, slots=True)
class InjectionSite:
    function_index: int
    dynamic_event_index: int  # position in the golden event stream where the flip fired
    bit: int  # 0..63


@dataclass(slots=True)
class FunctionRecord:
    index: int
    name: str
    source_file: str | None = None
    source_line_map: dict[int, tuple[int, int]] | None = None  # block addr -> (start, end)


@dataclass(slots=True)
class RunTrace:
    run_id: str
    kind: str  # GOLDEN | FAULTY
    injection: InjectionSite | None
    symbols: list[FunctionRecord]
    events: list[TraceEvent]

    def block_event_count(self) -> int:
        return sum(1 for ev in self.events if ev.kind == BLOCK)


@dataclass(frozen=True, slots=True)
class Finding:
    message: str
    event_index: int | None = None


@dataclass(slots=True)
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, message: str, event_index: int | None = None) -> None:
        self.findings.append(Finding(message=message, event_index=event_index))


def _parse_index(token: str, line_no: int, text: str) -> int:
    if not token.isdigit():
        raise MalformedLineError(line_no, text, "expected a non-negative integer")
    return int(token)


def parse_trace(stream) -> RunTrace:
    """Parse trace text into a RunTrace, enforcing all format rules.

    `stream` is an iterable of lines (an open text file works) or a str.
    Raises MalformedLineError, UnknownFunctionError, UnbalancedEventsError,
    or DuplicateHeaderError; on success the result satisfies every
    RunTrace invariant and preserves event order exactly.
    """
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [line.rstrip("\n") for line in stream]

    run_id: str | None = None
    kind: str | None = None
    injection: InjectionSite | None = None
    symbols: list[FunctionRecord] = []
    events: list[TraceEvent] = []
    stack: list[int] = []
    in_events = False
    last_line_no = 0

    def ensure_function(index: int, line_no: int) -> FunctionRecord:
        if index >= len(symbols):
            raise UnknownFunctionError(line_no, index)
        return symbols[index]

    def check_header_complete(line_no: int, text: str) -> None:
        # Fires when the symbol section ends; INJ coherence is decidable here.
        if kind == FAULTY and injection is None:
            raise MalformedLineError(line_no, text, "faulty run is missing its INJ line")
        if injection is not None and injection.function_index >= len(symbols):
            raise UnknownFunctionError(line_no, injection.function_index)

    for line_no, raw in enumerate(lines, start=1):
        last_line_no = line_no
        if not raw.strip():
            continue
        if raw.startswith("#"):
            continue
        tokens = raw.split()
        tag = tokens[0]

        if tag == "RUN":
            if run_id is not None:
                raise DuplicateHeaderError(line_no)
            if len(tokens) != 3:
                raise MalformedLineError(line_no, raw, "RUN takes <run_id> <golden|faulty>")
            if not _RUN_ID_RE.match(tokens[1]):
                raise MalformedLineError(line_no, raw, "run_id must match [A-Za-z0-9_.-]+")
            if tokens[2] not in (GOLDEN, FAULTY):
                raise MalformedLineError(line_no, raw, "run kind must be golden or faulty")
            run_id, kind = tokens[1], tokens[2]
            continue

        if run_id is None:
            raise MalformedLineError(line_no, raw, "first line must be the RUN header")

        if tag == "INJ":
            if kind != FAULTY:
                raise MalformedLineError(line_no, raw, "INJ is only valid on faulty runs")
            if injection is not None:
                raise MalformedLineError(line_no, raw, "duplicate INJ line")
            if symbols or events:
                raise MalformedLineError(line_no, raw, "INJ must precede symbol and event lines")
            if len(tokens) != 4:
                raise MalformedLineError(line_no, raw, "INJ takes <function_index> <dynamic_event_index> <bit>")
            fidx = _parse_index(tokens[1], line_no, raw)
            dyn = _parse_index(tokens[2], line_no, raw)
            bit = _parse_index(tokens[3], line_no, raw)
            if bit > 63:
                raise MalformedLineError(line_no, raw, "bit must be in 0..63")
            injection = InjectionSite(function_index=fidx, dynamic_event_index=dyn, bit=bit)
            continue

        if tag == "FUN":
            if in_events:
                raise MalformedLineError(line_no, raw, "symbol line after first event")
            if len(tokens) != 3:
                raise MalformedLineError(line_no, raw, "FUN takes <index> <name>")
            index = _parse_index(tokens[1], line_no, raw)
            if index != len(symbols):
                raise MalformedLineError(
                    line_no, raw, f"function indices must be declared densely in order (expected {len(symbols)})"
                )
            name = tokens[2]
            if not _NAME_RE.match(name):
                raise MalformedLineError(line_no, raw, "function name must be a non-empty token")
            if any(rec.name == name for rec in symbols):
                raise MalformedLineError(line_no, raw, f"duplicate function name {name!r}")
            symbols.append(FunctionRecord(index=index, name=name))
            continue

        if tag == "SRC":
            if in_events:
                raise MalformedLineError(line_no, raw, "symbol line after first event")
            if len(tokens) != 3:
                raise MalformedLineError(line_no, raw, "SRC takes <index> <file>")
            index = _parse_index(tokens[1], line_no, raw)
            rec = ensure_function(index, line_no)
            if rec.source_file is not None:
                raise MalformedLineError(line_no, raw, "duplicate SRC line for function")
            rec.source_file = tokens[2]
            continue

        if tag == "MAP":
            if in_events:
                raise MalformedLineError(line_no, raw, "symbol line after first event")
            if len(tokens) != 5:
                raise MalformedLineError(line_no, raw, "MAP takes <index> <hexaddr> <line_start> <line_end>")
            index = _parse_index(tokens[1], line_no, raw)
            rec = ensure_function(index, line_no)
            try:
                addr = parse_addr(tokens[2])
            except ValueError as exc:
                raise MalformedLineError(line_no, raw, str(exc)) from None
            start = _parse_index(tokens[3], line_no, raw)
            end = _parse_index(tokens[4], line_no, raw)
            if rec.source_line_map is None:
                rec.source_line_map = {}
            if addr in rec.source_line_map:
                raise MalformedLineError(line_no, raw, "duplicate MAP line for block")
            rec.source_line_map[addr] = (start, end)
            continue

        if tag in (CALL, BLOCK, RETURN):
            if not in_events:
                check_header_complete(line_no, raw)
                in_events = True
            if tag == BLOCK:
                if len(tokens) != 3:
                    raise MalformedLineError(line_no, raw, "B takes <index> <hexaddr>")
            elif len(tokens) != 2:
                raise MalformedLineError(line_no, raw, f"{tag} takes <index>")
            index = _parse_index(tokens[1], line_no, raw)
            ensure_function(index, line_no)

            if tag == CALL:
                stack.append(index)
                events.append(TraceEvent(kind=CALL, function_index=index))
            elif tag == BLOCK:
                try:
                    addr = parse_addr(tokens[2])
                except ValueError as exc:
                    raise MalformedLineError(line_no, raw, str(exc)) from None
                if not stack:
                    raise UnbalancedEventsError(line_no, "Block event with empty call stack")
                if stack[-1] != index:
                    raise UnbalancedEventsError(
                        line_no, f"Block event for function {index} but function {stack[-1]} is on top of the stack"
                    )
                events.append(TraceEvent(kind=BLOCK, function_index=index, block=addr))
            else:
                if not stack:
                    raise UnbalancedEventsError(line_no, "Return without matching Call")
                if stack[-1] != index:
                    raise UnbalancedEventsError(
                        line_no, f"Return from function {index} but function {stack[-1]} is on top of the stack"
                    )
                stack.pop()
                events.append(TraceEvent(kind=RETURN, function_index=index))
            continue

        raise MalformedLineError(line_no, raw, f"unknown line tag {tag!r}")

    if run_id is None:
        raise MalformedLineError(last_line_no or 1, "", "missing RUN header")
    if not in_events:
        # Traces with no events are accepted only if the header is coherent.
        check_header_complete(last_line_no or 1, "<end of stream>")
    if stack:
        raise UnbalancedEventsError(last_line_no, f"call stack not empty at end of stream ({len(stack)} open frames)")

    return RunTrace(run_id=run_id, kind=kind, injection=injection, symbols=symbols, events=events)


def render_trace(run: RunTrace) -> str:
    """Canonical text rendering; inverse of parse_trace for canonical input."""
    out: list[str] = [f"RUN {run.run_id} {run.kind}"]
    if run.injection is not None:
        inj = run.injection
        out.append(f"INJ {inj.function_index} {inj.dynamic_event_index} {inj.bit}")
    for rec in run.symbols:
        out.append(f"FUN {rec.index} {rec.name}")
        if rec.source_file is not None:
            out.append(f"SRC {rec.index} {rec.source_file}")
        if rec.source_line_map:
            for addr in sorted(rec.source_line_map):
                start, end = rec.source_line_map[addr]
                out.append(f"MAP {rec.index} {format_addr(addr)} {start} {end}")
    for ev in run.events:
        if ev.kind == BLOCK:
            out.append(f"B {ev.function_index} {format_addr(ev.block)}")
        elif ev.kind == CALL:
            out.append(f"C {ev.function_index}")
        else:
            out.append(f"R {ev.function_index}")
    return "\n".join(out) + "\n"


def validate_run(run: RunTrace) -> ValidationReport:
    """Check every RunTrace invariant; reports findings, never raises."""
    report = ValidationReport()

    if run.kind not in (GOLDEN, FAULTY):
        report.add(f"unknown run kind {run.kind!r}")
    if run.kind == GOLDEN and run.injection is not None:
        report.add("injection on golden run")
    if run.kind == FAULTY and run.injection is None:
        report.add("faulty run without injection site")
    if run.injection is not None:
        if not 0 <= run.injection.bit <= 63:
            report.add(f"injection bit {run.injection.bit} outside 0..63")
        if run.injection.function_index >= len(run.symbols) or run.injection.function_index < 0:
            report.add(f"injection references unknown function index {run.injection.function_index}")

    seen_names: set[str] = set()
    for pos, rec in enumerate(run.symbols):
        if rec.index != pos:
            report.add(f"function record at position {pos} has index {rec.index} (indices must be dense)")
        if rec.name in seen_names:
            report.add(f"duplicate function name {rec.name!r}")
        seen_names.add(rec.name)

    n_functions = len(run.symbols)
    stack: list[int] = []
    for i, ev in enumerate(run.events):
        if ev.function_index < 0 or ev.function_index >= n_functions:
            report.add(f"event references unknown function index {ev.function_index}", event_index=i)
            continue
        if ev.kind == CALL:
            if ev.block is not None:
                report.add("Call event carries a block address", event_index=i)
            stack.append(ev.function_index)
        elif ev.kind == BLOCK:
            if ev.block is None:
                report.add("Block event without block address", event_index=i)
            if not stack:
                report.add("Block event with empty call stack", event_index=i)
            elif stack[-1] != ev.function_index:
                report.add(
                    f"Block event for function {ev.function_index} but {stack[-1]} is on top of the stack",
                    event_index=i,
                )
        elif ev.kind == RETURN:
            if ev.block is not None:
                report.add("Return event carries a block address", event_index=i)
            if not stack:
                report.add("Return without matching Call", event_index=i)
            elif stack[-1] != ev.function_index:
                report.add(
                    f"Return from function {ev.function_index} but {stack[-1]} is on top of the stack",
                    event_index=i,
                )
            else:
                stack.pop()
        else:
            report.add(f"unknown event kind {ev.kind!r}", event_index=i)
    if stack:
        report.add(f"call stack not empty at end of trace ({len(stack)} open frames)", event_index=len(run.events) - 1)

    return report


def symbols_to_json(symbols: list[FunctionRecord]) -> list[dict]:
    out = []
    for rec in symbols:
        entry: dict = {"index": rec.index, "name": rec.name, "source_file": rec.source_file}
        if rec.source_line_map:
            entry["source_line_map"] = {
                format_addr(addr): [start, end] for addr, (start, end) in sorted(rec.source_line_map.items())
            }
        else:
            entry["source_line_map"] = None
        out.append(entry)
    return out


def symbols_from_json(data: list[dict]) -> list[FunctionRecord]:
    symbols = []
    for entry in data:
        line_map = None
        if entry.get("source_line_map"):
            line_map = {
                parse_addr(addr): (int(rng[0]), int(rng[1])) for addr, rng in entry["source_line_map"].items()
            }
        symbols.append(
            FunctionRecord(
                index=int(entry["index"]),
                name=entry["name"],
                source_file=entry.get("source_file"),
                source_line_map=line_map,
            )
        )
    return symbols


def run_to_json(run: RunTrace) -> dict:
    events = []
    for ev in run.events:
        if ev.kind == BLOCK:
            events.append([ev.kind, ev.function_index, format_addr(ev.block)])
        else:
            events.append([ev.kind, ev.function_index])
    injection = None
    if run.injection is not None:
        injection = {
            "function_index": run.injection.function_index,
            "dynamic_event_index": run.injection.dynamic_event_index,
            "bit": run.injection.bit,
        }
    return {
        "run_id": run.run_id,
        "kind": run.kind,
        "injection": injection,
        "symbols": symbols_to_json(run.symbols),
        "events": events,
    }


def run_from_json(data: dict) -> RunTrace:
    events = []
    for item in data["events"]:
        if item[0] == BLOCK:
            events.append(TraceEvent(kind=BLOCK, function_index=int(item[1]), block=parse_addr(item[2])))
        else:
            events.append(TraceEvent(kind=item[0], function_index=int(item[1])))
    injection = None
    if data.get("injection") is not None:
        inj = data["injection"]
        injection = InjectionSite(
            function_index=int(inj["function_index"]),
            dynamic_event_index=int(inj["dynamic_event_index"]),
            bit=int(inj["bit"]),
        )
    return RunTrace(
        run_id=data["run_id"],
        kind=data["kind"],
        injection=injection,
        symbols=symbols_from_json(data["symbols"]),
        events=events,
    )
