"""Deterministic interpreter for toy programs, with single-bit-flip injection.

Execution is a pure function of (program, inputs, fault): identical
arguments yield byte-identical traces and outputs.  A fault fires just
before the chosen dynamic Block event executes, flipping one bit of one
register in the frame that owns that block.  Abnormal termination
(step-limit) unwinds the call stack with synthetic Return events so
every emitted trace still passes validate_run.
"""

from __future__ import annotations

from dataclasses import dataclass

from faultflow.harness.program import MASK64, ToyProgram
from faultflow.trace import (
    BLOCK,
    CALL,
    FAULTY,
    GOLDEN,
    RETURN,
    InjectionSite,
    FunctionRecord,
    RunTrace,
    TraceEvent,
)

DEFAULT_STEP_LIMIT = 10_000_000

TERMINATION_NORMAL = "normal"
TERMINATION_STEP_LIMIT = "step_limit"

BENIGN = "benign"
SDC = "sdc"
CRASH = "crash"


class StepLimitExceededError(Exception):
    def __init__(self, limit: int):
        super().__init__(f"execution exceeded the step limit of {limit} events")
        self.limit = limit


class FaultNotReachedError(Exception):
    def __init__(self, index: int, available: int):
        super().__init__(
            f"fault index {index} is beyond the golden trace's {available} Block events"
        )
        self.index = index
        self.available = available


@dataclass(frozen=True, slots=True)
class FaultSpec:
    dynamic_event_index: int  # n-th Block event of the golden trace (0-based)
    target_register: int
    bit: int  # 0..63


@dataclass(slots=True)
class OutcomeRecord:
    run_id: str
    classification: str  # BENIGN | SDC | CRASH
    faulty_output: list[int] | None
    events_executed: int


def _symbols_for(program: ToyProgram) -> list[FunctionRecord]:
    return [FunctionRecord(index=fn.index, name=fn.name) for fn in program.functions]


class _Frame:
    __slots__ = ("fn", "regs", "blocks", "resume")

    def __init__(self, fn, regs, resume):
        self.fn = fn
        self.regs = regs
        self.blocks = fn.block_map()
        self.resume = resume  # block address the caller continues at, None for entry


def _run(program: ToyProgram, inputs, fault: FaultSpec | None, step_limit: int):
    """Shared interpreter core.

    Returns (events, outputs, termination, fired_site) where fired_site is
    the InjectionSite populated when the fault fired (None otherwise).
    """
    entry_fn = program.functions[program.entry]
    regs = [0] * entry_fn.registers
    for i, value in enumerate(inputs[: entry_fn.registers]):
        regs[i] = value & MASK64

    events: list[TraceEvent] = []
    outputs: list[int] = []
    stack = [_Frame(entry_fn, regs, None)]
    events.append(TraceEvent(kind=CALL, function_index=entry_fn.index))

    block_ordinal = 0  # counts Block events, the fault's addressing space
    fired: InjectionSite | None = None
    current = entry_fn.blocks[0].address
    termination = TERMINATION_NORMAL

    while stack:
        frame = stack[-1]
        if len(events) >= step_limit:
            termination = TERMINATION_STEP_LIMIT
            break
        block = frame.blocks[current]
        events.append(TraceEvent(kind=BLOCK, function_index=frame.fn.index, block=current))

        if fault is not None and fired is None and block_ordinal == fault.dynamic_event_index:
            if not 0 <= fault.target_register < frame.fn.registers:
                raise ValueError(
                    f"fault targets register {fault.target_register} but function "
                    f"{frame.fn.name!r} declares {frame.fn.registers}"
                )
            frame.regs[fault.target_register] ^= 1 << fault.bit
            fired = InjectionSite(
                function_index=frame.fn.index,
                dynamic_event_index=len(events) - 1,
                bit=fault.bit,
            )
        block_ordinal += 1

        r = frame.regs
        for instr in block.instructions:
            op = instr.op
            a = instr.args
            if op == "const":
                r[a[0]] = a[1]
            elif op == "add":
                r[a[0]] = (r[a[1]] + r[a[2]]) & MASK64
            elif op == "sub":
                r[a[0]] = (r[a[1]] - r[a[2]]) & MASK64
            elif op == "mul":
                r[a[0]] = (r[a[1]] * r[a[2]]) & MASK64
            elif op == "cmp":
                r[a[0]] = 1 if r[a[1]] < r[a[2]] else 0
            else:  # out
                outputs.append(r[a[0]])

        term = block.terminator
        op = term.op
        if op == "jmp":
            current = term.args[0]
        elif op == "br":
            current = term.args[1] if r[term.args[0]] else term.args[2]
        elif op == "call":
            callee = program.function_named(term.args[0])
            frame.resume = term.args[1]
            callee_regs = [0] * callee.registers
            shared = min(len(r), callee.registers)
            callee_regs[:shared] = r[:shared]
            stack.append(_Frame(callee, callee_regs, None))
            events.append(TraceEvent(kind=CALL, function_index=callee.index))
            current = callee.blocks[0].address
        else:  # ret
            events.append(TraceEvent(kind=RETURN, function_index=frame.fn.index))
            stack.pop()
            if stack:
                caller = stack[-1]
                if caller.fn.registers >= 1 and frame.fn.registers >= 1:
                    caller.regs[0] = frame.regs[0]
                current = caller.resume

    if termination == TERMINATION_STEP_LIMIT:
        # Balance the trace so it still validates.
        while stack:
            frame = stack.pop()
            events.append(TraceEvent(kind=RETURN, function_index=frame.fn.index))

    return events, outputs, termination, fired


def execute(
    program: ToyProgram,
    inputs: list[int],
    run_id: str = "golden",
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> tuple[RunTrace, list[int]]:
    """Run the program fault-free, producing the golden trace and outputs."""
    events, outputs, termination, _ = _run(program, inputs, None, step_limit)
    if termination != TERMINATION_NORMAL:
        raise StepLimitExceededError(step_limit)
    run = RunTrace(run_id=run_id, kind=GOLDEN, injection=None, symbols=_symbols_for(program), events=events)
    return run, outputs


def execute_with_fault(
    program: ToyProgram,
    inputs: list[int],
    fault: FaultSpec,
    run_id: str = "faulty",
    step_limit: int = DEFAULT_STEP_LIMIT,
    golden: tuple[RunTrace, list[int]] | None = None,
) -> tuple[RunTrace, OutcomeRecord]:
    """Run the program with one bit flip and classify the outcome.

    `golden` may carry a precomputed (trace, outputs) pair for the same
    program and inputs; campaigns pass it to avoid re-running the golden
    execution per fault.
    """
    if golden is None:
        golden = execute(program, inputs, step_limit=step_limit)
    golden_trace, golden_output = golden

    available = golden_trace.block_event_count()
    if fault.dynamic_event_index >= available:
        raise FaultNotReachedError(fault.dynamic_event_index, available)

    events, outputs, termination, fired = _run(program, inputs, fault, step_limit)
    if fired is None:
        # The prefix property guarantees the fault ordinal is reached whenever
        # it is reachable in the golden trace.
        raise FaultNotReachedError(fault.dynamic_event_index, available)

    run = RunTrace(run_id=run_id, kind=FAULTY, injection=fired, symbols=_symbols_for(program), events=events)
    outcome = OutcomeRecord(
        run_id=run_id,
        classification=classify_outcome(golden_output, outputs, termination),
        faulty_output=outputs,
        events_executed=len(events),
    )
    return run, outcome


def classify_outcome(golden_output: list[int], faulty_output: list[int], termination: str) -> str:
    """crash on abnormal termination, sdc on differing output, else benign."""
    if termination != TERMINATION_NORMAL:
        return CRASH
    if list(golden_output) != list(faulty_output):
        return SDC
    return BENIGN
