"""Toy basic-block program representation and its text assembly format.

Assembly grammar (UTF-8; ``#`` starts a comment anywhere; blank lines
are skipped; indentation is free-form)::

    .fun <name> [regs=<n>] [entry]
    .block 0x<addr>
        const r<d> <imm>         # r[d] = imm (decimal or 0x hex, masked to 64 bits)
        add r<d> r<a> r<b>       # wrapping 64-bit arithmetic
        sub r<d> r<a> r<b>
        mul r<d> r<a> r<b>
        cmp r<d> r<a> r<b>       # r[d] = 1 if r[a] < r[b] (unsigned) else 0
        out r<a>                 # append r[a] to the run output
    # exactly one terminator closes every block:
        jmp 0x<addr>
        br r<c> 0x<then> 0x<else>   # nonzero r[c] takes <then>
        call <name> 0x<next>        # call, then resume at block <next>
        ret

Execution conventions: registers are 64-bit unsigned, zero-initialized;
program inputs load into the entry function's r0..; a call copies
r0..r(min-1) into the callee and the callee's r0 back out on return.
The first ``.fun`` is the entry point unless a later one carries the
``entry`` flag (at most one may).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from faultflow.trace import format_addr, parse_addr

MASK64 = (1 << 64) - 1
DEFAULT_REGISTERS = 4

_REG_RE = re.compile(r"^r(\d+)$")

BODY_OPS = ("const", "add", "sub", "mul", "cmp", "out")
TERMINATOR_OPS = ("jmp", "br", "call", "ret")


class InvalidProgramError(Exception):
    """Raised when assembly text or a constructed program breaks a structural rule."""


@dataclass(frozen=True, slots=True)
class Instr:
    op: str
    args: tuple  # register indices, immediates, addresses, or a callee name


@dataclass(slots=True)
class ToyBlock:
    address: int
    instructions: list[Instr]
    terminator: Instr


@dataclass(slots=True)
class ToyFunction:
    index: int
    name: str
    blocks: list[ToyBlock]  # first block is the function entry
    registers: int

    def block_map(self) -> dict[int, ToyBlock]:
        return {b.address: b for b in self.blocks}


@dataclass(slots=True)
class ToyProgram:
    functions: list[ToyFunction]
    entry: int
    name: str = "program"
    _fn_by_name: dict[str, ToyFunction] = field(default_factory=dict, repr=False)

    def function_named(self, name: str) -> ToyFunction:
        return self._fn_by_name[name]


def _parse_reg(token: str, nregs: int, line_no: int) -> int:
    m = _REG_RE.match(token)
    if not m:
        raise InvalidProgramError(f"line {line_no}: expected a register, got {token!r}")
    idx = int(m.group(1))
    if idx >= nregs:
        raise InvalidProgramError(f"line {line_no}: register r{idx} exceeds declared count {nregs}")
    return idx


def _parse_imm(token: str, line_no: int) -> int:
    try:
        value = int(token, 0)
    except ValueError:
        raise InvalidProgramError(f"line {line_no}: bad immediate {token!r}") from None
    return value & MASK64


def _parse_target(token: str, line_no: int) -> int:
    try:
        return parse_addr(token)
    except ValueError as exc:
        raise InvalidProgramError(f"line {line_no}: {exc}") from None


def parse_program(text: str, name: str = "program") -> ToyProgram:
    """Parse assembly text and fully validate the resulting program."""
    functions: list[ToyFunction] = []
    entry_index: int | None = None

    cur_fn: ToyFunction | None = None
    cur_addr: int | None = None
    cur_body: list[Instr] = []
    cur_term: Instr | None = None
    pending_calls: list[tuple[int, str]] = []  # (line_no, callee name)

    def close_block(line_no: int) -> None:
        nonlocal cur_addr, cur_body, cur_term
        if cur_addr is None:
            return
        if cur_term is None:
            raise InvalidProgramError(f"line {line_no}: block {format_addr(cur_addr)} has no terminator")
        cur_fn.blocks.append(ToyBlock(address=cur_addr, instructions=cur_body, terminator=cur_term))
        cur_addr, cur_body, cur_term = None, [], None

    def close_function(line_no: int) -> None:
        nonlocal cur_fn
        if cur_fn is None:
            return
        close_block(line_no)
        if not cur_fn.blocks:
            raise InvalidProgramError(f"line {line_no}: function {cur_fn.name!r} has no blocks")
        functions.append(cur_fn)
        cur_fn = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        op = tokens[0]

        if op == ".fun":
            close_function(line_no)
            if len(tokens) < 2:
                raise InvalidProgramError(f"line {line_no}: .fun needs a name")
            fn_name = tokens[1]
            regs = DEFAULT_REGISTERS
            is_entry = False
            for extra in tokens[2:]:
                if extra.startswith("regs="):
                    regs = int(extra[len("regs="):])
                    if regs < 1:
                        raise InvalidProgramError(f"line {line_no}: regs must be >= 1")
                elif extra == "entry":
                    is_entry = True
                else:
                    raise InvalidProgramError(f"line {line_no}: unknown .fun attribute {extra!r}")
            if any(fn.name == fn_name for fn in functions):
                raise InvalidProgramError(f"line {line_no}: duplicate function name {fn_name!r}")
            if is_entry:
                if entry_index is not None:
                    raise InvalidProgramError(f"line {line_no}: more than one entry function")
                entry_index = len(functions)
            cur_fn = ToyFunction(index=len(functions), name=fn_name, blocks=[], registers=regs)
            continue

        if cur_fn is None:
            raise InvalidProgramError(f"line {line_no}: instruction before any .fun directive")

        if op == ".block":
            close_block(line_no)
            if len(tokens) != 2:
                raise InvalidProgramError(f"line {line_no}: .block takes one address")
            cur_addr = _parse_target(tokens[1], line_no)
            continue

        if cur_addr is None:
            raise InvalidProgramError(f"line {line_no}: instruction before any .block directive")
        if cur_term is not None:
            raise InvalidProgramError(f"line {line_no}: instruction after block terminator")

        nregs = cur_fn.registers
        if op == "const":
            if len(tokens) != 3:
                raise InvalidProgramError(f"line {line_no}: const takes r<d> <imm>")
            cur_body.append(Instr("const", (_parse_reg(tokens[1], nregs, line_no), _parse_imm(tokens[2], line_no))))
        elif op in ("add", "sub", "mul", "cmp"):
            if len(tokens) != 4:
                raise InvalidProgramError(f"line {line_no}: {op} takes r<d> r<a> r<b>")
            cur_body.append(
                Instr(
                    op,
                    (
                        _parse_reg(tokens[1], nregs, line_no),
                        _parse_reg(tokens[2], nregs, line_no),
                        _parse_reg(tokens[3], nregs, line_no),
                    ),
                )
            )
        elif op == "out":
            if len(tokens) != 2:
                raise InvalidProgramError(f"line {line_no}: out takes r<a>")
            cur_body.append(Instr("out", (_parse_reg(tokens[1], nregs, line_no),)))
        elif op == "jmp":
            if len(tokens) != 2:
                raise InvalidProgramError(f"line {line_no}: jmp takes one address")
            cur_term = Instr("jmp", (_parse_target(tokens[1], line_no),))
        elif op == "br":
            if len(tokens) != 4:
                raise InvalidProgramError(f"line {line_no}: br takes r<c> <then> <else>")
            cur_term = Instr(
                "br",
                (
                    _parse_reg(tokens[1], nregs, line_no),
                    _parse_target(tokens[2], line_no),
                    _parse_target(tokens[3], line_no),
                ),
            )
        elif op == "call":
            if len(tokens) != 3:
                raise InvalidProgramError(f"line {line_no}: call takes <name> <next-addr>")
            pending_calls.append((line_no, tokens[1]))
            cur_term = Instr("call", (tokens[1], _parse_target(tokens[2], line_no)))
        elif op == "ret":
            if len(tokens) != 1:
                raise InvalidProgramError(f"line {line_no}: ret takes no operands")
            cur_term = Instr("ret", ())
        else:
            raise InvalidProgramError(f"line {line_no}: unknown instruction {op!r}")

    close_function(len(text.splitlines()) + 1)
    if not functions:
        raise InvalidProgramError("program declares no functions")

    program = ToyProgram(functions=functions, entry=entry_index if entry_index is not None else 0, name=name)
    validate_program(program)
    for line_no, callee in pending_calls:
        if callee not in program._fn_by_name:
            raise InvalidProgramError(f"line {line_no}: call to unknown function {callee!r}")
    return program


def validate_program(program: ToyProgram) -> None:
    """Enforce structural invariants; populates the name lookup table."""
    if not 0 <= program.entry < len(program.functions):
        raise InvalidProgramError(f"entry index {program.entry} out of range")

    program._fn_by_name = {}
    seen_addrs: set[int] = set()
    for pos, fn in enumerate(program.functions):
        if fn.index != pos:
            raise InvalidProgramError(f"function {fn.name!r} has index {fn.index}, expected {pos}")
        if fn.name in program._fn_by_name:
            raise InvalidProgramError(f"duplicate function name {fn.name!r}")
        program._fn_by_name[fn.name] = fn
        if fn.registers < 1:
            raise InvalidProgramError(f"function {fn.name!r} declares no registers")
        if not fn.blocks:
            raise InvalidProgramError(f"function {fn.name!r} has no blocks")
        for block in fn.blocks:
            if block.address in seen_addrs:
                raise InvalidProgramError(f"block address {format_addr(block.address)} is not unique program-wide")
            seen_addrs.add(block.address)

    for fn in program.functions:
        local = fn.block_map()
        for block in fn.blocks:
            term = block.terminator
            if term.op == "jmp":
                targets = (term.args[0],)
            elif term.op == "br":
                targets = (term.args[1], term.args[2])
            elif term.op == "call":
                targets = (term.args[1],)
                if term.args[0] not in program._fn_by_name:
                    raise InvalidProgramError(f"call to unknown function {term.args[0]!r}")
            else:
                targets = ()
            for tgt in targets:
                if tgt not in local:
                    raise InvalidProgramError(
                        f"block {format_addr(block.address)} in {fn.name!r} targets "
                        f"{format_addr(tgt)} which is not a block of the same function"
                    )


def load_program(path, name: str | None = None) -> ToyProgram:
    from pathlib import Path

    p = Path(path)
    return parse_program(p.read_text(encoding="utf-8"), name=name or p.stem)
