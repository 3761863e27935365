#!/usr/bin/env python3
"""Regenerate fixtures/comd_case: a CoMD-flavored golden/faulty trace pair.

The pair is hand-constructed (not interpreter-produced) so the demo
workspace exhibits a realistic campaign slice at desk scale: 157
functions, 64 of them affected by one injected bit flip, and a hot
loop in `setVcm_omp_fn.o` whose entry edge 0x408000 -> 0x408030 tops
out at a diff weight of 351.  Everything is arithmetic-deterministic;
rerunning the script reproduces the committed files byte-for-byte.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from faultflow.diff import affected_count, function_statuses  # noqa: E402
from faultflow.lsg import build_all_lsgs  # noqa: E402
from faultflow.diff import diff_lsg  # noqa: E402
from faultflow.trace import format_addr, parse_trace  # noqa: E402

OUT_DIR = REPO / "fixtures" / "comd_case"

N_FUNCTIONS = 157
SETVCM_INDEX = 42
SETVCM_NAME = "setVcm_omp_fn.o"

# setVcm_omp_fn.o: 12 blocks, a guarded loop over two body arms.
SV_PRE = [0x407F80, 0x407FA0, 0x407FC0, 0x407FE0]
SV_HEADER = 0x408000
SV_BODY = 0x408030
SV_ARM_A = 0x408048
SV_ARM_B = 0x408060
SV_POST = [0x408078, 0x408090, 0x4080A0, 0x4080A8]
SV_GOLDEN_ITERS = 400
SV_FAULTY_ITERS = 49

# Functions 43..105 (63 of them) also diverge after the flip, for 64 affected
# in total; 154 is a call-only stub, 155/156 are declared but never invoked.
DIFFER_INDICES = set(range(43, 106))
STUB_INDEX = 154
UNINVOKED = (155, 156)

CURATED_NAMES = [
    "main", "initSimulation", "destroySimulation", "printSimulationDataYaml",
    "initSubsystems", "initValidate", "validateResult", "sumAtoms",
    "printPerformanceResults", "initEamPot", "mkInitialPot", "eamForce",
    "adjustNeighborList", "ljForce", "initLjPot", "timestep",
    "advanceVelocity", "advancePosition", "kineticEnergy", "redistributeAtoms",
    "computeForce", "dumpAtoms", "initAtoms", "createFccLattice",
    "setVcm", "randomDisplacement", "setTemperature", "initLinkCells",
    "destroyLinkCells", "getBoxFromTuple", "putAtomInBox", "getTuple",
    "getBoxFromCoord", "emptyHaloCells", "updateLinkCells", "sortAtomsInCell",
    "copyAtom", "moveAtom", "initAtomHaloExchange", "initForceHaloExchange",
    "destroyHaloExchange", "haloExchange", "sortEntriesBySortKey",
    "loadAtomsBuffer", "unloadAtomsBuffer", "loadForceBuffer", "unloadForceBuffer",
    "processCommandLine", "printCmdYaml", "parseArgs", "getMyRank",
    "getNRanks", "barrierParallel", "initParallel", "destroyParallel",
    "addIntParallel", "addRealParallel", "maxRealParallel", "minRankDoubleParallel",
    "profileStart", "profileStop", "getElapsedTime", "printPerformanceResultsYaml",
    "timestampBarrier", "getUnitScale", "mySqrt", "zeroReal3",
    "dotProduct", "crossProduct", "matInverse", "boxTuple",
]


@dataclass(slots=True)
class FnPlan:
    index: int
    name: str
    invocations: int
    golden_seq: list[int]  # block addresses executed per invocation
    faulty_seq: list[int]
    source_file: str | None = None
    line_map: dict[int, tuple[int, int]] | None = None


def function_names() -> list[str]:
    names = list(CURATED_NAMES)
    out: list[str] = []
    k = 0
    for i in range(N_FUNCTIONS):
        if i == SETVCM_INDEX:
            out.append(SETVCM_NAME)
        elif k < len(names):
            out.append(names[k])
            k += 1
        else:
            out.append(f"omp_region_{i:03d}")
    return out


def loop_seq(blocks: list[int], loop_pos: int, iters: int) -> list[int]:
    seq: list[int] = []
    for i, addr in enumerate(blocks):
        seq.extend([addr] * (iters if i == loop_pos else 1))
    return seq


def setvcm_seq(iters: int) -> list[int]:
    seq = list(SV_PRE)
    for i in range(iters):
        seq.append(SV_HEADER)
        seq.append(SV_BODY)
        seq.append(SV_ARM_A if i % 2 == 0 else SV_ARM_B)
    seq.append(SV_HEADER)
    seq.extend(SV_POST)
    return seq


def build_plans() -> list[FnPlan]:
    names = function_names()
    plans = [FnPlan(index=0, name=names[0], invocations=1, golden_seq=[], faulty_seq=[])]
    for i in range(1, N_FUNCTIONS):
        if i == SETVCM_INDEX:
            plans.append(
                FnPlan(
                    index=i,
                    name=names[i],
                    invocations=1,
                    golden_seq=setvcm_seq(SV_GOLDEN_ITERS),
                    faulty_seq=setvcm_seq(SV_FAULTY_ITERS),
                    source_file="initAtoms.c",
                    line_map={SV_HEADER: (126, 127), SV_BODY: (128, 129)},
                )
            )
            continue
        if i in UNINVOKED:
            plans.append(FnPlan(index=i, name=names[i], invocations=0, golden_seq=[], faulty_seq=[]))
            continue
        if i == STUB_INDEX:
            plans.append(FnPlan(index=i, name=names[i], invocations=2, golden_seq=[], faulty_seq=[]))
            continue

        base = 0x410000 + i * 0x400
        n_blocks = 2 + (i % 4)
        blocks = [base + 0x10 * b for b in range(n_blocks)]
        inv = 1 + (i % 3)
        has_loop = (i % 5 == 0) or i in DIFFER_INDICES
        loop_pos = n_blocks // 2
        t_gold = 4 + (i % 11)
        golden = loop_seq(blocks, loop_pos, t_gold) if has_loop else list(blocks)
        if i in DIFFER_INDICES:
            faulty = loop_seq(blocks, loop_pos, t_gold + 1 + (i % 9))
        else:
            faulty = list(golden)
        src = "ljForce.c" if i % 17 == 0 else None
        plans.append(
            FnPlan(
                index=i,
                name=names[i],
                invocations=inv,
                golden_seq=golden,
                faulty_seq=faulty,
                source_file=src,
                line_map={blocks[loop_pos]: (40 + i % 60, 44 + i % 60)} if src and has_loop else None,
            )
        )
    return plans


MAIN_ENTRY = 0x401000
MAIN_EXIT = 0x401FF0


def emit_trace(run_id: str, kind: str, plans: list[FnPlan], faulty: bool) -> tuple[str, int]:
    """Render the trace text; returns (text, stream index of first setVcm loop-header B)."""
    lines = [f"RUN {run_id} {kind}"]
    inj_placeholder = None
    if faulty:
        inj_placeholder = len(lines)
        lines.append("")  # patched once the header event index is known
    for p in plans:
        lines.append(f"FUN {p.index} {p.name}")
        if p.source_file:
            lines.append(f"SRC {p.index} {p.source_file}")
        if p.line_map:
            for addr in sorted(p.line_map):
                start, end = p.line_map[addr]
                lines.append(f"MAP {p.index} {format_addr(addr)} {start} {end}")

    events: list[str] = []
    header_event_index = -1
    events.append("C 0")
    events.append(f"B 0 {format_addr(MAIN_ENTRY)}")
    for p in plans[1:]:
        seq = p.faulty_seq if faulty else p.golden_seq
        for _ in range(p.invocations):
            events.append(f"C {p.index}")
            for addr in seq:
                if p.index == SETVCM_INDEX and addr == SV_HEADER and header_event_index < 0:
                    header_event_index = len(events)
                events.append(f"B {p.index} {format_addr(addr)}")
            events.append(f"R {p.index}")
    events.append(f"B 0 {format_addr(MAIN_EXIT)}")
    events.append("R 0")

    if faulty:
        lines[inj_placeholder] = f"INJ {SETVCM_INDEX} {header_event_index} 13"
    lines.extend(events)
    return "\n".join(lines) + "\n", header_event_index


def main() -> None:
    plans = build_plans()
    golden_text, _ = emit_trace("golden", "golden", plans, faulty=False)
    faulty_text, _ = emit_trace("fault_0001", "faulty", plans, faulty=True)

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "golden.trace").write_text(golden_text, encoding="utf-8")
    (OUT_DIR / "faulty_0001.trace").write_text(faulty_text, encoding="utf-8")

    # Self-check the advertised properties before anyone commits the output.
    golden = parse_trace(golden_text)
    faulty = parse_trace(faulty_text)
    assert len(golden.symbols) == N_FUNCTIONS
    statuses = function_statuses(golden, faulty)
    assert affected_count(statuses) == 64, affected_count(statuses)
    assert sum(1 for s in statuses if s.is_injection_site) == 1
    sv_diff = diff_lsg(
        build_all_lsgs(golden)[SETVCM_INDEX], build_all_lsgs(faulty)[SETVCM_INDEX]
    )
    blocks = [n for n in sv_diff.nodes if n.startswith("0x")]
    assert len(blocks) == 12, len(blocks)
    top = max(sv_diff.edges.items(), key=lambda kv: kv[1].weight)
    assert top[0] == (format_addr(SV_HEADER), format_addr(SV_BODY)) and top[1].weight == 351, top
    over_350 = [e for e, d in sv_diff.edges.items() if d.weight > 350]
    assert over_350 == [top[0]]
    print(f"wrote {OUT_DIR}/golden.trace ({len(golden.events)} events)")
    print(f"wrote {OUT_DIR}/faulty_0001.trace ({len(faulty.events)} events)")
    print(f"functions: {N_FUNCTIONS}, affected: {affected_count(statuses)}, max setVcm weight: {top[1].weight}")


if __name__ == "__main__":
    main()
