"""Seeded fault-injection campaigns over one program and input vector.

A campaign executes one golden run plus n faulty runs whose fault
specs are drawn uniformly over (golden Block events x declared
registers of the active function x 64 bits) from a seeded generator,
so identical (program, inputs, n, seed) always reproduce the same
manifest and the same trace bytes.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from faultflow import jsonio
from faultflow.harness.interp import (
    DEFAULT_STEP_LIMIT,
    FaultNotReachedError,
    FaultSpec,
    OutcomeRecord,
    execute,
    execute_with_fault,
)
from faultflow.harness.program import ToyProgram
from faultflow.trace import BLOCK, FAULTY, GOLDEN, RunTrace, symbols_to_json

GOLDEN_RUN_ID = "golden"


class CampaignError(Exception):
    pass


@dataclass(slots=True)
class CampaignRun:
    run_id: str
    kind: str  # GOLDEN | FAULTY
    fault: FaultSpec | None = None
    outcome: OutcomeRecord | None = None
    error: str | None = None  # "fault_not_reached" when the flip never fired


@dataclass(slots=True)
class CampaignManifest:
    campaign_id: str
    golden_run_id: str
    symbol_digest: str
    runs: list[CampaignRun]

    def to_json(self) -> dict:
        runs = []
        for run in self.runs:
            entry: dict = {"run_id": run.run_id, "kind": run.kind, "fault": None, "outcome": None, "error": run.error}
            if run.fault is not None:
                entry["fault"] = {
                    "dynamic_event_index": run.fault.dynamic_event_index,
                    "target_register": run.fault.target_register,
                    "bit": run.fault.bit,
                }
            if run.outcome is not None:
                entry["outcome"] = {
                    "classification": run.outcome.classification,
                    "faulty_output": run.outcome.faulty_output,
                    "events_executed": run.outcome.events_executed,
                }
            runs.append(entry)
        return {
            "campaign_id": self.campaign_id,
            "golden_run_id": self.golden_run_id,
            "symbol_digest": self.symbol_digest,
            "runs": runs,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CampaignManifest":
        runs = []
        for entry in data["runs"]:
            fault = None
            if entry.get("fault") is not None:
                f = entry["fault"]
                fault = FaultSpec(
                    dynamic_event_index=int(f["dynamic_event_index"]),
                    target_register=int(f["target_register"]),
                    bit=int(f["bit"]),
                )
            outcome = None
            if entry.get("outcome") is not None:
                o = entry["outcome"]
                outcome = OutcomeRecord(
                    run_id=entry["run_id"],
                    classification=o["classification"],
                    faulty_output=o.get("faulty_output"),
                    events_executed=int(o["events_executed"]),
                )
            runs.append(
                CampaignRun(
                    run_id=entry["run_id"],
                    kind=entry["kind"],
                    fault=fault,
                    outcome=outcome,
                    error=entry.get("error"),
                )
            )
        return cls(
            campaign_id=data["campaign_id"],
            golden_run_id=data["golden_run_id"],
            symbol_digest=data["symbol_digest"],
            runs=runs,
        )


def symbol_digest(run: RunTrace) -> str:
    return hashlib.sha256(jsonio.canonical_bytes(symbols_to_json(run.symbols))).hexdigest()


def run_campaign(
    program: ToyProgram,
    inputs: list[int],
    n: int,
    seed: int,
    step_limit: int = DEFAULT_STEP_LIMIT,
    sink=None,
) -> CampaignManifest:
    """Execute 1 golden + n faulty runs; deliver traces to `sink` in order.

    `sink` is called once per RunTrace (golden first, then faults in spec
    order).  Fault specs that turn out unreachable are recorded on the
    manifest instead of aborting the campaign.
    """
    if n < 1:
        raise CampaignError(f"campaign needs at least one faulty run, got n={n}")

    golden_trace, golden_output = execute(program, inputs, run_id=GOLDEN_RUN_ID, step_limit=step_limit)
    digest = symbol_digest(golden_trace)
    if sink is not None:
        sink(golden_trace)

    block_owner = [ev.function_index for ev in golden_trace.events if ev.kind == BLOCK]
    if not block_owner:
        raise CampaignError("golden trace has no Block events to target")

    rng = random.Random(seed)
    runs = [CampaignRun(run_id=GOLDEN_RUN_ID, kind=GOLDEN)]
    for i in range(n):
        ordinal = rng.randrange(len(block_owner))
        fn = program.functions[block_owner[ordinal]]
        fault = FaultSpec(
            dynamic_event_index=ordinal,
            target_register=rng.randrange(fn.registers),
            bit=rng.randrange(64),
        )
        run_id = f"fault_{i:04d}"
        entry = CampaignRun(run_id=run_id, kind=FAULTY, fault=fault)
        try:
            trace, outcome = execute_with_fault(
                program,
                inputs,
                fault,
                run_id=run_id,
                step_limit=step_limit,
                golden=(golden_trace, golden_output),
            )
        except FaultNotReachedError:
            entry.error = "fault_not_reached"
        else:
            entry.outcome = outcome
            if sink is not None:
                sink(trace)
        runs.append(entry)

    return CampaignManifest(
        campaign_id=f"{program.name}-n{n}-s{seed}",
        golden_run_id=GOLDEN_RUN_ID,
        symbol_digest=digest,
        runs=runs,
    )
