"""Deterministic toy-program interpreter with single-bit-flip fault injection."""

from faultflow.harness.program import InvalidProgramError, ToyBlock, ToyFunction, ToyProgram, parse_program
from faultflow.harness.interp import (
    FaultNotReachedError,
    FaultSpec,
    OutcomeRecord,
    StepLimitExceededError,
    classify_outcome,
    execute,
    execute_with_fault,
)
from faultflow.harness.campaign import CampaignError, CampaignManifest, CampaignRun, run_campaign

__all__ = [
    "CampaignError",
    "CampaignManifest",
    "CampaignRun",
    "FaultNotReachedError",
    "FaultSpec",
    "InvalidProgramError",
    "OutcomeRecord",
    "StepLimitExceededError",
    "ToyBlock",
    "ToyFunction",
    "ToyProgram",
    "classify_outcome",
    "execute",
    "execute_with_fault",
    "parse_program",
    "run_campaign",
]
