import random

import pytest

from faultflow.trace import (
    BLOCK,
    CALL,
    FAULTY,
    GOLDEN,
    RETURN,
    DuplicateHeaderError,
    FunctionRecord,
    InjectionSite,
    MalformedLineError,
    RunTrace,
    TraceEvent,
    UnbalancedEventsError,
    UnknownFunctionError,
    format_addr,
    parse_addr,
    parse_trace,
    render_trace,
    run_from_json,
    run_to_json,
    validate_run,
)
from oracles import random_run

MINIMAL = "RUN r1 golden\nFUN 0 f\nFUN 1 g\nFUN 2 h\nFUN 3 setVcm\nC 3\nB 3 0x407f80\nB 3 0x408000\nR 3\n"


def test_parse_minimal_trace():
    run = parse_trace(MINIMAL)
    assert run.run_id == "r1"
    assert run.kind == GOLDEN
    assert run.injection is None
    assert [rec.name for rec in run.symbols] == ["f", "g", "h", "setVcm"]
    assert run.events == [
        TraceEvent(kind=CALL, function_index=3),
        TraceEvent(kind=BLOCK, function_index=3, block=0x407F80),
        TraceEvent(kind=BLOCK, function_index=3, block=0x408000),
        TraceEvent(kind=RETURN, function_index=3),
    ]


def test_block_with_empty_stack_is_unbalanced():
    with pytest.raises(UnbalancedEventsError):
        parse_trace("RUN r1 golden\nFUN 0 f\nB 0 0x10\n")


def test_return_without_call_is_unbalanced():
    with pytest.raises(UnbalancedEventsError):
        parse_trace("RUN r1 golden\nFUN 0 f\nR 0\n")


def test_open_frame_at_eof_is_unbalanced():
    with pytest.raises(UnbalancedEventsError):
        parse_trace("RUN r1 golden\nFUN 0 f\nC 0\nB 0 0x10\n")


def test_block_for_function_not_on_top_is_unbalanced():
    with pytest.raises(UnbalancedEventsError):
        parse_trace("RUN r1 golden\nFUN 0 f\nFUN 1 g\nC 0\nB 1 0x10\nR 0\n")


def test_second_run_line_is_duplicate_header():
    with pytest.raises(DuplicateHeaderError):
        parse_trace("RUN r1 golden\nRUN r2 golden\n")


def test_event_referencing_undeclared_function():
    with pytest.raises(UnknownFunctionError):
        parse_trace("RUN r1 golden\nFUN 0 f\nC 5\n")


def test_malformed_line_reports_position_and_text():
    with pytest.raises(MalformedLineError) as exc:
        parse_trace("RUN r1 golden\nFUN 0 f\nXYZ nonsense\n")
    assert exc.value.line_no == 3
    assert "XYZ" in exc.value.text


@pytest.mark.parametrize(
    "text",
    [
        "RUN r1 golden\nFUN 1 f\n",  # indices must be dense from 0
        "RUN r1 golden\nFUN 0 f\nFUN 1 f\n",  # duplicate name
        "RUN r1 golden\nFUN 0 f\nINJ 0 0 0\n",  # INJ on golden run
        "RUN r1 faulty\nINJ 0 0 64\nFUN 0 f\n",  # bit out of range
        "RUN r1 golden\nFUN 0 f\nC 0\nFUN 1 g\nR 0\n",  # symbol after event
        "RUN r1 faulty\nFUN 0 f\nC 0\nR 0\n",  # faulty without INJ
        "RUN r1 golden\nFUN 0 f\nC 0\nB 0 0x0010\nR 0\n",  # non-canonical address
        "RUN bad id golden\n",  # run id with a space splits into 4 tokens
    ],
)
def test_malformed_inputs_rejected(text):
    with pytest.raises(MalformedLineError):
        parse_trace(text)


def test_faulty_trace_with_injection_parses():
    run = parse_trace("RUN r9 faulty\nINJ 0 3 17\nFUN 0 f\nC 0\nB 0 0x10\nR 0\n")
    assert run.kind == FAULTY
    assert run.injection == InjectionSite(function_index=0, dynamic_event_index=3, bit=17)


def test_comments_and_blank_lines_are_skipped():
    run = parse_trace("# header comment\nRUN r1 golden\n\nFUN 0 f\n# mid comment\nC 0\nR 0\n")
    assert len(run.events) == 2


def test_src_and_map_metadata():
    run = parse_trace(
        "RUN r1 golden\nFUN 0 f\nSRC 0 initAtoms.c\nMAP 0 0x408000 126 127\nMAP 0 0x408030 128 129\nC 0\nR 0\n"
    )
    rec = run.symbols[0]
    assert rec.source_file == "initAtoms.c"
    assert rec.source_line_map == {0x408000: (126, 127), 0x408030: (128, 129)}


def test_round_trip_canonical_fixture(comd_golden, comd_faulty):
    from conftest import COMD_DIR

    for name, run in (("golden.trace", comd_golden), ("faulty_0001.trace", comd_faulty)):
        text = (COMD_DIR / name).read_text(encoding="utf-8")
        assert render_trace(run) == text


def test_round_trip_random_runs():
    rng = random.Random(2024)
    for _ in range(50):
        run = random_run(rng)
        assert parse_trace(render_trace(run)) == run


def test_parse_is_order_preserving():
    rng = random.Random(7)
    run = random_run(rng)
    reparsed = parse_trace(render_trace(run))
    assert reparsed.events == run.events


def test_addr_rendering_round_trip():
    for value in [0, 1, 16, 0x407F80, 2**48 + 5]:
        assert parse_addr(format_addr(value)) == value
    with pytest.raises(ValueError):
        parse_addr("0x00ff")
    with pytest.raises(ValueError):
        parse_addr("0X10")


def test_validate_well_formed_run_is_clean():
    assert validate_run(parse_trace(MINIMAL)).ok


def test_validate_injection_on_golden():
    run = parse_trace(MINIMAL)
    run.injection = InjectionSite(function_index=0, dynamic_event_index=0, bit=0)
    report = validate_run(run)
    assert any("injection on golden run" in f.message for f in report.findings)


def test_validate_faulty_without_injection():
    run = parse_trace(MINIMAL)
    run.kind = FAULTY
    report = validate_run(run)
    assert any("without injection" in f.message for f in report.findings)


def test_validate_return_not_on_stack_top():
    # Constructed directly: the parser would reject this stream outright.
    run = RunTrace(
        run_id="bad",
        kind=GOLDEN,
        injection=None,
        symbols=[FunctionRecord(0, "f"), FunctionRecord(1, "g")],
        events=[
            TraceEvent(kind=CALL, function_index=0),
            TraceEvent(kind=CALL, function_index=1),
            TraceEvent(kind=RETURN, function_index=0),  # g is on top
            TraceEvent(kind=RETURN, function_index=0),
        ],
    )
    report = validate_run(run)
    assert any(f.event_index == 2 for f in report.findings)
    # cross-check with an independent replay: frame 1 (g) is open at event 2
    stack = []
    for i, ev in enumerate(run.events[:2]):
        stack.append(ev.function_index)
    assert stack[-1] == 1


def test_validate_unknown_function_reference():
    run = parse_trace(MINIMAL)
    run.events = run.events + [TraceEvent(kind=CALL, function_index=99), TraceEvent(kind=RETURN, function_index=99)]
    report = validate_run(run)
    assert any(f.event_index == 4 for f in report.findings)


def test_validate_never_raises_on_garbage():
    run = RunTrace(run_id="x", kind="weird", injection=None, symbols=[], events=[TraceEvent(kind="Z", function_index=0)])
    report = validate_run(run)
    assert not report.ok


def test_run_json_round_trip(comd_faulty):
    assert run_from_json(run_to_json(comd_faulty)) == comd_faulty


def test_comd_fixture_declares_157_functions(comd_golden):
    assert len(comd_golden.symbols) == 157
