import random

import pytest

from faultflow import jsonio
from faultflow.diff import diff_lsg
from faultflow.harness.interp import execute
from faultflow.layout import (
    GRAY,
    RED,
    STYLE_BLOCK,
    STYLE_HEAD,
    STYLE_TAIL,
    LayoutGraph,
    LayoutMismatchError,
    MissingHeadTailError,
    anomaly_map,
    layout,
)
from faultflow.lsg import HEAD, TAIL, LSG, build_all_lsgs
from oracles import back_edge_oracle, random_run


def mk_lsg(edges: dict, invocations: int = 1) -> LSG:
    nodes = {HEAD, TAIL}
    for frm, to in edges:
        nodes.update((frm, to))
    return LSG(function_index=0, function_name="fn0", invocations=invocations, nodes=nodes, edges=dict(edges))


def random_graph(rng: random.Random):
    run = random_run(rng)
    idx = rng.randrange(len(run.symbols))
    return build_all_lsgs(run)[idx]


class TestLayout:
    def test_chain_is_a_single_column(self):
        lsg = mk_lsg({(HEAD, "0xa0"): 1, ("0xa0", TAIL): 1})
        lay = layout(lsg)
        assert [lay.nodes[n].rank for n in (HEAD, "0xa0", TAIL)] == [0, 1, 2]
        xs = {lay.nodes[n].x for n in lay.nodes}
        assert len(xs) == 1

    def test_diamond_ranks_and_order(self, diamond_program):
        run, _ = execute(diamond_program, [])
        lsg = build_all_lsgs(run)[1]
        lay = layout(lsg)
        # hand-computed longest-path ranks for head->A->{B,C}->D->tail
        assert lay.nodes[HEAD].rank == 0
        assert lay.nodes["0x3100"].rank == 1
        assert lay.nodes["0x3110"].rank == 2
        assert lay.nodes["0x3120"].rank == 2
        assert lay.nodes["0x3130"].rank == 3
        assert lay.nodes[TAIL].rank == 4
        # same-rank order falls back to address order: B (0x3110) left of C
        assert lay.nodes["0x3110"].x < lay.nodes["0x3120"].x
        assert lay.reversed_edges == set()

    def test_loop10_back_edge_is_reversed(self, loop10_program):
        run, _ = execute(loop10_program, [])
        lsg = build_all_lsgs(run)[0]
        lay = layout(lsg)
        assert lay.reversed_edges == {("0x1010", "0x1010")}
        for frm, to in lsg.edges:
            if (frm, to) not in lay.reversed_edges:
                assert lay.nodes[to].rank > lay.nodes[frm].rank

    def test_missing_head_tail_rejected(self):
        lsg = mk_lsg({(HEAD, "0xa0"): 1, ("0xa0", TAIL): 1})
        lsg.nodes.discard(TAIL)
        del lsg.edges[("0xa0", TAIL)]
        with pytest.raises(MissingHeadTailError):
            layout(lsg)

    def test_empty_graph_still_places_head_and_tail(self):
        lsg = LSG(function_index=0, function_name="fn0", invocations=0)
        lay = layout(lsg)
        assert lay.nodes[HEAD].rank == 0
        assert lay.nodes[TAIL].rank == 1

    def test_random_graph_invariants(self):
        rng = random.Random(31337)
        for _ in range(200):
            graph = random_graph(rng)
            lay = layout(graph)
            assert lay.nodes[HEAD].rank == 0
            max_rank = max(n.rank for n in lay.nodes.values())
            assert lay.nodes[TAIL].rank == max_rank
            coords = [(n.x, n.y) for n in lay.nodes.values()]
            assert len(set(coords)) == len(coords)
            for frm, to in graph.edges:
                if (frm, to) in lay.reversed_edges:
                    assert lay.nodes[to].rank <= lay.nodes[frm].rank
                else:
                    assert lay.nodes[to].rank > lay.nodes[frm].rank

    def test_back_edges_match_independent_dfs(self):
        rng = random.Random(777)
        for _ in range(100):
            graph = random_graph(rng)
            lay = layout(graph)
            assert lay.reversed_edges == back_edge_oracle(set(graph.nodes), set(graph.edges))

    def test_relayout_is_byte_identical(self, comd_golden, comd_faulty):
        golden = build_all_lsgs(comd_golden)[42]
        faulty = build_all_lsgs(comd_faulty)[42]
        diff = diff_lsg(golden, faulty)
        a = jsonio.canonical_bytes(layout(diff).to_json())
        b = jsonio.canonical_bytes(layout(diff).to_json())
        assert a == b

    def test_layout_json_round_trip(self, loop10_program):
        run, _ = execute(loop10_program, [])
        lay = layout(build_all_lsgs(run)[0])
        again = LayoutGraph.from_json(lay.to_json())
        assert again.to_json() == lay.to_json()


class TestAnomalyMap:
    def styled(self, graph, threshold):
        return anomaly_map(graph, threshold, layout(graph))

    def test_threshold_zero_separates_zero_and_positive(self, comd_golden, comd_faulty):
        diff = diff_lsg(build_all_lsgs(comd_golden)[42], build_all_lsgs(comd_faulty)[42])
        styled = self.styled(diff, 0)
        for edge in styled.edges:
            weight = diff.edges[(edge.frm, edge.to)].weight
            assert edge.style == (RED if weight > 0 else GRAY)

    def test_all_zero_diff_is_all_gray(self, comd_golden):
        lsg = build_all_lsgs(comd_golden)[1]
        diff = diff_lsg(lsg, lsg)
        for threshold in (0, 1, 5, 100):
            styled = self.styled(diff, threshold)
            assert all(e.style == GRAY for e in styled.edges)

    def test_comd_setvcm_at_349_350_351(self, comd_golden, comd_faulty):
        diff = diff_lsg(build_all_lsgs(comd_golden)[42], build_all_lsgs(comd_faulty)[42])
        at_350 = self.styled(diff, 350).red_edges()
        assert len(at_350) == 1
        assert (at_350[0].frm, at_350[0].to) == ("0x408000", "0x408030")
        assert at_350[0].weight == 351
        assert at_350[0].intensity == 1.0
        assert len(self.styled(diff, 351).red_edges()) == 0
        assert len(self.styled(diff, 174).red_edges()) == 5

    def test_threshold_monotonicity(self):
        rng = random.Random(44)
        for _ in range(30):
            a = build_all_lsgs(random_run(rng))[0]
            b = build_all_lsgs(random_run(rng))[0]
            diff = diff_lsg(a, b)
            lay = layout(diff)
            max_w = diff.max_weight()
            previous = None
            for t in range(max_w + 2):
                red = {(e.frm, e.to) for e in anomaly_map(diff, t, lay).red_edges()}
                if previous is not None:
                    assert red <= previous
                previous = red
            assert previous == set()

    def test_intensity_formula_and_range(self, comd_golden, comd_faulty):
        diff = diff_lsg(build_all_lsgs(comd_golden)[43], build_all_lsgs(comd_faulty)[43])
        max_w = diff.max_weight()
        styled = self.styled(diff, 0)
        for e in styled.edges:
            if e.style == RED:
                assert e.intensity == e.weight / max_w
                assert 0.0 < e.intensity <= 1.0
            else:
                assert e.intensity is None

    def test_head_and_tail_styles_fixed(self, comd_golden):
        lsg = build_all_lsgs(comd_golden)[42]
        styled = self.styled(lsg, 10**9)
        by_id = {n.id: n.style for n in styled.nodes}
        assert by_id[HEAD] == STYLE_HEAD
        assert by_id[TAIL] == STYLE_TAIL
        assert all(v == STYLE_BLOCK for k, v in by_id.items() if k not in (HEAD, TAIL))

    def test_layout_mismatch_detected(self, comd_golden):
        lsgs = build_all_lsgs(comd_golden)
        lay_other = layout(lsgs[2])
        with pytest.raises(LayoutMismatchError):
            anomaly_map(lsgs[42], 0, lay_other)

    def test_negative_threshold_rejected(self, comd_golden):
        lsg = build_all_lsgs(comd_golden)[42]
        with pytest.raises(ValueError):
            anomaly_map(lsg, -1, layout(lsg))

    def test_styled_bytes_deterministic(self, comd_golden, comd_faulty):
        diff = diff_lsg(build_all_lsgs(comd_golden)[42], build_all_lsgs(comd_faulty)[42])
        lay = layout(diff)
        a = jsonio.canonical_bytes(anomaly_map(diff, 17, lay).to_json())
        b = jsonio.canonical_bytes(anomaly_map(diff, 17, lay).to_json())
        assert a == b

    def test_cvg_styles_by_max_weight(self):
        from faultflow.cvg import accumulate

        rng = random.Random(50)
        base = random_run(rng, n_functions=1)
        golden = build_all_lsgs(base)[0]
        diffs = []
        while len(diffs) < 4:
            other = random_run(rng, n_functions=1)
            diffs.append(diff_lsg(golden, build_all_lsgs(other)[0]))
        cvg = accumulate(diffs)
        styled = anomaly_map(cvg, 0, layout(cvg))
        for e in styled.edges:
            assert e.weight == cvg.edges[(e.frm, e.to)].max_w
