import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curtailgame import curtailment as ct

FLEET = ct.make_fleet([7.0, 2.0, 3.0])
OUT = np.array([7.0, 2.0, 3.0])


def test_rule_parse():
    assert ct.Rule.parse("pro rata") is ct.Rule.PRO_RATA
    assert ct.Rule.parse("frr") is ct.Rule.FRR
    with pytest.raises(ValueError):
        ct.Rule.parse("market")


def test_fleet_validation():
    with pytest.raises(ValueError):
        ct.validate_fleet([ct.GeneratorSpec("a", 1, 1, "s"), ct.GeneratorSpec("a", 1, 2, "s")])
    with pytest.raises(ValueError):
        ct.validate_fleet([ct.GeneratorSpec("a", 1, 1, "s"), ct.GeneratorSpec("b", 1, 1, "s")])
    with pytest.raises(ValueError):
        ct.GeneratorSpec("a", 0, 1, "s")


def test_required_curtailment():
    assert ct.required_curtailment(OUT, 6) == 6
    assert ct.required_curtailment(OUT, 20) == 0


class TestWorkedExample:
    def test_lifo(self):
        assert ct.allocate_lifo(FLEET, OUT, 6).curtailed_mw.tolist() == [1, 2, 3]

    def test_pro_rata(self):
        np.testing.assert_allclose(ct.allocate_pro_rata(FLEET, OUT, 6).curtailed_mw, [3.5, 1, 1.5], atol=1e-9)

    def test_rota_two_events(self):
        s = ct.RotationState.start(FLEET)
        a1, s = ct.allocate_rota(FLEET, OUT, 6, s)
        a2, s = ct.allocate_rota(FLEET, OUT, 6, s)
        assert a1.curtailed_mw.tolist() == [6, 0, 0]
        assert a2.curtailed_mw.tolist() == [1, 2, 3]
        assert s.pointer == 2

    def test_frr_two_events(self):
        s = ct.RotationState.start(FLEET)
        a1, s = ct.allocate_frr(FLEET, OUT, 6, s)
        assert a1.curtailed_mw.tolist() == [6, 0, 0]
        assert s.pointer == 0 and s.quotas_mw == (1, 2, 3)
        a2, s = ct.allocate_frr(FLEET, OUT, 6, s)
        assert a2.curtailed_mw.tolist() == [1, 2, 3]

    def test_frr_cycle_matches_rated_ratio(self):
        s = ct.RotationState.start(FLEET)
        total = np.zeros(3)
        for _ in range(12):
            a, s = ct.allocate_frr(FLEET, OUT, 6, s)
            total += a.curtailed_mw
        np.testing.assert_allclose(total, [42, 12, 18], atol=1e-9)


def test_lifo_respects_connection_order_not_list_order():
    fleet = [ct.GeneratorSpec("late", 3, 5, "s"), ct.GeneratorSpec("early", 3, 1, "s")]
    assert ct.allocate_lifo(fleet, [3, 3], 2).curtailed_mw.tolist() == [2, 0]


def test_rota_spills_and_still_advances():
    s = ct.RotationState.start(FLEET)
    a, s = ct.allocate_rota(FLEET, [0, 2, 3], 4, s)
    assert a.curtailed_mw.tolist() == [0, 2, 2]
    assert s.pointer == 1


def test_frr_refills_when_holders_have_no_output():
    s = ct.RotationState(0, (0, 1, 2), (0.0, 0.0, 3.0))
    a, s = ct.allocate_frr(FLEET, [7, 2, 0], 5, s)
    np.testing.assert_allclose(a.curtailed_mw.sum(), 5, atol=1e-9)


def test_frr_custom_order():
    s = ct.RotationState.start(FLEET, order=[2, 1, 0])
    a, _ = ct.allocate_frr(FLEET, OUT, 4, s)
    assert a.curtailed_mw.tolist() == [0, 1, 3]


def test_overdraw_is_an_error():
    with pytest.raises(ct.AllocationError):
        ct.allocate_lifo(FLEET, OUT, 13)
    with pytest.raises(ValueError):
        ct.allocate_lifo(FLEET, [1, 2], 1)


outputs_strategy = st.lists(st.floats(0, 50, allow_subnormal=False), min_size=3, max_size=3)


@settings(max_examples=300)
@given(outputs_strategy, st.floats(0, 1), st.sampled_from(list(ct.Rule)),
       st.integers(0, 2), st.lists(st.floats(0, 7), min_size=3, max_size=3))
def test_allocation_invariants(outputs, frac, rule, pointer, quotas):
    out = np.array(outputs)
    required = frac * out.sum()
    state = ct.RotationState(pointer, (0, 1, 2), tuple(min(q, g.rated_mw) for q, g in zip(quotas, FLEET)))
    fn = ct.ALLOCATORS[rule]
    alloc = fn(FLEET, out, required, state) if rule in (ct.Rule.ROTA, ct.Rule.FRR) else fn(FLEET, out, required)
    if isinstance(alloc, tuple):
        alloc, new_state = alloc
        assert 0 <= new_state.pointer < 3
        assert all(0 <= q <= g.rated_mw + 1e-9 for q, g in zip(new_state.quotas_mw, FLEET))
    c = alloc.curtailed_mw
    assert abs(c.sum() - required) <= 1e-9 * max(1.0, required)
    assert np.all(c >= 0) and np.all(c <= out + 1e-9)


class TestSimulate:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.x = rng.random((3, 500))

    @pytest.mark.parametrize("rule", list(ct.Rule))
    def test_conservation_over_timeline(self, rule):
        res = ct.simulate(FLEET, self.x, 6.0, rule)
        delivered = res.generated_mw.sum(axis=1)
        total = res.output_mw.sum(axis=1)
        np.testing.assert_allclose(delivered, np.minimum(total, 6.0), atol=1e-9)
        assert np.all(res.curtailed_mw >= 0) and np.all(res.curtailed_mw <= res.output_mw + 1e-9)

    @pytest.mark.parametrize("rule", list(ct.Rule))
    def test_matches_per_interval_allocator(self, rule):
        res = ct.simulate(FLEET, self.x, 6.0, rule)
        state = ct.RotationState.start(FLEET)
        for t in range(self.x.shape[1]):
            out = self.x[:, t] * OUT
            req = ct.required_curtailment(out, 6.0)
            if rule in (ct.Rule.ROTA, ct.Rule.FRR):
                if req == 0:
                    continue
                alloc, state = ct.ALLOCATORS[rule](FLEET, out, req, state)
            else:
                alloc = ct.ALLOCATORS[rule](FLEET, out, req)
            np.testing.assert_allclose(res.curtailed_mw[t], alloc.curtailed_mw, atol=1e-12)

    def test_metrics(self):
        x = np.array([[1.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        # Excess is 3 MW then 1 MW; the last-connected generator takes both.
        res = ct.simulate(FLEET, x, 9.0, "LIFO")
        assert res.event_count.tolist() == [0, 0, 2]
        np.testing.assert_allclose(res.capacity_factor, [1.0, 0.5, 1 / 3])
        np.testing.assert_allclose(res.capacity_factor_uncurtailed, [1.0, 0.5, 1.0])
        np.testing.assert_allclose(res.cf_reduction, [0.0, 0.0, 2 / 3])
        assert res.fairness_variance == pytest.approx(np.var([1.0, 0.5, 1 / 3]))

    def test_demand_series_and_errors(self):
        res = ct.simulate(FLEET, self.x[:, :3], [0.0, 100.0, 0.0], "PRO_RATA")
        assert res.curtailed_mw[1].sum() == 0
        assert res.generated_mw[0].sum() == pytest.approx(0, abs=1e-12)
        with pytest.raises(ValueError):
            ct.simulate(FLEET, self.x[:2], 6.0, "LIFO")
        with pytest.raises(ValueError):
            ct.simulate(FLEET, self.x, [1.0, 2.0], "LIFO")

    def test_csv_outputs(self, tmp_path):
        ts = np.datetime64("2001-01-01T00", "h") + np.arange(2) * np.timedelta64(1, "h")
        res = ct.simulate(FLEET, np.ones((3, 2)), 6.0, "FRR", timestamps=ts)
        res.write_timeline_csv(tmp_path / "t.csv", ["seed=1"])
        res.write_metrics_csv(tmp_path / "m.csv")
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "# seed=1"
        rows = list(csv.DictReader(lines[1:]))
        assert len(rows) == 6
        assert rows[0]["timestamp"] == "2001-01-01T00:00Z" and rows[0]["generator_id"] == "gen1"
        assert float(rows[0]["curtailed_mw"]) == 6.0
        m = list(csv.DictReader((tmp_path / "m.csv").read_text().splitlines()))
        assert [r["generator_id"] for r in m] == ["gen1", "gen2", "gen3"]
        assert set(m[0]) == {"generator_id", "cf", "cf_uncurtailed", "events"}
