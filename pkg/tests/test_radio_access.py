import itertools
import math
from dataclasses import replace

import pytest

import oracles
from res5g.cell_power import CellRadioConfig
from res5g.errors import DemandUnservableError
from res5g.radio_access import (
    DEFAULT_MCS_TABLE,
    BaseStationSite,
    McsEntry,
    UserTerminal,
    associate,
    capacity_share,
    effective_bandwidth_hz,
    free_space_path_loss,
    max_allowable_path_loss,
    path_loss,
    uma_nlos_path_loss,
)
from res5g.scenario_io import generate_users, scenario_from_dict
from res5g.sim_engine import _cached_association
from res5g.units import dbm_to_watts

CELL_800 = CellRadioConfig(
    frequency_mhz=800.0,
    bandwidth_hz=80e6,
    max_antenna_elements=1,
    antenna_gain_dbi=16.0,
    feeder_loss_db=2.0,
    max_tx_power_dbm=46.0,
    noise_figure_db=8.0,
    shadow_margin_db=12.8,
    implementation_loss_db=0.0,
)

CELL_3500 = CellRadioConfig(
    frequency_mhz=3500.0,
    bandwidth_hz=120e6,
    max_antenna_elements=64,
    antenna_gain_dbi=24.0,
    feeder_loss_db=3.0,
    max_tx_power_dbm=53.0,
    noise_figure_db=7.0,
    shadow_margin_db=10.0,
    implementation_loss_db=3.0,
    spatial_duty=0.25,
)

SITE = BaseStationSite(0.0, 0.0, 34.0, 39.0, (CELL_800, CELL_3500))


def user_at(x, demand=10.0):
    return UserTerminal(x=x, y=0.0, demand_mbps=demand)


class TestPathLoss:
    def test_monotone_in_distance(self):
        near, _ = path_loss(SITE, CELL_800, user_at(100.0))
        far, _ = path_loss(SITE, CELL_800, user_at(200.0))
        assert far > near

    def test_monotone_in_frequency(self):
        low, _ = path_loss(SITE, CELL_800, user_at(150.0))
        high, _ = path_loss(SITE, CELL_3500, user_at(150.0))
        assert high > low

    def test_free_space_fallback_value(self):
        assert free_space_path_loss(1000.0, 800.0) == pytest.approx(90.5, abs=0.01)
        assert free_space_path_loss(1000.0, 800.0) == pytest.approx(
            oracles.friis_path_loss(1000.0, 800.0), rel=1e-12
        )

    def test_out_of_range_uses_fallback(self):
        loss, used_fallback = path_loss(SITE, CELL_800, user_at(6000.0), fallback_offset_db=20.0)
        assert used_fallback
        assert loss == pytest.approx(free_space_path_loss(6000.0, 800.0) + 20.0, rel=1e-12)

    def test_below_validity_floor_clamps(self):
        at_5, _ = path_loss(SITE, CELL_800, user_at(5.0))
        at_10, _ = path_loss(SITE, CELL_800, user_at(10.0))
        assert at_5 == pytest.approx(at_10, rel=1e-12)

    def test_nlos_floor_dominates_los(self):
        # The NLOS expression is lower-bounded by the LOS curve.
        pl = uma_nlos_path_loss(80.0, 800.0, 39.0, 1.5)
        pl1 = 28.0 + 22.0 * math.log10(math.hypot(80.0, 37.5)) + 20.0 * math.log10(0.8)
        assert pl >= pl1


class TestMaxAllowablePathLoss:
    def test_budget_arithmetic(self):
        cell = replace(
            CELL_800,
            interference_margin_db=0.0,
            doppler_margin_db=0.0,
            fade_margin_db=0.0,
            shadow_margin_db=0.0,
            noise_figure_db=0.0,
        )
        # One-row table tuned so the sensitivity is exactly -100 dBm for
        # a 1 Mbit/s demand: -174 + 60 + 0 + 14 = -100.
        table = (McsEntry(14.0, 1.0),)
        assert max_allowable_path_loss(cell, 1.0, table) == pytest.approx(160.0, rel=1e-12)

    def test_shadow_margin_shifts_budget(self):
        base = max_allowable_path_loss(CELL_800, 10.0)
        raised = max_allowable_path_loss(replace(CELL_800, shadow_margin_db=15.8), 10.0)
        assert base - raised == pytest.approx(3.0, rel=1e-9)

    def test_unservable_demand_rejected(self):
        with pytest.raises(DemandUnservableError):
            max_allowable_path_loss(CELL_800, 1e6)

    def test_matches_link_budget_oracle(self):
        table = (McsEntry(5.0, 2.0),)
        demand = 20.0
        bw = demand * 1e6 / 2.0
        s_rx = -174.0 + 10.0 * math.log10(bw) + CELL_800.noise_figure_db + 5.0
        want = oracles.link_budget_mapl(46.0, 16.0, 2.0, 2.0, 3.0, 10.0, 12.8, 0.0, 0.0, s_rx)
        assert max_allowable_path_loss(CELL_800, demand, table) == pytest.approx(want, rel=1e-12)


class TestAssociate:
    def test_no_users(self):
        result = associate([], [SITE])
        assert all(load.served_users == 0 for load in result.loads[0])
        assert all(load.transmit_power_w == 0.0 for load in result.loads[0])
        assert result.served_fraction == 1.0

    def test_single_user_lands_on_lowest_loss_cell(self):
        result = associate([user_at(120.0, demand=10.0)], [SITE])
        assert result.assignments == ((0, 0),)  # the 800 MHz cell
        load = result.loads[0][0]
        assert load.served_users == 1
        assert load.traffic_dl_gbps == pytest.approx(10.0 * 0.75 / 1000.0)
        assert load.traffic_ul_gbps == pytest.approx(10.0 * 0.25 / 1000.0)

    def test_transmit_power_closes_worst_budget(self):
        users = [user_at(80.0), user_at(350.0)]
        result = associate(users, [SITE])
        pl_worst, _ = path_loss(SITE, CELL_800, users[1])
        mapl = max_allowable_path_loss(CELL_800, 10.0)
        expected_dbm = CELL_800.max_tx_power_dbm - (mapl - pl_worst)
        assert result.required_tx_dbm[0][0] == pytest.approx(expected_dbm, rel=1e-9)
        assert result.loads[0][0].transmit_power_w == pytest.approx(
            dbm_to_watts(expected_dbm), rel=1e-9
        )

    def test_transmit_power_never_exceeds_maximum(self):
        config = scenario_from_dict({})
        users = generate_users(config, 3)
        result = associate(users, config.base_stations())
        for s, site in enumerate(config.base_stations()):
            for c, cell in enumerate(site.cells):
                assert result.loads[s][c].transmit_power_w <= dbm_to_watts(cell.max_tx_power_dbm) + 1e-12

    def test_every_served_user_is_feasible(self):
        config = scenario_from_dict({})
        users = generate_users(config, 5)
        result = associate(users, config.base_stations())
        sites = config.base_stations()
        served = 0
        for u, assignment in enumerate(result.assignments):
            if assignment is None:
                continue
            served += 1
            s, c = assignment
            loss, _ = path_loss(sites[s], sites[s].cells[c], users[u])
            mapl = max_allowable_path_loss(sites[s].cells[c], users[u].demand_mbps)
            assert loss <= mapl + 1e-9
        assert result.served_fraction == pytest.approx(served / len(users))

    def test_deterministic(self):
        config = scenario_from_dict({})
        users = generate_users(config, 11)
        a = associate(users, config.base_stations())
        b = associate(users, config.base_stations())
        assert a == b

    def test_greedy_overflow_matches_brute_force(self):
        # Two single-cell sites; three users closer to site A; a two-sample
        # coherence block caps site A's cell at exactly two pilot slots.
        cell = replace(CELL_800, coherence_bandwidth_hz=2.0, coherence_time_s=1.0)
        site_a = BaseStationSite(0.0, 0.0, 34.0, 39.0, (cell,))
        site_b = BaseStationSite(300.0, 0.0, 34.0, 39.0, (cell,))
        users = [user_at(50.0), user_at(60.0), user_at(70.0)]

        result = associate(users, [site_a, site_b])
        assert result.assignments == ((0, 0), (0, 0), (1, 0))

        def feasible(assignment):
            served = {0: [], 1: []}
            for u, site_index in enumerate(assignment):
                if site_index is None:
                    continue
                site = (site_a, site_b)[site_index]
                loss, _ = path_loss(site, cell, users[u])
                if loss > max_allowable_path_loss(cell, users[u].demand_mbps):
                    return False
                served[site_index].append(loss)
            for losses in served.values():
                if len(losses) * cell.pilot_reuse > cell.coherence_block_samples:
                    return False
                if sum(capacity_share(cell, 10.0, loss) for loss in losses) > 1.0 + 1e-12:
                    return False
            return True

        best_served = max(
            sum(a is not None for a in assignment)
            for assignment in itertools.product((0, 1, None), repeat=3)
            if feasible(assignment)
        )
        greedy_assignment = tuple(a if a is None else a[0] for a in result.assignments)
        assert feasible(greedy_assignment)
        assert sum(a is not None for a in greedy_assignment) == best_served == 3

    def test_stable_under_uniform_margin_shift(self):
        # Few users, ample capacity and slack: a small uniform margin
        # change must not alter any argmin decision.
        users = [user_at(90.0), user_at(150.0), user_at(210.0)]
        shifted_cells = tuple(
            replace(c, fade_margin_db=c.fade_margin_db - 1.0) for c in SITE.cells
        )
        shifted_site = BaseStationSite(SITE.x, SITE.y, 34.0, 39.0, shifted_cells)
        before = associate(users, [SITE])
        after = associate(users, [shifted_site])
        assert before.assignments == after.assignments

    def test_max_power_policy_broadcasts_everywhere(self):
        users = [user_at(100.0)]
        result = associate(users, [SITE], tx_power_policy="max")
        assert result.loads[0][0].transmit_power_w == pytest.approx(dbm_to_watts(46.0))
        # The idle massive MIMO cell still transmits at its maximum.
        assert result.loads[0][1].served_users == 0
        assert result.loads[0][1].transmit_power_w == pytest.approx(dbm_to_watts(53.0))

    def test_proportional_antenna_policy(self):
        users = [user_at(60.0 + 10.0 * i) for i in range(5)]
        result = associate(
            users, [SITE], antenna_policy="proportional", full_activation_users=10
        )
        # All users land on the 800 MHz single-element cell; force them
        # to the MIMO cell by checking the policy helper indirectly.
        from res5g.radio_access import _active_antennas

        assert _active_antennas(CELL_3500, 5, "proportional", 10) == 32
        assert _active_antennas(CELL_3500, 20, "proportional", 10) == 64
        assert _active_antennas(CELL_3500, 0, "proportional", 10) == 0
        assert result.loads[0][0].active_antennas == 1


class TestCapacityShare:
    def test_linear_in_demand(self):
        loss, _ = path_loss(SITE, CELL_800, user_at(200.0))
        assert capacity_share(CELL_800, 20.0, loss) == pytest.approx(
            2.0 * capacity_share(CELL_800, 10.0, loss), rel=1e-12
        )

    def test_spatial_duty_multiplies_capacity(self):
        loss = 120.0
        base = capacity_share(replace(CELL_3500, spatial_duty=0.0), 10.0, loss)
        cycled = capacity_share(CELL_3500, 10.0, loss)
        assert cycled == pytest.approx(base / 4.0, rel=1e-12)

    def test_effective_bandwidth(self):
        assert effective_bandwidth_hz(CELL_800) == pytest.approx(80e6 * 1.536 * 320 / 512)


class TestCachedAssociation:
    def test_cache_returns_identical_result(self):
        config = scenario_from_dict({})
        a = _cached_association(config, 123)
        b = _cached_association(config, 123)
        assert a is b
