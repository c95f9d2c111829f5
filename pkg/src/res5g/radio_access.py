"""User-to-cell association via link budgets.

This is a deliberately simple stand-in for a full network planner: each
user is assigned greedily to the admissible cell with the lowest path
loss that still has capacity headroom, and each cell's transmit power is
then lowered to the smallest level (capped at the configured maximum)
that still closes the budget of its worst served user.

Path loss follows the TR 38.901 urban-macro NLOS model. Distances below
the model's 10 m validity floor are clamped; distances beyond its 5 km
ceiling fall back to free-space loss plus a configurable offset and are
logged. Admissibility compares the path loss against the maximum
allowable path loss derived from the demand's required SNR.

Capacity is a Shannon-style bandwidth-share estimate: a user consumes
demand / (effective bandwidth x spatial multiplier x log2(1 + SNR)) of
its serving cell, where the effective bandwidth is the occupied OFDM
bandwidth (channel bandwidth x sampling factor x used/total subcarriers)
and the spatial multiplier is 1/spatial_duty for beam-cycling cells.

Everything here is deterministic: identical inputs yield identical
results, with no randomness involved.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .cell_power import CellLoad, CellRadioConfig
from .errors import DemandUnservableError
from .units import dbm_to_watts

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT_MPS = 299792458.0
THERMAL_NOISE_DBM_PER_HZ = -174.0

#: TR 38.901 UMa validity bounds on the 2D distance.
UMA_MIN_DISTANCE_M = 10.0
UMA_MAX_DISTANCE_M = 5000.0

#: Effective environment height assumed by the UMa breakpoint distance.
UMA_ENVIRONMENT_HEIGHT_M = 1.0


@dataclass(frozen=True)
class UserTerminal:
    """One outdoor user: position, fixed demand and terminal radio data."""

    x: float
    y: float
    demand_mbps: float
    antenna_height_m: float = 1.5
    tx_power_max_dbm: float = 23.0
    antenna_gain_dbi: float = 0.0

    def __post_init__(self) -> None:
        if self.demand_mbps <= 0.0:
            raise ValueError(f"user demand must be positive, got {self.demand_mbps}")


@dataclass(frozen=True)
class BaseStationSite:
    """One rooftop site carrying co-located cells on different bands."""

    x: float
    y: float
    building_altitude_m: float
    antenna_height_m: float
    cells: tuple[CellRadioConfig, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("a site needs at least one cell")


@dataclass(frozen=True)
class McsEntry:
    """One modulation/coding operating point: required SNR and the
    spectral efficiency it delivers."""

    snr_db: float
    bits_per_hz: float

    def __post_init__(self) -> None:
        if self.bits_per_hz <= 0.0:
            raise ValueError("spectral efficiency must be positive")


#: CQI-style SNR switching points with their spectral efficiencies,
#: a standard LTE/NR link-level mapping.
DEFAULT_MCS_TABLE: tuple[McsEntry, ...] = (
    McsEntry(-6.7, 0.1523),
    McsEntry(-4.7, 0.2344),
    McsEntry(-2.3, 0.3770),
    McsEntry(0.2, 0.6016),
    McsEntry(2.4, 0.8770),
    McsEntry(4.3, 1.1758),
    McsEntry(5.9, 1.4766),
    McsEntry(8.1, 1.9141),
    McsEntry(10.3, 2.4063),
    McsEntry(11.7, 2.7305),
    McsEntry(14.1, 3.3223),
    McsEntry(16.3, 3.9023),
    McsEntry(18.7, 4.5234),
    McsEntry(21.0, 5.1152),
    McsEntry(22.7, 5.5547),
)


@dataclass(frozen=True)
class AssociationResult:
    """Outcome of one association pass.

    ``assignments`` holds, per user, the serving (site, cell) index pair
    or ``None``; ``loads`` and ``required_tx_dbm`` are indexed
    [site][cell], with ``-inf`` dBm marking a cell that serves nobody and
    transmits nothing. ``fallback_links`` counts user-cell pairs evaluated
    with the out-of-range free-space fallback.
    """

    loads: tuple[tuple[CellLoad, ...], ...]
    assignments: tuple[tuple[int, int] | None, ...]
    required_tx_dbm: tuple[tuple[float, ...], ...]
    served_fraction: float
    fallback_links: int


def free_space_path_loss(distance_m: float, frequency_mhz: float) -> float:
    """Friis free-space loss in dB for a distance in metres and a carrier
    in MHz: 20 log10(d_km) + 20 log10(f_MHz) + 32.44."""
    if distance_m <= 0.0 or frequency_mhz <= 0.0:
        raise ValueError("distance and frequency must be positive")
    return 20.0 * math.log10(distance_m / 1000.0) + 20.0 * math.log10(frequency_mhz) + 32.44


def uma_nlos_path_loss(
    distance_2d_m: float, frequency_mhz: float, bs_height_m: float, ut_height_m: float
) -> float:
    """TR 38.901 urban-macro NLOS path loss in dB (lower-bounded by the
    LOS curve, as the standard prescribes)."""
    f_ghz = frequency_mhz / 1000.0
    height_gap = bs_height_m - ut_height_m
    d3d = math.hypot(distance_2d_m, height_gap)
    h_bs_eff = bs_height_m - UMA_ENVIRONMENT_HEIGHT_M
    h_ut_eff = ut_height_m - UMA_ENVIRONMENT_HEIGHT_M
    breakpoint_m = 4.0 * h_bs_eff * h_ut_eff * (frequency_mhz * 1e6) / SPEED_OF_LIGHT_MPS
    if distance_2d_m <= breakpoint_m:
        pl_los = 28.0 + 22.0 * math.log10(d3d) + 20.0 * math.log10(f_ghz)
    else:
        pl_los = (
            28.0
            + 40.0 * math.log10(d3d)
            + 20.0 * math.log10(f_ghz)
            - 9.0 * math.log10(breakpoint_m ** 2 + height_gap ** 2)
        )
    pl_nlos = (
        13.54
        + 39.08 * math.log10(d3d)
        + 20.0 * math.log10(f_ghz)
        - 0.6 * (ut_height_m - 1.5)
    )
    return max(pl_los, pl_nlos)


def path_loss(
    site: BaseStationSite,
    cell: CellRadioConfig,
    user: UserTerminal,
    fallback_offset_db: float = 0.0,
) -> tuple[float, bool]:
    """Path loss in dB between a site's cell and a user.

    Returns ``(loss, used_fallback)``; distances beyond the UMa validity
    ceiling use free-space loss plus ``fallback_offset_db``.
    """
    distance = math.hypot(user.x - site.x, user.y - site.y)
    if distance > UMA_MAX_DISTANCE_M:
        logger.debug(
            "2D distance %.0f m exceeds the UMa validity bound; free-space fallback", distance
        )
        return free_space_path_loss(distance, cell.frequency_mhz) + fallback_offset_db, True
    clamped = max(distance, UMA_MIN_DISTANCE_M)
    return (
        uma_nlos_path_loss(clamped, cell.frequency_mhz, site.antenna_height_m, user.antenna_height_m),
        False,
    )


def effective_bandwidth_hz(cell: CellRadioConfig) -> float:
    """Occupied OFDM bandwidth: channel bandwidth x sampling factor x
    used/total subcarrier ratio."""
    return cell.bandwidth_hz * cell.sampling_factor * cell.used_subcarriers / cell.total_subcarriers


def capacity_multiplier(cell: CellRadioConfig) -> float:
    """Spatial reuse factor of a beam-cycling cell: a cell visiting each
    direction for a fraction S of the time serves 1/S directions."""
    if cell.spatial_duty > 0.0:
        return 1.0 / cell.spatial_duty
    return 1.0


def _margined_eirp_dbm(cell: CellRadioConfig) -> float:
    return (
        cell.max_tx_power_dbm
        + cell.antenna_gain_dbi
        - cell.feeder_loss_db
        - cell.interference_margin_db
        - cell.doppler_margin_db
        - cell.fade_margin_db
        - cell.shadow_margin_db
        - cell.implementation_loss_db
        + cell.soft_handover_gain_db
    )


def required_snr_db(
    cell: CellRadioConfig,
    demand_mbps: float,
    mcs_table: tuple[McsEntry, ...] = DEFAULT_MCS_TABLE,
) -> tuple[float, float]:
    """Required SNR and occupied user bandwidth for a demand.

    Among the table rows whose bandwidth need fits the cell, picks the
    one maximising the link budget (minimum snr - 10 log10(efficiency)).
    """
    if demand_mbps <= 0.0:
        raise ValueError(f"demand must be positive, got {demand_mbps}")
    budget_hz = effective_bandwidth_hz(cell) * capacity_multiplier(cell)
    best: tuple[float, float, float] | None = None
    for entry in mcs_table:
        bandwidth_hz = demand_mbps * 1e6 / entry.bits_per_hz
        if bandwidth_hz > budget_hz:
            continue
        figure = entry.snr_db - 10.0 * math.log10(entry.bits_per_hz)
        if best is None or figure < best[0]:
            best = (figure, entry.snr_db, bandwidth_hz)
    if best is None:
        raise DemandUnservableError(
            f"no MCS row can carry {demand_mbps} Mbit/s within "
            f"{budget_hz / 1e6:.1f} MHz on the {cell.frequency_mhz:.0f} MHz cell"
        )
    return best[1], best[2]


def max_allowable_path_loss(
    cell: CellRadioConfig,
    demand_mbps: float,
    mcs_table: tuple[McsEntry, ...] = DEFAULT_MCS_TABLE,
) -> float:
    """Largest path loss under which the demand's budget still closes at
    maximum transmit power.

    Budget: max TX + antenna gain - feeder loss - margins + handover gain
    minus the receiver sensitivity (thermal floor over the user bandwidth
    plus noise figure plus required SNR).
    """
    snr_db, bandwidth_hz = required_snr_db(cell, demand_mbps, mcs_table)
    sensitivity_dbm = (
        THERMAL_NOISE_DBM_PER_HZ
        + 10.0 * math.log10(bandwidth_hz)
        + cell.noise_figure_db
        + snr_db
    )
    return _margined_eirp_dbm(cell) - sensitivity_dbm


def capacity_share(
    cell: CellRadioConfig,
    demand_mbps: float,
    path_loss_db: float,
) -> float:
    """Fraction of the cell one user consumes.

    SNR is taken over the full effective bandwidth at margined maximum
    EIRP; the share is demand over the cell's spatially-multiplied
    Shannon capacity at that SNR.
    """
    bandwidth = effective_bandwidth_hz(cell)
    noise_dbm = THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth) + cell.noise_figure_db
    snr_db = _margined_eirp_dbm(cell) - path_loss_db - noise_dbm
    rate_per_hz = math.log2(1.0 + 10.0 ** (snr_db / 10.0))
    if rate_per_hz <= 0.0:
        return math.inf
    return demand_mbps * 1e6 / (bandwidth * capacity_multiplier(cell) * rate_per_hz)


def associate(
    users: tuple[UserTerminal, ...] | list[UserTerminal],
    sites: tuple[BaseStationSite, ...] | list[BaseStationSite],
    mcs_table: tuple[McsEntry, ...] = DEFAULT_MCS_TABLE,
    antenna_policy: str = "all",
    full_activation_users: int = 10,
    fallback_offset_db: float = 0.0,
    tx_power_policy: str = "budget-min",
) -> AssociationResult:
    """Greedy association of users to cells.

    Users are processed in input order; each takes the admissible cell
    (path loss within the demand's allowance, pilot room left, capacity
    share available) with the lowest path loss, ties broken by site then
    cell index.

    Under the default ``budget-min`` transmit policy a cell's power is
    reduced by the smallest remaining budget slack among its served
    users (idle cells transmit nothing). Under ``max`` every cell
    broadcasts at its configured maximum the whole time, which models a
    network that never powers down its carriers; ``required_tx_dbm``
    still reports the budget minimum either way.
    """
    if tx_power_policy not in ("budget-min", "max"):
        raise ValueError(f"unknown transmit power policy {tx_power_policy!r}")
    cell_keys = [(s, c) for s, site in enumerate(sites) for c in range(len(site.cells))]
    losses: dict[tuple[int, int], list[float]] = {key: [] for key in cell_keys}
    mapl_cache: dict[tuple[int, int, float], float | None] = {}
    shares_used = {key: 0.0 for key in cell_keys}
    served_users: dict[tuple[int, int], list[int]] = {key: [] for key in cell_keys}
    assignments: list[tuple[int, int] | None] = []
    fallback_links = 0

    for s, site in enumerate(sites):
        for c, cell in enumerate(site.cells):
            for user in users:
                loss, used_fallback = path_loss(site, cell, user, fallback_offset_db)
                losses[(s, c)].append(loss)
                fallback_links += used_fallback

    for u, user in enumerate(users):
        candidates: list[tuple[float, int, int]] = []
        for s, site in enumerate(sites):
            for c, cell in enumerate(site.cells):
                key = (s, c, user.demand_mbps)
                if key not in mapl_cache:
                    try:
                        mapl_cache[key] = max_allowable_path_loss(cell, user.demand_mbps, mcs_table)
                    except DemandUnservableError:
                        mapl_cache[key] = None
                mapl = mapl_cache[key]
                if mapl is None:
                    continue
                loss = losses[(s, c)][u]
                if loss <= mapl:
                    candidates.append((loss, s, c))
        candidates.sort()
        chosen: tuple[int, int] | None = None
        for loss, s, c in candidates:
            cell = sites[s].cells[c]
            pilot_room = (len(served_users[(s, c)]) + 1) * cell.pilot_reuse <= (
                cell.coherence_block_samples
            )
            share = capacity_share(cell, user.demand_mbps, loss)
            if pilot_room and shares_used[(s, c)] + share <= 1.0 + 1e-12:
                shares_used[(s, c)] += share
                served_users[(s, c)].append(u)
                chosen = (s, c)
                break
        assignments.append(chosen)

    loads: list[tuple[CellLoad, ...]] = []
    required_tx: list[tuple[float, ...]] = []
    for s, site in enumerate(sites):
        site_loads: list[CellLoad] = []
        site_tx: list[float] = []
        for c, cell in enumerate(site.cells):
            members = served_users[(s, c)]
            k_ue = len(members)
            broadcast_w = dbm_to_watts(cell.max_tx_power_dbm) if tx_power_policy == "max" else 0.0
            if k_ue == 0:
                site_loads.append(CellLoad(0, 0, broadcast_w, 0.0, 0.0))
                site_tx.append(-math.inf)
                continue
            min_slack = min(
                mapl_cache[(s, c, users[u].demand_mbps)] - losses[(s, c)][u] for u in members
            )
            tx_dbm = min(cell.max_tx_power_dbm, cell.max_tx_power_dbm - min_slack)
            tx_w = dbm_to_watts(tx_dbm) if tx_power_policy == "budget-min" else broadcast_w
            demand_sum = sum(users[u].demand_mbps for u in members)
            m_bs = _active_antennas(cell, k_ue, antenna_policy, full_activation_users)
            site_loads.append(
                CellLoad(
                    served_users=k_ue,
                    active_antennas=m_bs,
                    transmit_power_w=tx_w,
                    traffic_dl_gbps=demand_sum * cell.duty_dl / 1000.0,
                    traffic_ul_gbps=demand_sum * cell.duty_ul / 1000.0,
                )
            )
            site_tx.append(tx_dbm)
        loads.append(tuple(site_loads))
        required_tx.append(tuple(site_tx))

    if fallback_links:
        logger.warning("%d user-cell links used the free-space fallback", fallback_links)
    served = sum(a is not None for a in assignments)
    fraction = served / len(users) if users else 1.0
    return AssociationResult(
        loads=tuple(loads),
        assignments=tuple(assignments),
        required_tx_dbm=tuple(required_tx),
        served_fraction=fraction,
        fallback_links=fallback_links,
    )


def _active_antennas(
    cell: CellRadioConfig, served: int, policy: str, full_activation_users: int
) -> int:
    if served == 0:
        return 0
    if policy == "all":
        return cell.max_antenna_elements
    if policy == "proportional":
        fraction = min(1.0, served / max(1, full_activation_users))
        return max(1, math.ceil(cell.max_antenna_elements * fraction))
    raise ValueError(f"unknown antenna policy {policy!r}")
