"""Per-step power consumption of one 5G cell.

The model treats every cell as a (possibly single-element) massive MIMO
node: the total draw is the circuit power of the cell node, the power
amplifier, actively-removed heat scaled by the cooling loss factor, and
auxiliary equipment. Circuit power itself splits into a fixed part,
transceiver chains, MMSE channel estimation, coding/decoding, backhaul
transport and MMSE signal processing, the last two estimated from flop
counts per coherence block divided by the hardware's computational
efficiency.

All functions are pure; cells can be evaluated in parallel within a step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoherenceLoadError


@dataclass(frozen=True)
class CellRadioConfig:
    """Static radio parameters of one cell.

    Besides the quantities consumed by the power model (bandwidth,
    antenna counts, coherence block, duty cycles), this carries the link
    budget inputs (gains, margins, subcarrier usage, sampling factor)
    used by the access planner.
    """

    frequency_mhz: float
    bandwidth_hz: float
    max_antenna_elements: int
    antenna_gain_dbi: float
    feeder_loss_db: float
    max_tx_power_dbm: float
    noise_figure_db: float
    shadow_margin_db: float
    implementation_loss_db: float
    spatial_duty: float = 0.0
    pilot_reuse: int = 1
    coherence_time_s: float = 0.05
    coherence_bandwidth_hz: float = 1e6
    duty_dl: float = 0.75
    duty_ul: float = 0.25
    used_subcarriers: int = 320
    total_subcarriers: int = 512
    sampling_factor: float = 1.536
    interference_margin_db: float = 2.0
    doppler_margin_db: float = 3.0
    fade_margin_db: float = 10.0
    soft_handover_gain_db: float = 0.0

    def __post_init__(self) -> None:
        if self.frequency_mhz <= 0.0 or self.bandwidth_hz <= 0.0:
            raise ValueError("frequency and bandwidth must be positive")
        if self.max_antenna_elements < 1:
            raise ValueError("a cell needs at least one antenna element")
        if abs(self.duty_dl + self.duty_ul - 1.0) > 1e-9:
            raise ValueError(
                f"TDD duty cycles must sum to 1 (got DL={self.duty_dl}, UL={self.duty_ul})"
            )
        if not 0.0 <= self.spatial_duty <= 1.0:
            raise ValueError(f"spatial duty must lie in [0, 1], got {self.spatial_duty}")
        if self.pilot_reuse < 1:
            raise ValueError("pilot reuse factor must be >= 1")
        if self.coherence_block_samples < 1.0:
            raise ValueError("coherence block must hold at least one sample")
        if self.used_subcarriers > self.total_subcarriers:
            raise ValueError(
                f"used subcarriers {self.used_subcarriers} exceed total {self.total_subcarriers}"
            )
        if self.used_subcarriers < 1 or self.sampling_factor <= 0.0:
            raise ValueError("subcarrier count and sampling factor must be positive")

    @property
    def coherence_block_samples(self) -> float:
        """Samples per coherence block (coherence bandwidth x time)."""
        return self.coherence_bandwidth_hz * self.coherence_time_s


@dataclass(frozen=True)
class CellEnergyConfig:
    """Static energy parameters of one cell and its equipment room."""

    fixed_power_w: float = 10.0
    oscillator_power_w: float = 0.2
    circuit_power_w: float = 0.4  # per active antenna element
    coding_power_w_per_gbps: float = 0.1
    decoding_power_w_per_gbps: float = 0.8
    backhaul_power_w_per_gbps: float = 0.25
    auxiliary_power_w: float = 0.0
    compute_efficiency_flops_per_w: float = 75e9
    amplifier_efficiency: float = 0.35
    cooling_loss: float = 0.1
    circuit_heat_coeff: float = 0.9
    room_length_m: float = 7.0
    room_width_m: float = 5.0
    room_height_m: float = 3.5
    room_target_temp_c: float = 18.0
    room_heat_coeff: float = 2.037  # W/(m^2*K)
    dc_loss: float = 0.075
    building_altitude_m: float = 34.0

    def __post_init__(self) -> None:
        if not 0.0 < self.amplifier_efficiency <= 1.0:
            raise ValueError(
                f"amplifier efficiency must lie in (0, 1], got {self.amplifier_efficiency}"
            )
        if not 0.0 <= self.cooling_loss < 1.0:
            raise ValueError(f"cooling loss must lie in [0, 1), got {self.cooling_loss}")
        if not 0.0 <= self.dc_loss < 1.0:
            raise ValueError(f"DC loss must lie in [0, 1), got {self.dc_loss}")
        for name in (
            "fixed_power_w",
            "oscillator_power_w",
            "circuit_power_w",
            "coding_power_w_per_gbps",
            "decoding_power_w_per_gbps",
            "backhaul_power_w_per_gbps",
            "auxiliary_power_w",
        ):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if self.compute_efficiency_flops_per_w <= 0.0:
            raise ValueError("computational efficiency must be positive")
        if min(self.room_length_m, self.room_width_m, self.room_height_m) <= 0.0:
            raise ValueError("equipment room dimensions must be positive")
        if self.room_heat_coeff <= 0.0:
            raise ValueError("room heat transfer coefficient must be positive")
        if not 0.0 <= self.circuit_heat_coeff <= 1.0:
            raise ValueError("circuit heat transfer coefficient must lie in [0, 1]")

    @property
    def room_surface_m2(self) -> float:
        """Total wall/floor/ceiling surface of the equipment container."""
        a, b, h = self.room_length_m, self.room_width_m, self.room_height_m
        return 2.0 * (a * b + a * h + b * h)


@dataclass(frozen=True)
class CellLoad:
    """Per-step load of one cell as produced by the access planner."""

    served_users: int
    active_antennas: int
    transmit_power_w: float
    traffic_dl_gbps: float
    traffic_ul_gbps: float

    def __post_init__(self) -> None:
        if self.served_users < 0 or self.active_antennas < 0:
            raise ValueError("user and antenna counts must be >= 0")
        if self.transmit_power_w < 0.0:
            raise ValueError("transmit power must be >= 0")
        if self.traffic_dl_gbps < 0.0 or self.traffic_ul_gbps < 0.0:
            raise ValueError("traffic must be >= 0")


IDLE_LOAD = CellLoad(0, 0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PowerBreakdown:
    """Component-wise power draw of one cell in watts.

    ``p_cool`` is the raw heat-removal power; the total scales it by
    1/(1 - cooling_loss): p_total = p_cp + p_pa + p_cool/(1 - loss) + p_aux.
    """

    p_pa: float
    p_fix: float
    p_tc: float
    p_ce: float
    p_cd: float
    p_bh: float
    p_sp: float
    p_cp: float
    p_cool: float
    p_aux: float
    p_total: float


def _flop_prefactor(radio: CellRadioConfig, energy: CellEnergyConfig) -> float:
    # 3 B_w / tau_c flop-blocks per second, divided by flops-per-watt.
    return 3.0 * radio.bandwidth_hz / (
        radio.coherence_block_samples * energy.compute_efficiency_flops_per_w
    )


def _pilot_samples(load: CellLoad, radio: CellRadioConfig) -> float:
    tau_p = radio.pilot_reuse * load.served_users
    tau_c = radio.coherence_block_samples
    if tau_p > tau_c:
        raise CoherenceLoadError(
            f"{load.served_users} users need {tau_p} pilot samples but one "
            f"coherence block holds only {tau_c}"
        )
    return float(tau_p)


def amplifier_power(load: CellLoad, energy: CellEnergyConfig) -> float:
    """Power drawn by the power amplifier: transmit power over efficiency."""
    return load.transmit_power_w / energy.amplifier_efficiency


def channel_estimation_power(
    load: CellLoad, radio: CellRadioConfig, energy: CellEnergyConfig
) -> float:
    """MMSE channel estimation power from its per-block flop count."""
    tau_p = _pilot_samples(load, radio)
    m = load.active_antennas
    return (
        _flop_prefactor(radio, energy) * load.served_users * (m * tau_p + m * m)
    )


def signal_processing_power(
    load: CellLoad, radio: CellRadioConfig, energy: CellEnergyConfig
) -> float:
    """MMSE combining/precoding power from its per-block flop count.

    Uplink and downlink data samples split the non-pilot remainder of the
    coherence block according to the TDD duty cycles.
    """
    tau_p = _pilot_samples(load, radio)
    tau_c = radio.coherence_block_samples
    payload = tau_c - tau_p
    tau_u = radio.duty_ul * payload
    tau_d = radio.duty_dl * payload
    m = float(load.active_antennas)
    k = float(load.served_users)
    flops = (
        m * k * (tau_u + tau_d)
        + (3.0 * m * m + m) * k / 2.0
        + m ** 3 / 3.0
        + 2.0 * m
        + m * tau_p * (tau_p - k)
        + m * k
    )
    return _flop_prefactor(radio, energy) * flops


def _circuit_components(
    load: CellLoad, radio: CellRadioConfig, energy: CellEnergyConfig
) -> tuple[float, float, float, float, float, float]:
    p_fix = energy.fixed_power_w
    p_tc = load.active_antennas * energy.circuit_power_w + energy.oscillator_power_w
    p_ce = channel_estimation_power(load, radio, energy)
    p_cd = (
        energy.coding_power_w_per_gbps * load.traffic_dl_gbps
        + energy.decoding_power_w_per_gbps * load.traffic_ul_gbps
    )
    p_bh = energy.backhaul_power_w_per_gbps * (load.traffic_dl_gbps + load.traffic_ul_gbps)
    p_sp = signal_processing_power(load, radio, energy)
    return p_fix, p_tc, p_ce, p_cd, p_bh, p_sp


def transceiver_power(
    load: CellLoad, radio: CellRadioConfig, energy: CellEnergyConfig
) -> float:
    """Circuit power of the cell node: fixed part, transceiver chains plus
    one local oscillator, channel estimation, coding/decoding, backhaul
    transport and signal processing."""
    return sum(_circuit_components(load, radio, energy))


def cooling_power(p_cp_w: float, ambient_temp_c: float, energy: CellEnergyConfig) -> float:
    """Active heat-removal power for the equipment room.

    The circuits inject ``p_cp * circuit_heat_coeff`` of heat; the walls
    exchange ``surface * room_heat_coeff`` W per kelvin with the outside.
    Below the target temperature the wall loss offsets the circuit heat
    (down to zero); above it the inward leak adds to the cooling burden.
    """
    heat_w = p_cp_w * energy.circuit_heat_coeff
    wall_w_per_k = energy.room_surface_m2 * energy.room_heat_coeff
    target_c = energy.room_target_temp_c
    if target_c >= ambient_temp_c:
        if target_c - heat_w / wall_w_per_k < ambient_temp_c:
            return heat_w - wall_w_per_k * (target_c - ambient_temp_c)
        return 0.0
    return heat_w + wall_w_per_k * (ambient_temp_c - target_c)


def total_cell_power(
    load: CellLoad,
    ambient_temp_c: float,
    radio: CellRadioConfig,
    energy: CellEnergyConfig,
) -> PowerBreakdown:
    """Total cell draw with its full component breakdown.

    ``ambient_temp_c`` must already be corrected to the altitude of the
    building hosting the equipment rooms.
    """
    p_pa = amplifier_power(load, energy)
    p_fix, p_tc, p_ce, p_cd, p_bh, p_sp = _circuit_components(load, radio, energy)
    p_cp = p_fix + p_tc + p_ce + p_cd + p_bh + p_sp
    p_cool = cooling_power(p_cp, ambient_temp_c, energy)
    p_aux = energy.auxiliary_power_w
    p_total = p_cp + p_pa + p_cool / (1.0 - energy.cooling_loss) + p_aux
    return PowerBreakdown(
        p_pa=p_pa,
        p_fix=p_fix,
        p_tc=p_tc,
        p_ce=p_ce,
        p_cd=p_cd,
        p_bh=p_bh,
        p_sp=p_sp,
        p_cp=p_cp,
        p_cool=p_cool,
        p_aux=p_aux,
        p_total=p_total,
    )
