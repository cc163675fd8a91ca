"""Battery physics shared by the controller and the market simulator.

State of charge is tracked as a fraction of the usable energy capacity.
All powers are MW at the grid connection point; charging and discharging
efficiencies are applied on the way in and out of storage.
"""

from dataclasses import dataclass

QH_HOURS = 0.25


class FeasibilityError(Exception):
    """A battery action would push the state of charge outside its limits."""


@dataclass(frozen=True)
class BatterySpec:
    power_max_mw: float
    energy_max_mwh: float
    eff_charge: float
    eff_discharge: float
    soc_min: float = 0.0
    soc_max: float = 1.0
    delta_t_h: float = QH_HOURS

    def __post_init__(self):
        if not self.power_max_mw > 0:
            raise ValueError("power_max_mw must be positive")
        if not self.energy_max_mwh > 0:
            raise ValueError("energy_max_mwh must be positive")
        if not 0 < self.eff_charge <= 1:
            raise ValueError("eff_charge must be in (0, 1]")
        if not 0 < self.eff_discharge <= 1:
            raise ValueError("eff_discharge must be in (0, 1]")
        if not 0 <= self.soc_min < self.soc_max <= 1:
            raise ValueError("need 0 <= soc_min < soc_max <= 1")

    @property
    def charge_soc_per_mw(self) -> float:
        """SoC gained per MW of charging over one step."""
        return self.eff_charge * self.delta_t_h / self.energy_max_mwh

    @property
    def discharge_soc_per_mw(self) -> float:
        """SoC spent per MW of discharging over one step."""
        return self.delta_t_h / (self.eff_discharge * self.energy_max_mwh)


@dataclass(frozen=True)
class BatteryState:
    soc: float


@dataclass(frozen=True)
class Action:
    """One quarter hour of battery dispatch.

    ``mode_flag`` is 1 in charging mode and 0 in discharging mode; the
    power of the opposite mode must be zero.
    """

    charge_mw: float = 0.0
    discharge_mw: float = 0.0
    mode_flag: int = 0

    @staticmethod
    def idle() -> "Action":
        return Action(0.0, 0.0, 0)

    @staticmethod
    def charge(p_mw: float) -> "Action":
        return Action(p_mw, 0.0, 1)

    @staticmethod
    def discharge(p_mw: float) -> "Action":
        return Action(0.0, p_mw, 0)

    @property
    def net_mw(self) -> float:
        """Signed grid draw: positive while charging."""
        return self.charge_mw - self.discharge_mw

    def is_idle(self) -> bool:
        return self.charge_mw == 0.0 and self.discharge_mw == 0.0


def validate_action(spec: BatterySpec, action: Action) -> None:
    if action.charge_mw < 0 or action.discharge_mw < 0:
        raise ValueError("powers must be nonnegative")
    if action.mode_flag not in (0, 1):
        raise ValueError("mode_flag must be 0 or 1")
    if action.charge_mw > 0 and action.discharge_mw > 0:
        raise ValueError("simultaneous charge and discharge")
    if action.charge_mw > action.mode_flag * spec.power_max_mw + 1e-9:
        raise ValueError("charge_mw exceeds mode-gated power limit")
    if action.discharge_mw > (1 - action.mode_flag) * spec.power_max_mw + 1e-9:
        raise ValueError("discharge_mw exceeds mode-gated power limit")


def step_soc(spec: BatterySpec, state: BatteryState, action: Action) -> BatteryState:
    """Advance the state of charge by one quarter hour of dispatch."""
    validate_action(spec, action)
    soc = (
        state.soc
        + action.charge_mw * spec.charge_soc_per_mw
        - action.discharge_mw * spec.discharge_soc_per_mw
    )
    if soc < spec.soc_min - 1e-12:
        raise FeasibilityError(
            f"soc {soc:.6f} below soc_min {spec.soc_min:.6f}"
        )
    if soc > spec.soc_max + 1e-12:
        raise FeasibilityError(
            f"soc {soc:.6f} above soc_max {spec.soc_max:.6f}"
        )
    return BatteryState(soc=min(max(soc, spec.soc_min), spec.soc_max))


def max_charge_mw(spec: BatterySpec, state: BatteryState) -> float:
    """Largest feasible charging power for one step from this state."""
    headroom = max(spec.soc_max - state.soc, 0.0)
    return min(spec.power_max_mw, headroom / spec.charge_soc_per_mw)


def max_discharge_mw(spec: BatterySpec, state: BatteryState) -> float:
    """Largest feasible discharging power for one step from this state."""
    stored = max(state.soc - spec.soc_min, 0.0)
    return min(spec.power_max_mw, stored / spec.discharge_soc_per_mw)


def clamp_feasible(spec: BatterySpec, state: BatteryState, action: Action) -> Action:
    """Shrink an action toward idle until one SoC step is feasible.

    Keeps the requested direction; returns idle when no positive power in
    that direction is feasible.
    """
    if action.charge_mw > 0:
        p = min(action.charge_mw, max_charge_mw(spec, state))
        return Action.charge(p) if p > 1e-12 else Action.idle()
    if action.discharge_mw > 0:
        p = min(action.discharge_mw, max_discharge_mw(spec, state))
        return Action.discharge(p) if p > 1e-12 else Action.idle()
    return Action.idle()
