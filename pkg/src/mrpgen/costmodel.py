"""First-order wiring cost of feeding pseudorandom words to parallel lanes.

An accelerator with R lanes of w-bit units at clock f consumes randomness at
TP = gamma * R * w * f bits per second (gamma = fraction of cycles that
need a fresh uniform word).  Producing that stream in one central unit makes
every bit travel an average Manhattan distance of half the die side; the
model prices exactly that data movement.  Placing a small generator next to
each lane group shrinks the distance to a local hop and removes the cost,
which is the whole argument for distributing the generation.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class CostParams:
    """Accelerator-scale parameters for the wiring model.

    R lanes of w-bit units at f_hz, occupancy gamma in (0, 1]; square die of
    side d_mm; wire energy e_j_per_bit_mm in joules per bit-millimeter.
    """

    R: int
    w: int
    f_hz: float
    gamma: float
    d_mm: float
    e_j_per_bit_mm: float

    def __post_init__(self):
        for name in ("R", "w", "f_hz", "gamma", "d_mm"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.e_j_per_bit_mm < 0:
            raise ValueError("wire energy must be non-negative")
        if self.gamma > 1:
            raise ValueError("gamma is a fraction of cycles, at most 1")


def required_throughput(p: CostParams) -> float:
    """Peak uniform-word demand gamma * R * w * f in bits per second."""
    return p.gamma * p.R * p.w * p.f_hz


def central_wiring_power(p: CostParams) -> float:
    """Watts spent hauling the stream an average of d/2 mm from one unit."""
    return required_throughput(p) * (p.d_mm / 2.0) * p.e_j_per_bit_mm


def per_axis_bandwidth_density(p: CostParams) -> float:
    """Bits per second crossing each millimeter of the die cross-section.

    The stream splits across the two axes over the full d-wide section,
    hence TP / (2 d); density near the central unit itself is far higher.
    """
    return required_throughput(p) / (2.0 * p.d_mm)


def distributed_wiring_power(p: CostParams, local_hop_mm: float = 0.0) -> float:
    """Wiring power with generation placed next to the consuming lanes.

    The long-reach travel term disappears; an optional local hop distance
    prices the remaining adjacency wiring for sensitivity studies.
    """
    if local_hop_mm < 0:
        raise ValueError("local hop distance must be non-negative")
    return required_throughput(p) * local_hop_mm * p.e_j_per_bit_mm


@dataclass(frozen=True)
class CostReport:
    """Central-versus-distributed comparison in SI and display units."""

    throughput_bps: float
    central_power_w: float
    distributed_power_w: float
    per_axis_density_bps_per_mm: float

    @property
    def throughput_tbps(self) -> float:
        return self.throughput_bps / 1e12

    @property
    def per_axis_density_tbps_per_mm(self) -> float:
        return self.per_axis_density_bps_per_mm / 1e12

    @property
    def saving_w(self) -> float:
        return self.central_power_w - self.distributed_power_w


def build_cost_report(p: CostParams, local_hop_mm: float = 0.0) -> CostReport:
    return CostReport(
        throughput_bps=required_throughput(p),
        central_power_w=central_wiring_power(p),
        distributed_power_w=distributed_wiring_power(p, local_hop_mm),
        per_axis_density_bps_per_mm=per_axis_bandwidth_density(p),
    )
