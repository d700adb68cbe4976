from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.models.base import Base
from app.models.interface import FieldState


# =========================================================
# 1. DIAGNOSTICS
# =========================================================
@dataclass(eq=False)
class Diagnostics(Base):
    """
    One record per accepted state, the initial one included.

    WHY NEEDED:
    - energy and mass series carry the gradient-flow checks;
    - layer_modes holds angular Fourier amplitudes per striation ring
      (pearling runs only), one array of modes 0..K per record.
    """

    times: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    masses: list = field(default_factory=list)
    max_abs: list = field(default_factory=list)
    dts: list = field(default_factory=list)
    layer_modes: dict = field(default_factory=dict)
    halvings: int = 0
    excursions: int = 0
    unresolved_increases: int = 0
    sigma: float = 0.0
    dt_max: float = float("inf")
    json_exclude = ("layer_modes",)

    @property
    def n_records(self) -> int:
        return len(self.times)

    def record(self, state: FieldState, energy: float, mass: np.ndarray, dt: float):
        self.times.append(float(state.time))
        self.energies.append(float(energy))
        self.masses.append(np.asarray(mass, dtype=float).copy())
        self.max_abs.append(float(np.max(np.abs(state.u))))
        self.dts.append(float(dt))

    def mass_drift(self) -> float:
        masses = np.asarray(self.masses)
        return float(np.max(np.abs(masses - masses[0]))) if len(masses) else 0.0

    def energy_monotone(self, tol: float = 1e-10) -> bool:
        E = np.asarray(self.energies)
        return bool(np.all(E[1:] <= E[:-1] + tol * np.abs(E[:-1])))

    def as_table(self) -> dict:
        """Column name -> series, for CSV output."""
        masses = np.asarray(self.masses)
        table = {"t": self.times, "energy": self.energies}
        for i in range(masses.shape[1] if masses.ndim == 2 else 0):
            table[f"mass{i + 1}"] = masses[:, i].tolist()
        table["maxu"] = self.max_abs
        for layer, series in sorted(self.layer_modes.items()):
            amps = np.asarray(series)
            table[f"mode_{layer}"] = np.argmax(amps[:, 2:], axis=1).astype(int) + 2 if amps.size else []
        return table


# =========================================================
# 2. RUN RESULT
# =========================================================
@dataclass(frozen=True, eq=False)
class FlowRun(Base):
    final: FieldState
    diagnostics: Diagnostics
    snapshots: list = field(default_factory=list)
    steps: int = 0
    json_exclude = ("final", "snapshots")


# =========================================================
# 3. PEARLING
# =========================================================
@dataclass(frozen=True, eq=False)
class LayerGrowth(Base):
    layer: str
    radius: float
    dominant_mode: int
    growth: float
    initial_amplitude: float
    final_amplitude: float


@dataclass(frozen=True, eq=False)
class PearlingRun(Base):
    """
    WHY NEEDED:
    - which layer pearls under which mass offset is recorded, not assumed.
    """

    offset: str
    mass_shift: np.ndarray
    target_mass: np.ndarray
    run: FlowRun
    layers: list
    pearled_layer: Optional[str]
    quiet: bool
    predicted_modes: list = field(default_factory=list)
    json_exclude = ("run",)
