import numpy as np
from scipy.ndimage import map_coordinates

from app.models.interface import FieldState

N_THETA = 512
N_MODES = 48


def ring_samples(state: FieldState, center, radius: float, n_theta: int = N_THETA) -> np.ndarray:
    """(N, n_theta) field values on the circle of given radius, periodic cubic interpolation."""
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    dx, dy = state.spacing
    coords = np.stack([
        (center[0] + radius * np.cos(theta)) / dx,
        (center[1] + radius * np.sin(theta)) / dy,
    ])
    return np.stack([map_coordinates(comp, coords, order=3, mode="grid-wrap") for comp in state.u])


def angular_amplitudes(samples: np.ndarray, n_modes: int = N_MODES) -> np.ndarray:
    """|c_k| for k = 0..n_modes, combined over species in the Euclidean norm."""
    coeffs = np.fft.rfft(samples, axis=-1) / samples.shape[-1]
    amps = np.sqrt(np.sum(np.abs(coeffs) ** 2, axis=0))
    amps[0] = 0.0
    return amps[: n_modes + 1]


def layer_amplitudes(state: FieldState, center, radii: dict, n_modes: int = N_MODES) -> dict:
    return {name: angular_amplitudes(ring_samples(state, center, R), n_modes) for name, R in radii.items()}


def striation_radii(R: float, epsilon: float, collision_times) -> dict:
    """Ring radius per compositional layer, innermost first."""
    times = sorted(collision_times)
    if not times:
        return {"core": R}
    if len(times) == 2:
        return {"inner": R + epsilon * times[0], "outer": R + epsilon * times[1]}
    return {f"layer{i}": R + epsilon * t for i, t in enumerate(times)}
