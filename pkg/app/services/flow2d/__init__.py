from app.services.flow2d.layers import angular_amplitudes, layer_amplitudes, ring_samples, striation_radii
from app.services.flow2d.pearling import pearling_experiment, seeded_interface
from app.services.flow2d.scheme import default_sigma, run_flow, step, variational_derivative
