import numpy as np

from app.utils.exceptions import ShapeError


class SpectralGrid:
    """
    Real-to-complex Fourier tools on the periodic lattice of a FieldState.

    Transforms act on the last two axes, so (N, nx, ny) stacks of
    components go through in one call.
    """

    def __init__(self, shape: tuple, lengths: tuple):
        if len(shape) != 2 or len(lengths) != 2:
            raise ShapeError(f"expected a 2-D lattice, got shape {shape} and lengths {lengths}")
        self.shape = tuple(int(n) for n in shape)
        self.lengths = tuple(float(L) for L in lengths)

        kx = 2.0 * np.pi * np.fft.fftfreq(self.shape[0], d=self.lengths[0] / self.shape[0])
        ky = 2.0 * np.pi * np.fft.rfftfreq(self.shape[1], d=self.lengths[1] / self.shape[1])
        self.kx, self.ky = np.meshgrid(kx, ky, indexing="ij")
        self.ksq = self.kx ** 2 + self.ky ** 2

        # 2/3 rule
        kx_max = np.max(np.abs(kx))
        ky_max = np.max(np.abs(ky))
        self.dealias = (1.5 * np.abs(self.kx) < kx_max) & (1.5 * np.abs(self.ky) < ky_max)

    def forward(self, u: np.ndarray) -> np.ndarray:
        return np.fft.rfftn(u, axes=(-2, -1))

    def inverse(self, u_hat: np.ndarray) -> np.ndarray:
        return np.fft.irfftn(u_hat, s=self.shape, axes=(-2, -1))

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        return self.inverse(-self.ksq * self.forward(u))

    def bilaplacian_hat(self, u_hat: np.ndarray) -> np.ndarray:
        return self.ksq ** 2 * u_hat
