"""Uniform 1-D cell-centred grid with a zero-valued ghost halo.

States are plain 1-D arrays holding the ``N`` interior values; the halo is
only materialised by :func:`padded_view` when a stencil needs it.
"""

from dataclasses import dataclass

import numpy as np

from wenoadj.errors import ConfigurationError

#: halo width needed by the WENO3 flux (j-1..j+2) and its adjoint rows (j-2..j+2)
GHOST = 2


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n_cells: int
    ghost: int = GHOST

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be a positive integer, got {self.n_cells}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise ConfigurationError(f"need a < b, got a={self.a}, b={self.b}")
        if self.ghost < 0:
            raise ConfigurationError("ghost width must be non-negative")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n_cells

    @property
    def x(self) -> np.ndarray:
        return cell_centers(self)

    @property
    def is_symmetric(self) -> bool:
        return abs(self.a + self.b) <= 1e-12 * (self.b - self.a)

    @classmethod
    def from_spacing(cls, a, b, dx, ghost=GHOST):
        """Build a grid whose spacing is ``dx`` (the length must be a multiple)."""
        n = int(round((b - a) / dx))
        if n < 1 or abs(n * dx - (b - a)) > 1e-9 * (b - a):
            raise ConfigurationError(f"dx={dx} does not tile [{a}, {b}]")
        return cls(a, b, n, ghost)


def cell_centers(grid: Grid1D) -> np.ndarray:
    """Midpoints ``x_j = a + (j - 1/2) dx`` for ``j = 1..N``."""
    j = np.arange(grid.n_cells, dtype=np.float64)
    return grid.a + (j + 0.5) * grid.dx


def sample(u0, grid: Grid1D) -> np.ndarray:
    """Pointwise sampling of a callable at the cell centres (no averaging)."""
    values = np.asarray(u0(cell_centers(grid)), dtype=np.float64)
    if values.shape == ():
        values = np.full(grid.n_cells, float(values))
    return check_state(values, grid)


def check_state(values, grid: Grid1D) -> np.ndarray:
    values = np.asarray(values)
    if values.shape != (grid.n_cells,):
        raise ConfigurationError(
            f"state has shape {values.shape}, grid expects ({grid.n_cells},)")
    if values.dtype != object and not np.all(np.isfinite(values)):
        raise ConfigurationError("state contains non-finite entries")
    return values


def padded_view(values, ghost: int = GHOST) -> np.ndarray:
    """Copy of ``values`` with ``ghost`` zeros on each side.

    The dtype of the input is preserved, so object arrays (e.g. of
    multiprecision numbers) pass through unchanged.
    """
    values = np.asarray(values)
    out = np.zeros(values.shape[0] + 2 * ghost, dtype=values.dtype)
    if values.dtype == object:
        out[:] = 0 * values[0] if values.size else 0
    out[ghost:ghost + values.shape[0]] = values
    return out


def strip_ghosts(padded, ghost: int = GHOST) -> np.ndarray:
    padded = np.asarray(padded)
    return padded[ghost:padded.shape[0] - ghost]


def reverse(values) -> np.ndarray:
    """``u(x) -> u(-x)`` on a grid symmetric about zero (index reversal)."""
    return np.asarray(values)[::-1].copy()
