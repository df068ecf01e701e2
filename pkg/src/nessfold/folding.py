"""Reduction of the transfer stack into next-neighbor Majorana rotations.

Each rotation mixes the neighboring mode pair (gamma~_{m-1}, gamma~_m) by a
real angle.  Row l of the stack is processed in three moves: U-rotations strip
the complex phases of its active columns, V-rotations eliminate all but the
last surviving pair, and closure pins the pair to a single fermionic mode,
after which the pair columns can be zeroed in every lower row (nilpotency).
The recorded rotation sequence, in application order, defines the bundled
transformation whose inverse rebuilds the stationary state.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2

import numpy as np

from .exceptions import ClosureViolation, StackDegenerate
from .spectral import TransferStack

EPS_FOLD_DEFAULT = 1e-10


@dataclass(frozen=True)
class Rotation:
    """One rotation of the pair (gamma~_{m-1}, gamma~_m) by angle theta.

    kind is "U" for phase-stripping rotations and "V" for eliminating ones;
    both act identically on coefficients.
    """

    m: int
    theta: float
    kind: str

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"pair index must be >= 2, got {self.m}")
        if not np.isfinite(self.theta):
            raise ValueError(f"angle must be finite, got {self.theta}")
        if self.kind not in ("U", "V"):
            raise ValueError(f"kind must be 'U' or 'V', got {self.kind!r}")


@dataclass(frozen=True)
class FoldResult:
    """Recorded rotations (application order), per-row weights and closure signs."""

    rotations: tuple[Rotation, ...]
    rDiag: np.ndarray
    signs: np.ndarray
    residual: float


def _rotate_inplace(R: np.ndarray, m: int, theta: float) -> None:
    c = np.cos(theta)
    s = np.sin(theta)
    a = R[:, m - 2].copy()
    b = R[:, m - 1]
    R[:, m - 2] = a * c + b * s
    R[:, m - 1] = b * c - a * s


def rotate_columns(R: np.ndarray, m: int, theta: float) -> np.ndarray:
    """Rotate columns m-1 and m (1-based) of every row by theta."""
    ncols = R.shape[1]
    if not 2 <= m <= ncols:
        raise ValueError(f"pair index must lie in 2..{ncols}, got {m}")
    out = np.array(R, dtype=complex)
    _rotate_inplace(out, m, theta)
    return out


def strip_phases_row(R: np.ndarray, l: int) -> tuple[np.ndarray, list[Rotation]]:
    """Make columns 2l..4N of row l real by sweeping U-rotations from the right.

    The angle atan2(Im R[l][m], Im R[l][m-1]) zeroes the imaginary part of
    column m and leaves column m-1 with nonnegative imaginary part, which
    fixes the gauge; a fully real pair records a zero angle.
    """
    out = np.array(R, dtype=complex)
    row = l - 1
    ncols = out.shape[1]
    rots = []
    for m in range(ncols, 2 * l - 1, -1):
        theta = atan2(out[row, m - 1].imag, out[row, m - 2].imag)
        _rotate_inplace(out, m, theta)
        rots.append(Rotation(m=m, theta=theta, kind="U"))
    return out, rots


def eliminate_row(R: np.ndarray, l: int) -> tuple[np.ndarray, list[Rotation]]:
    """Zero columns 2l+1..4N of row l (already real there) with V-rotations."""
    out = np.array(R, dtype=complex)
    row = l - 1
    ncols = out.shape[1]
    rots = []
    for m in range(ncols, 2 * l, -1):
        phi = atan2(out[row, m - 1].real, out[row, m - 2].real)
        _rotate_inplace(out, m, phi)
        rots.append(Rotation(m=m, theta=phi, kind="V"))
    return out, rots


def _closure_sign(a: complex, b: complex, eps_fold: float) -> int:
    """Sign s with a = s*i*b, or raise.  Row self-orthogonality forces a^2 + b^2 = 0."""
    err_plus = abs(a - 1j * b)
    err_minus = abs(a + 1j * b)
    if min(err_plus, err_minus) > eps_fold:
        raise ClosureViolation(
            f"row pair ({a:.3e}, {b:.3e}) violates closure by "
            f"{min(err_plus, err_minus):.3e} (tolerance {eps_fold:.3e})"
        )
    return 1 if err_plus <= err_minus else -1


def close_row(R: np.ndarray, l: int, eps_fold: float = EPS_FOLD_DEFAULT) -> tuple[np.ndarray, int]:
    """Verify R[l][2l-1] = +-i R[l][2l] and zero the pair columns in rows below.

    Zeroing is exact, not approximate: once row l creates its mode, the same
    pair can never act again in lower rows (fermionic nilpotency), so their
    coefficients there are irrelevant.
    """
    out = np.array(R, dtype=complex)
    row = l - 1
    sign = _closure_sign(out[row, 2 * l - 2], out[row, 2 * l - 1], eps_fold)
    out[l:, 2 * l - 2] = 0.0
    out[l:, 2 * l - 1] = 0.0
    return out, sign


def _pattern_residual(W: np.ndarray) -> float:
    """Largest magnitude outside the per-row diagonal pairs."""
    mask = np.ones(W.shape, dtype=bool)
    for j in range(W.shape[0]):
        mask[j, 2 * j] = False
        mask[j, 2 * j + 1] = False
    return float(np.abs(W[mask]).max(initial=0.0))


def fold(stack: TransferStack, eps_fold: float = EPS_FOLD_DEFAULT) -> FoldResult:
    """Reduce the full stack, recording every rotation (zero angles included).

    Rows 1..2N-1 are stripped, eliminated and closed in order; row 2N is
    already confined to its final pair, so it only gets the closure check.
    Its surviving entry may carry a residual phase that no rotation removes,
    hence rDiag stores its magnitude there.
    """
    N = stack.N
    W = np.array(stack.R, dtype=complex)
    rotations: list[Rotation] = []
    rDiag = np.zeros(2 * N)
    signs = np.zeros(2 * N, dtype=int)

    for l in range(1, 2 * N):
        W, rots_u = strip_phases_row(W, l)
        rotations.extend(rots_u)
        W, rots_v = eliminate_row(W, l)
        rotations.extend(rots_v)
        r = W[l - 1, 2 * l - 1]
        if abs(r) < eps_fold:
            raise StackDegenerate(f"row {l} weight {abs(r):.3e} below {eps_fold:.3e}")
        rDiag[l - 1] = r.real
        W, signs[l - 1] = close_row(W, l, eps_fold)

    last = W[2 * N - 1, 4 * N - 1]
    if abs(last) < eps_fold:
        raise StackDegenerate(f"row {2 * N} weight {abs(last):.3e} below {eps_fold:.3e}")
    rDiag[2 * N - 1] = abs(last)
    signs[2 * N - 1] = _closure_sign(W[2 * N - 1, 4 * N - 2], last, eps_fold)

    rDiag.setflags(write=False)
    signs.setflags(write=False)
    return FoldResult(
        rotations=tuple(rotations),
        rDiag=rDiag,
        signs=signs,
        residual=_pattern_residual(W),
    )


def expected_rotation_count(N: int) -> int:
    """Rotations recorded by fold: sum over rows l < 2N of (4N-2l+1) U + (4N-2l) V."""
    return sum((4 * N - 2 * l + 1) + (4 * N - 2 * l) for l in range(1, 2 * N))


def replay(R: np.ndarray, result: FoldResult) -> np.ndarray:
    """Re-run the recorded rotations and closure zeroings on a pristine stack copy."""
    W = np.array(R, dtype=complex)
    n_rows = W.shape[0]
    ncols = W.shape[1]
    it = iter(result.rotations)
    for l in range(1, n_rows):
        for _ in range(2 * (ncols - 2 * l) + 1):
            rot = next(it)
            _rotate_inplace(W, rot.m, rot.theta)
        W[l:, 2 * l - 2] = 0.0
        W[l:, 2 * l - 1] = 0.0
    return W
