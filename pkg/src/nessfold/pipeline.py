"""End-to-end driver: physical parameters in, normalized tensor state out.

Chains the construction stages in order (Hamiltonian, quadratic generator,
mode decomposition, stack folding, gate replay, observables) and surfaces
each stage's typed failure unchanged so callers can map it to a status.
"""

from __future__ import annotations

from dataclasses import dataclass

from .folding import EPS_FOLD_DEFAULT, FoldResult, fold
from .liouvillian import LiouvillianCoeffs, build_liouvillian
from .model import EndBathParams, KitaevParams, build_kitaev, end_baths
from .observables import ObservableReport, build_report
from .spectral import (
    EPS_Z_DEFAULT,
    ModeSpectrum,
    TransferStack,
    build_stack,
    decompose,
    orthogonality_residual,
    stable_projector,
)
from .tns import TRUNC_TOL_DEFAULT, TensorState, apply_inverse_sequence, normalize_vacuum, product_state


@dataclass(frozen=True)
class NessSolution:
    """Everything produced along one solve, for inspection and reporting."""

    params: KitaevParams
    liouvillian: LiouvillianCoeffs
    spectrum: ModeSpectrum
    stack: TransferStack
    foldResult: FoldResult
    state: TensorState
    report: ObservableReport
    orthoResidual: float


def solve(
    params: KitaevParams,
    baths,
    trunc_tol: float = TRUNC_TOL_DEFAULT,
    max_chi: int = 0,
    eps_z: float = EPS_Z_DEFAULT,
    eps_fold: float = EPS_FOLD_DEFAULT,
) -> NessSolution:
    """Solve one parameter point; raises the stage errors documented per module."""
    baths = list(baths)
    H = build_kitaev(params)
    L = build_liouvillian(H, baths)
    spectrum = decompose(L, eps_z=eps_z)
    stack = build_stack(stable_projector(spectrum), params.N)
    ortho = orthogonality_residual(stack)
    fold_result = fold(stack, eps_fold=eps_fold)

    bits = [(1 + int(s)) // 2 for s in fold_result.signs]
    state = product_state(bits, trunc_tol=trunc_tol, max_chi=max_chi)
    apply_inverse_sequence(state, fold_result)
    normalize_vacuum(state)
    report = build_report(state, fold_result.residual)
    return NessSolution(
        params=params,
        liouvillian=L,
        spectrum=spectrum,
        stack=stack,
        foldResult=fold_result,
        state=state,
        report=report,
        orthoResidual=ortho,
    )


def solve_end_bath(
    params: KitaevParams,
    bath_params: EndBathParams,
    trunc_tol: float = TRUNC_TOL_DEFAULT,
    max_chi: int = 0,
    eps_z: float = EPS_Z_DEFAULT,
    eps_fold: float = EPS_FOLD_DEFAULT,
) -> NessSolution:
    """Convenience wrapper for the standard two-end bath layout."""
    channels = end_baths(params.N, bath_params)
    return solve(params, channels, trunc_tol=trunc_tol, max_chi=max_chi, eps_z=eps_z, eps_fold=eps_fold)
