"""Failure modes of the stationary-state construction."""


class NessfoldError(Exception):
    """Base class for solver failures."""


class NonUniqueNess(NessfoldError):
    """The stationary state is not unique (zero or near-zero decay modes)."""


class SingularEigenbasis(NessfoldError):
    """The mode eigenbasis is numerically singular (defective generator)."""


class ClosureViolation(NessfoldError):
    """A folded row does not close onto a single fermionic mode."""


class StackDegenerate(NessfoldError):
    """A folded row has vanishing weight and cannot define a mode."""


class VacuumVanishes(NessfoldError):
    """The vacuum coefficient is zero, so vacuum normalization breaks down."""
