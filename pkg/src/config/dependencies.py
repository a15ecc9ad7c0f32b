"""
Dependency Wiring Module

This module wires method names to concrete test procedures.

Responsibilities:
    - Build ``OptimConfig`` and ``BasisSystem`` objects from settings and overrides
    - Map a method label to its ``TwoSampleProcedure`` implementation
    - Build the procedure an ``ExperimentConfig`` describes

Key Concept:
    This is the ONLY place where a method name is bound to an implementation.
    The command-line handlers and the experiment runner depend on the
    ``TwoSampleProcedure`` interface only.

Example:
    >>> procedure = get_procedure("smooth", basis="legendre", d=8, alpha=0.05)
    >>> report = procedure.run(x, y, RngStream(1))
"""

from config.settings import settings
from core.exceptions import DomainError
from core.interfaces.procedures import TwoSampleProcedure
from core.models.basis import BasisKind, BasisSystem
from core.models.experiment import METHODS, ExperimentConfig
from core.services.procedures import (
    BFProcedure,
    BGXProcedure,
    MKSProcedure,
    MultivariateSmoothProcedure,
    PermutationProcedure,
    SchwarzProcedure,
    SmoothProcedure,
)
from utils.optimize import OptimConfig


def get_optim_config(restarts: int | None = None) -> OptimConfig:
    """Sphere-search budget from settings, with an optional restart override."""
    return OptimConfig.from_settings(restarts)


def get_basis(kind: BasisKind | str | None = None, d: int | None = None) -> BasisSystem:
    """Basis system with ``settings.DEFAULT_BASIS`` / ``settings.DEFAULT_D`` fallbacks."""
    return BasisSystem(
        BasisKind.parse(kind or settings.DEFAULT_BASIS),
        settings.DEFAULT_D if d is None else d,
    )


def get_procedure(
    method: str,
    *,
    basis: BasisKind | str | None = None,
    d: int | None = None,
    alpha: float = 0.05,
    B: int | None = None,
    restarts: int | None = None,
    bootstrap_restarts: int | None = None,
    directions: int | None = None,
    d_max: int | None = None,
) -> TwoSampleProcedure:
    """
    Procedure for ``method`` with every unset parameter taken from settings.

    Raises:
        DomainError: For an unknown method or invalid parameters
    """
    method = method.strip().lower()
    if method == "smooth":
        return SmoothProcedure(get_basis(basis, d), alpha)
    if method == "bgx":
        return BGXProcedure(get_basis(basis, 4 if d is None else d), alpha)
    if method == "schwarz":
        return SchwarzProcedure(BasisKind.parse(basis or settings.DEFAULT_BASIS), alpha, d_max)
    if method in ("ks", "cvm"):
        return PermutationProcedure(method, alpha, B)
    if method == "ms":
        cfg = get_optim_config(restarts)
        bootstrap_cfg = cfg.with_restarts(
            settings.BOOTSTRAP_RESTARTS if bootstrap_restarts is None else bootstrap_restarts
        )
        return MultivariateSmoothProcedure(get_basis(basis, d), alpha, B, cfg, bootstrap_cfg)
    if method == "bf":
        return BFProcedure(alpha, directions, B)
    if method == "mks":
        return MKSProcedure(alpha, get_optim_config(restarts), B)
    raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def procedure_for(cfg: ExperimentConfig) -> TwoSampleProcedure:
    """Procedure described by an experiment configuration."""
    return get_procedure(
        cfg.method,
        basis=cfg.basis,
        d=cfg.d,
        alpha=cfg.alpha,
        B=cfg.B,
        restarts=cfg.restarts,
        bootstrap_restarts=cfg.bootstrap_restarts,
        directions=cfg.directions,
        d_max=cfg.d_max,
    )
