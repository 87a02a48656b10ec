"""Planning with BNN-learned transition functions via weighted partial MaxSAT."""

from .bnn import Bnn, BnnLayer, BatchNormParams, Trajectory, brute_force_optimal, compute_bias, forward, simulate
from .domains import DomainSpec, generate, parameter_grid
from .driver import solve, validate_plan
from .encoder import EncodingArtifact, encode
from .model import Binarization, LinearConstraint, PlanningProblem, RewardSpec

__version__ = "0.1.0"

__all__ = [
    "BatchNormParams",
    "Binarization",
    "Bnn",
    "BnnLayer",
    "DomainSpec",
    "EncodingArtifact",
    "LinearConstraint",
    "PlanningProblem",
    "RewardSpec",
    "Trajectory",
    "brute_force_optimal",
    "compute_bias",
    "encode",
    "forward",
    "generate",
    "parameter_grid",
    "simulate",
    "solve",
    "validate_plan",
]
