"""Numerical tolerances and default budgets.

Every tolerance used by the library is declared here once; modules take
them as keyword arguments defaulting to these values.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    moebius_det: float = 1e-14
    zero_margin: float = 1e-14
    pick: float = 1e-10
    node_separation: float = 1e-8
    step_blowup: float = 1e-12
    clip_min: float = 1e-12
    bisection: float = 1e-12


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 32
    boundary_samples: int = 2**12
    grid: int = 2**10
    gamma_count: int = 64
    angular_cap: int = 2**20


TOL = Tolerances()
BUDGET = Budget()
