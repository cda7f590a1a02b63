"""cltlab: causal-boundary toolkit.

Finite chronological sets and their future completions, Hausdorff set
limits and the closed-limit convergence tests, sampled c-boundaries of 2D
model spacetimes, their match with the conformal square, and null-infinity
classification.  Every theorem-shaped statement ships as an executable
check; see the ``cltlab`` CLI.
"""

__version__ = "0.1.0"
