"""Simulation toolkit for driven-dissipative coupled resonator arrays.

Builds Bose-Hubbard and Jaynes-Cummings-Hubbard lattice models, solves their
Lindblad master equations (exactly, by quantum-trajectory Monte Carlo, or by
MPS/TEBD for 1D chains), and extracts photon statistics, imbalance dynamics,
fermionisation/crystallisation signatures, and topological responses of
linear 2D lattices.
"""

__version__ = "0.1.0"
