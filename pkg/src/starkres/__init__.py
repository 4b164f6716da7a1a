"""Numerical laboratory for resonances of 1D Stark Hamiltonians.

Computes second-sheet poles of the scattering matrix for
H = -d^2/dx^2 + eps*x + V on the line, where V is a finite-rank separable
potential with compactly supported real profiles, and tracks resonance
trajectories as the field strength eps decreases to zero.
"""

__version__ = "0.1.0"
