"""jacres - exact Jacobian, residue and integral-closure computations for local complete intersections."""

__version__ = "0.1.0"
