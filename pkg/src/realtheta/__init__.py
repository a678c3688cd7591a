"""Real Riemann surfaces via theta constants: real types, real modular group, theta sums."""

__version__ = "0.1.0"
