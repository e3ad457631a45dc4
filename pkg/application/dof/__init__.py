"""Degrees-of-freedom engine: regimes, regions, power allocation, oracles and Monte Carlo checks."""
