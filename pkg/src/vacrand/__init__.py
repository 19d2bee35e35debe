"""Digital pipeline of a vacuum-fluctuation quantum random number generator.

Noise-source simulation, LFSR randomness extraction, entropy budgeting,
signal diagnostics and statistical self-tests.
"""

__version__ = "0.1.0"
