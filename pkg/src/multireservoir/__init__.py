"""Multifunctional reservoir computing toolkit.

Trains continuous-time, leaky-integrator, and next-generation reservoir
computers on tasks with overlapping training data (coexisting chaotic
attractors, counter-rotating circles) and analyzes the outcomes with
roundness, short-term memory, and Floquet-multiplier diagnostics.
"""

__version__ = "0.1.0"
