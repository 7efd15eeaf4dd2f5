"""Simulation-side and formula-side numerics: geometry, traces, segmentation, probabilities."""
