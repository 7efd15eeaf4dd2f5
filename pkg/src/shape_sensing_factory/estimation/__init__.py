"""Estimation from observations: clustering, class counts, vertex composition and polygon assembly."""
