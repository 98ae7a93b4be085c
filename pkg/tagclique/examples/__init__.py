"""Plots of encoding size and recognizer growth."""
