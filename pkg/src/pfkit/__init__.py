"""Exact polyhedral toolkit for the projected-faces property."""
