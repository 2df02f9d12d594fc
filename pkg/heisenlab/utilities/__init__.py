"""
Constants, errors, numerics helpers and experiment file handling.
"""
