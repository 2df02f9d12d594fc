"""
Value types: points and balls, fields, exponents, kernels, atoms, quadrature
rules, multiindices and the records experiments report.
"""
