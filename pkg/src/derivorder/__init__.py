"""Exact tools for additive solutions of f_1(x^p_1)g_1(x^q_1) + ... = 0.

Derivation-type solutions are studied through the formal expansion of
d^k(x^p) into state monomials; order bounds come from exact rank
computations, and claims are cross-checked against concrete differential
operators on Q(t1, ..., tm).
"""
__version__ = "0.1.0"
