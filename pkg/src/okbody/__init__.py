"""Exact Newton-Okounkov bodies of divisors.

Modules: :mod:`geometry` (rational polytopes), :mod:`valuation` (flag
valuations), :mod:`sections` (graded section models), :mod:`semigroup`
(value semigroups and their bodies), :mod:`surface` (Zariski decomposition
and surface polygons), plus the scenario harness behind the ``okbody`` CLI.
"""

__version__ = "0.1.0"
