"""Relative Grothendieck groups of type A cluster categories.

The package is organised in layers:

* :mod:`exangulate.abelian` - Smith normal form and finitely presented groups,
* :mod:`exangulate.arcmodel` - the polygon model (arcs, triangles, modules),
* :mod:`exangulate.exang` - category data and relative Grothendieck groups,
* :mod:`exangulate.indexmaps` - index, mutation, ``N_X`` and the map diagram,
* :mod:`exangulate.ccmap` - characters, Laurent polynomials and friezes,
* :mod:`exangulate.cli` - the ``exangulate`` command.
"""

__version__ = "0.1.0"
