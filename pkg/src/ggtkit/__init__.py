"""ggtkit: exact-arithmetic computational group theory toolkit.

Group models with canonical normal forms, Cayley balls and coned-off
graphs, conjugator-length bound evaluators, conjugacy solvers with
verified witnesses, weighted l1 seminorms on group-algebra elements, and
exact Hochschild/cyclic homology of finite group algebras.
"""

__version__ = "0.1.0"

from .groups import (  # noqa: F401
    FiniteGroup,
    FreeAbelian,
    FreeGroup,
    FreeProduct,
    GroupModel,
    TwoStepNilpotent,
    cyclic_group,
    heisenberg_group,
    model_from_dict,
    symmetric_group_3,
)
