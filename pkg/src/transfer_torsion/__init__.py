"""Transfer ideals in the p-adic K-theory of finite abelian p-groups.

Modules: ``groups`` (groups, subgroups, duals), ``charring`` (the character
ring and transfer), ``classfun`` (cyclotomic class functions),
``intlin`` (exact integer linear algebra), ``ideals`` (transfer ideals and
their quotients), ``transchromatic`` (per-tuple decomposition at height n),
``report`` and ``cli``.
"""

__version__ = "0.1.0"
