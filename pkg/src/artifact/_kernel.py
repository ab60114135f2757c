"""Select the compiled Lyndon kernel when it is importable, else the pure one.

Set ``ARTIFACT_PURE=1`` to force the pure-Python kernel.
"""

import os

if os.environ.get("ARTIFACT_PURE") == "1":
    from . import _lyndon_py as impl
else:
    try:
        from . import _lyndon_ext as impl
    except ImportError:  # extension not built
        from . import _lyndon_py as impl

COMPILED = impl.__name__.endswith("_ext")

is_lyndon = impl.is_lyndon
lyndon_words = impl.lyndon_words
factor = impl.factor
bracket_words = impl.bracket_words
bracket_parts = impl.bracket_parts
expand = impl.expand
cache_sizes = impl.cache_sizes
clear_caches = impl.clear_caches
