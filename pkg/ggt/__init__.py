"""
ggt: computational group theory toolkit.

Words and presentations, Stallings folding, bounded Cayley balls, coned-off
graphs with the relative metric, finite evidence for hyperbolic
embeddings, Brooks quasimorphisms and bounded cochains.
"""

__version__ = "0.1.0"

from ggt.errors import GGTError  # noqa: E402
from ggt.fpgroup import Presentation, equality_oracle, surface_presentation  # noqa: E402
from ggt.words import Word, format_word  # noqa: E402

__all__ = ["GGTError", "Presentation", "Word", "__version__", "equality_oracle", "format_word", "surface_presentation"]
