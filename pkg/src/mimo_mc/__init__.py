"""Matrix completion testbench for colocated MIMO radar data matrices."""
from .errors import (DegenerateInputError, InvalidParameterError, InvalidSceneError,
                     UnboundedSupremumError)
from .geometry import (ArrayGeometry, ArrayKind, TargetScene, make_custom, make_spiral,
                       make_uca, make_ula, normalized_positions)

__version__ = "0.1.0"
