"""Differentiable max-trees.

Build the max-tree of an image, score its maxima (altitude, dynamics, volume
extinction), back-propagate measure gradients to pixel values through the
altitude-to-pixel map, and optimize images with a ranked maxima-selection
loss.
"""

from .grid import Connectivity, Grid, make_grid
from .imageio import (
    Image,
    PgmParseError,
    read_csv_matrix,
    read_pgm,
    write_csv_matrix,
    write_pgm,
)
from .maxtree import (
    MaxTree,
    NodeAttributes,
    build_maxtree,
    compute_attributes,
    leaves,
    reconstruct,
)
from .measures import (
    MeasureKind,
    MeasureVector,
    alt_measure,
    compute_measure,
    dyn_measure,
    saddle_nodes,
    vol_measure,
)
from .backprop import backprop_altitudes, backprop_measure
from .losses import (
    CompositeBreakdown,
    LossConfig,
    composite_loss,
    l2_loss,
    ranked_selection_loss,
    smoothness_loss,
)
from .optimizer import (
    OptimConfig,
    OptimizationError,
    StopReason,
    Trajectory,
    optimize,
)
from .synth import four_bumps, two_ridges

__all__ = [
    "Connectivity",
    "Grid",
    "make_grid",
    "Image",
    "PgmParseError",
    "read_pgm",
    "write_pgm",
    "read_csv_matrix",
    "write_csv_matrix",
    "MaxTree",
    "NodeAttributes",
    "build_maxtree",
    "leaves",
    "compute_attributes",
    "reconstruct",
    "MeasureKind",
    "MeasureVector",
    "alt_measure",
    "saddle_nodes",
    "dyn_measure",
    "vol_measure",
    "compute_measure",
    "backprop_altitudes",
    "backprop_measure",
    "LossConfig",
    "CompositeBreakdown",
    "ranked_selection_loss",
    "l2_loss",
    "smoothness_loss",
    "composite_loss",
    "OptimConfig",
    "OptimizationError",
    "StopReason",
    "Trajectory",
    "optimize",
    "four_bumps",
    "two_ridges",
]

__version__ = "0.1.0"
