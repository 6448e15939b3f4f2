"""Random forest / self-organising map classification and visualization.

Thin wrapper over the C++ core. The heavy lifting (forest training,
proximity matrices, SOM schedules, classical scaling, SVG rendering)
happens in the `_rfsom` extension; this package just re-exports it.
"""

from ._rfsom import (
    Dataset,
    Model,
    RandomForest,
    classical_mds,
    experiment,
    load_csv,
    proximity,
    sweep,
    train,
    train_forest,
    visualize,
)

__all__ = [
    "Dataset",
    "Model",
    "RandomForest",
    "classical_mds",
    "experiment",
    "load_csv",
    "proximity",
    "sweep",
    "train",
    "train_forest",
    "visualize",
]
