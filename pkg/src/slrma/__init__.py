"""Sparse low-rank factorization codec for image sets and mesh sequences."""

from .codec import (
    CodecParams,
    compress_image_set,
    compress_mesh_seq,
    decompress_image_set,
    decompress_mesh_seq,
)
from .datasets import (
    ImageSet,
    MeshSequence,
    load_image_set,
    load_mesh_sequence,
    synth_image_set,
    synth_mesh_seq,
)
from .lrma import lrma, stepwise_baseline
from .metrics import kg_error, psnr, rmse
from .solver import (
    Factorization,
    SolverConfig,
    gamma_for_sparsity,
    objective,
    reconstruct,
    slrma_solve,
)
from .transforms import dct1d, dct2d, dwt2d, graph_transform, haar1d, mesh_adjacency

__all__ = [
    "CodecParams",
    "Factorization",
    "ImageSet",
    "MeshSequence",
    "SolverConfig",
    "compress_image_set",
    "compress_mesh_seq",
    "dct1d",
    "dct2d",
    "decompress_image_set",
    "decompress_mesh_seq",
    "dwt2d",
    "gamma_for_sparsity",
    "graph_transform",
    "haar1d",
    "kg_error",
    "load_image_set",
    "load_mesh_sequence",
    "lrma",
    "mesh_adjacency",
    "objective",
    "psnr",
    "reconstruct",
    "rmse",
    "slrma_solve",
    "stepwise_baseline",
    "synth_image_set",
    "synth_mesh_seq",
]

__version__ = "0.1.0"
