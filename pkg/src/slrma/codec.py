"""End-to-end compression pipelines for image sets and mesh sequences.

Image sets: Z = Phi^T X is factored into a sparse orthonormal basis and
coefficients, both uniformly quantized and arithmetic-coded. Mesh
sequences run the same factorization per coordinate axis against the mesh
graph transform, with an extra 1D DCT applied along the coefficient rows
before quantization to squeeze temporal coherence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .container import (
    PIPELINE_IMAGE,
    PIPELINE_MESH,
    ContainerHeader,
    connectivity_digest,
    pack_container,
    unpack_container,
)
from .entropy import entropy_decode, entropy_encode
from .errors import CorruptStreamError, DigestMismatchError, NotConvergedError
from .numerics import as_matrix
from .quant import dequantize, quantize
from .solver import (
    IMAGE_DEFAULTS,
    MESH_DEFAULTS,
    SolverConfig,
    gamma_for_sparsity,
    slrma_solve,
)
from .transforms import (
    KIND_DCT2D,
    KIND_DWT2D,
    KIND_GRAPH,
    dct1d,
    dct2d,
    dwt2d,
    graph_transform,
    mesh_adjacency,
)


@dataclass
class CodecParams:
    """Everything a compression run needs besides the data itself."""

    k: int
    step_b: float
    step_c: float
    transform: str = "dct"          # images: dct | dwt; meshes always gt
    levels: int = 3                 # dwt only
    gamma: object = None            # float, or per-axis triple for meshes
    target_pb: float = None
    pb_tol: float = 0.05
    solver: dict = field(default_factory=dict)  # rho0/alpha/rho_max/tol/...

    def solver_config(self, gamma, defaults):
        merged = {**defaults, **{k: v for k, v in self.solver.items() if v is not None}}
        return SolverConfig(gamma=gamma, k=self.k, **merged)


def _solve_stream(z, params: CodecParams, defaults, gamma=None):
    """Factor one matrix, resolving gamma from a sparsity target if needed."""
    gamma = params.gamma if gamma is None else gamma
    if gamma is not None:
        result = slrma_solve(z, params.solver_config(float(gamma), defaults))
        used = float(gamma)
    elif params.target_pb is not None:
        used, result = gamma_for_sparsity(
            z, params.solver_config(0.0, defaults),
            params.target_pb, params.pb_tol,
        )
    else:
        raise ValueError("need either gamma or target_pb")
    if not result.converged:
        raise NotConvergedError(
            f"solver did not converge within {result.iterations} iterations"
        )
    return used, result


def factor_quantization_bound(basis, coeffs, step_b, step_c):
    """Frobenius bound on the product perturbation from quantizing factors.

    With |dB| <= step_b/2 and |dC| <= step_c/2 elementwise and orthonormal
    B: ||B^C^ - BC||_F <= ||dB||_F ||C||_2 + ||dC||_F + ||dB||_F ||dC||_F.
    """
    m, k = basis.shape
    n = coeffs.shape[1]
    db = np.sqrt(m * k) * step_b / 2.0
    dc = np.sqrt(k * n) * step_c / 2.0
    c_spec = np.linalg.norm(coeffs, 2)
    return db * c_spec + dc + db * dc


def _image_transform(params: CodecParams, w, h):
    if params.transform == "dct":
        return dct2d(w, h)
    if params.transform == "dwt":
        return dwt2d(w, h, params.levels)
    raise ValueError(f"unsupported image transform {params.transform!r}")


def compress_image_set(x, w, h, params: CodecParams):
    """Compress a wh x n stack of vectorized images to container bytes."""
    x = as_matrix(x, "X")
    if x.shape[0] != w * h:
        raise ValueError(f"X has {x.shape[0]} rows, expected w*h={w * h}")
    phi = _image_transform(params, w, h)
    z = phi.forward(x)
    _, fact = _solve_stream(z, params, IMAGE_DEFAULTS)
    payload_b = entropy_encode(quantize(fact.basis, params.step_b))
    payload_c = entropy_encode(quantize(fact.coeffs, params.step_c))
    header = ContainerHeader(
        pipeline=PIPELINE_IMAGE,
        transform_kind=phi.kind,
        transform_params=phi.params,
        m=x.shape[0],
        n=x.shape[1],
        k=params.k,
        step_b=params.step_b,
        step_c=params.step_c,
    )
    return pack_container(header, [payload_b, payload_c])


def decompress_image_set(blob):
    """Inverse of compress_image_set; returns (X_hat, w, h)."""
    header, payloads = unpack_container(blob)
    if header.pipeline != PIPELINE_IMAGE:
        raise CorruptStreamError("not an image-set container")
    if header.transform_kind == KIND_DCT2D:
        w, h = header.transform_params
        phi = dct2d(w, h)
    elif header.transform_kind == KIND_DWT2D:
        w, h, levels = header.transform_params
        phi = dwt2d(w, h, levels)
    else:
        raise CorruptStreamError(
            f"transform {header.transform_kind} invalid for the image pipeline"
        )
    basis = dequantize(entropy_decode(payloads[0], header.m, header.k, header.step_b))
    coeffs = dequantize(entropy_decode(payloads[1], header.k, header.n, header.step_c))
    return phi.inverse(basis @ coeffs), w, h


def compress_mesh_seq(xx, xy, xz, faces, params: CodecParams):
    """Compress three m x n coordinate matrices against the mesh graph."""
    xx, xy, xz = (as_matrix(a, name) for a, name in
                  ((xx, "Xx"), (xy, "Xy"), (xz, "Xz")))
    if not xx.shape == xy.shape == xz.shape:
        raise ValueError("coordinate matrices must share one shape")
    m, n = xx.shape
    graph = mesh_adjacency(faces, m)
    u_gt = graph_transform(graph)
    u_dct = dct1d(n)
    gammas = params.gamma
    if gammas is not None and np.ndim(gammas) == 0:
        gammas = (gammas, gammas, gammas)
    payloads = []
    for axis, data in enumerate((xx, xy, xz)):
        z = u_gt.forward(data)
        _, fact = _solve_stream(
            z, params, MESH_DEFAULTS,
            gamma=None if gammas is None else gammas[axis],
        )
        coeff_dct = u_dct.forward(fact.coeffs.T)  # n x k
        payloads.append(entropy_encode(quantize(fact.basis, params.step_b)))
        payloads.append(entropy_encode(quantize(coeff_dct, params.step_c)))
    header = ContainerHeader(
        pipeline=PIPELINE_MESH,
        transform_kind=KIND_GRAPH,
        transform_params=(m,),
        m=m,
        n=n,
        k=params.k,
        step_b=params.step_b,
        step_c=params.step_c,
        digest=connectivity_digest(m, graph.edges),
    )
    return pack_container(header, payloads)


def decompress_mesh_seq(blob, faces):
    """Inverse of compress_mesh_seq; connectivity arrives out of band."""
    header, payloads = unpack_container(blob)
    if header.pipeline != PIPELINE_MESH:
        raise CorruptStreamError("not a mesh-sequence container")
    graph = mesh_adjacency(faces, header.m)
    if connectivity_digest(header.m, graph.edges) != header.digest:
        raise DigestMismatchError("connectivity does not match the container")
    u_gt = graph_transform(graph)
    u_dct = dct1d(header.n)
    out = []
    for axis in range(3):
        basis = dequantize(entropy_decode(
            payloads[2 * axis], header.m, header.k, header.step_b))
        coeff_dct = dequantize(entropy_decode(
            payloads[2 * axis + 1], header.n, header.k, header.step_c))
        coeffs = u_dct.inverse(coeff_dct).T  # k x n
        out.append(u_gt.inverse(basis @ coeffs))
    return tuple(out)
