"""Exhaustive rate-distortion sweeps over (k, p_B target, quantizer step).

Each grid point resolves gamma once per (k, p_B) via the sparsity search,
compresses with every step pair, decompresses, and measures. Rows are
emitted in deterministic grid order with full provenance; per-point
failures are tagged and the sweep continues.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .codec import (
    CodecParams,
    compress_image_set,
    compress_mesh_seq,
    decompress_image_set,
    decompress_mesh_seq,
)
from .datasets import ImageSet
from .errors import InfinitePsnrError, SlrmaError
from .metrics import bits_per_frame_vertex, bits_per_pixel, kg_error, psnr, rmse
from .solver import IMAGE_DEFAULTS, MESH_DEFAULTS, gamma_for_sparsity
from .transforms import dct2d, dwt2d, graph_transform, mesh_adjacency

CSV_COLUMNS = [
    "k", "p_B_target", "p_B_achieved", "gamma", "step_b", "step_c",
    "transform", "bits", "rate", "rmse", "psnr", "kg_error", "iters",
    "converged", "error",
]


@dataclass
class SweepGrid:
    ks: tuple
    pb_targets: tuple
    steps: tuple                      # (step_b, step_c) pairs
    transform: str = "dct"
    levels: int = 3
    pb_tol: float = 0.05
    solver: dict = field(default_factory=dict)


@dataclass
class SweepRow:
    k: int
    p_b_target: float
    step_b: float
    step_c: float
    transform: str
    p_b_achieved: float = None
    gamma: float = None
    bits: int = None
    rate: float = None
    rmse: float = None
    psnr: float = None
    kg_error: float = None
    iters: int = None
    converged: bool = None
    error: str = ""

    @property
    def distortion(self):
        return self.kg_error if self.kg_error is not None else self.rmse

    def as_csv_dict(self):
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return str(v).lower()
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return {
            "k": self.k,
            "p_B_target": fmt(self.p_b_target),
            "p_B_achieved": fmt(self.p_b_achieved),
            "gamma": fmt(self.gamma),
            "step_b": fmt(self.step_b),
            "step_c": fmt(self.step_c),
            "transform": self.transform,
            "bits": fmt(self.bits),
            "rate": fmt(self.rate),
            "rmse": fmt(self.rmse),
            "psnr": fmt(self.psnr),
            "kg_error": fmt(self.kg_error),
            "iters": fmt(self.iters),
            "converged": fmt(self.converged),
            "error": self.error,
        }


def pareto_front(points):
    """Non-dominated (rate, distortion) pairs, sorted by ascending rate."""
    front = []
    for cand in sorted(points, key=lambda p: (p[0], p[1])):
        if any(o[0] <= cand[0] and o[1] <= cand[1] and o != cand for o in points):
            continue
        if front and front[-1][0] == cand[0]:
            continue
        front.append(cand)
    return front


def _resolve_gammas(dataset, grid: SweepGrid):
    """One sparsity search per (k, p_B target); shared across step ladders."""
    resolved = {}
    if isinstance(dataset, ImageSet):
        phi = (dct2d(dataset.w, dataset.h) if grid.transform == "dct"
               else dwt2d(dataset.w, dataset.h, grid.levels))
        zs = [phi.forward(dataset.x)]
        defaults = IMAGE_DEFAULTS
    else:
        u_gt = graph_transform(mesh_adjacency(dataset.faces, dataset.m))
        zs = [u_gt.forward(a) for a in (dataset.xx, dataset.xy, dataset.xz)]
        defaults = MESH_DEFAULTS
    for k in grid.ks:
        for pb in grid.pb_targets:
            params = CodecParams(k=k, step_b=1.0, step_c=1.0,
                                 transform=grid.transform, levels=grid.levels,
                                 solver=dict(grid.solver))
            try:
                gammas, facts = [], []
                for z in zs:
                    cfg = params.solver_config(0.0, defaults)
                    gamma, fact = gamma_for_sparsity(z, cfg, pb, grid.pb_tol)
                    gammas.append(gamma)
                    facts.append(fact)
                nnz = sum(np.count_nonzero(f.basis) for f in facts)
                total = sum(f.basis.size for f in facts)
                resolved[(k, pb)] = dict(
                    gammas=tuple(gammas),
                    p_b=1.0 - nnz / total,
                    iters=max(f.iterations for f in facts),
                    converged=all(f.converged for f in facts),
                )
            except SlrmaError as exc:
                resolved[(k, pb)] = dict(error=f"{type(exc).__name__}: {exc}")
    return resolved


def rd_sweep(dataset, grid: SweepGrid):
    """Evaluate the full grid; returns (rows, pareto front rows)."""
    resolved = _resolve_gammas(dataset, grid)
    is_image = isinstance(dataset, ImageSet)
    rows = []
    for k in grid.ks:
        for pb in grid.pb_targets:
            info = resolved[(k, pb)]
            for step_b, step_c in grid.steps:
                row = SweepRow(k=k, p_b_target=pb, step_b=step_b,
                               step_c=step_c, transform=grid.transform)
                if "error" in info:
                    row.error = info["error"]
                    rows.append(row)
                    continue
                gammas = info["gammas"]
                row.gamma = gammas[0]
                row.p_b_achieved = info["p_b"]
                row.iters = info["iters"]
                row.converged = info["converged"]
                params = CodecParams(
                    k=k, step_b=step_b, step_c=step_c,
                    transform=grid.transform, levels=grid.levels,
                    gamma=gammas[0] if is_image else gammas,
                    solver=dict(grid.solver),
                )
                try:
                    if is_image:
                        blob = compress_image_set(dataset.x, dataset.w,
                                                  dataset.h, params)
                        x_hat, _, _ = decompress_image_set(blob)
                        row.bits = 8 * len(blob)
                        row.rate = bits_per_pixel(len(blob), dataset.w,
                                                  dataset.h, dataset.n)
                        row.rmse = rmse(dataset.x, x_hat)
                        try:
                            row.psnr = psnr(dataset.x, x_hat)
                        except InfinitePsnrError:
                            row.psnr = float("inf")
                    else:
                        blob = compress_mesh_seq(dataset.xx, dataset.xy,
                                                 dataset.xz, dataset.faces,
                                                 params)
                        hx, hy, hz = decompress_mesh_seq(blob, dataset.faces)
                        row.bits = 8 * len(blob)
                        row.rate = bits_per_frame_vertex(len(blob), dataset.m,
                                                         dataset.n)
                        row.kg_error = kg_error(dataset.xx, dataset.xy,
                                                dataset.xz, hx, hy, hz)
                        row.rmse = rmse(dataset.stacked(),
                                        np.vstack([hx, hy, hz]))
                except SlrmaError as exc:
                    row.error = f"{type(exc).__name__}: {exc}"
                rows.append(row)
    scored = [r for r in rows if not r.error and r.rate is not None]
    front_pts = pareto_front([(r.rate, r.distortion) for r in scored])
    front_set = set(front_pts)
    front_rows = sorted(
        (r for r in scored if (r.rate, r.distortion) in front_set),
        key=lambda r: r.rate,
    )
    seen = set()
    unique_front = []
    for r in front_rows:
        if r.rate not in seen:
            seen.add(r.rate)
            unique_front.append(r)
    return rows, unique_front


def rows_to_csv(rows):
    """Serialize rows with the frozen column schema, UTF-8, LF endings."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_csv_dict())
    return buf.getvalue()
