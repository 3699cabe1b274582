"""Canonical on-disk dataset format plus assignment/report serialization.

A dataset directory contains:

* ``meta.json``     -- name, num_nodes, num_edges (directed-entry count),
                       num_features, num_classes
* ``edges.tsv``     -- one undirected edge per line as ``u<TAB>v`` with u < v
                       (an optional third column carries a non-unit weight)
* ``features.tsv``  -- N lines of F tab-separated decimals
* ``labels.tsv``    -- optional, N lines of one integer

All files are UTF-8 with LF line endings.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import SparseGraph, from_edges

__all__ = ["DatasetMeta", "DatasetBundle", "read_dataset", "write_dataset",
           "write_assignments", "write_report", "read_labels_file"]

META_KEYS = ("name", "num_nodes", "num_edges", "num_features", "num_classes")


@dataclass
class DatasetMeta:
    name: str
    num_nodes: int
    num_edges: int  # directed-entry count (2E)
    num_features: int
    num_classes: int


@dataclass
class DatasetBundle:
    graph: SparseGraph
    features: np.ndarray
    labels: np.ndarray | None
    meta: DatasetMeta


def _read_meta(path: str) -> DatasetMeta:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: missing file") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    missing = [k for k in META_KEYS if k not in raw]
    if missing:
        raise InputError(f"{path}: missing keys {missing}")
    return DatasetMeta(
        name=str(raw["name"]),
        num_nodes=int(raw["num_nodes"]),
        num_edges=int(raw["num_edges"]),
        num_features=int(raw["num_features"]),
        num_classes=int(raw["num_classes"]),
    )


def _read_edges(path: str, num_nodes: int) -> list[tuple[int, int, float]]:
    edges = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"{path}: missing file") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise InputError(f"{path}:{lineno}: expected 2 or 3 fields")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise InputError(f"{path}:{lineno}: node index out of range")
            edges.append((u, v, w))
    return edges


def _read_features(path: str, num_nodes: int) -> np.ndarray:
    rows = []
    width = None
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"{path}: missing file") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise InputError(f"{path}:{lineno}: expected {width} columns, got {len(parts)}")
            try:
                row = [float(p) for p in parts]
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
            if any(not math.isfinite(v) for v in row):
                raise InputError(f"{path}:{lineno}: non-finite feature value")
            rows.append(row)
    if len(rows) != num_nodes:
        raise InputError(f"{path}: expected {num_nodes} feature rows, found {len(rows)}")
    return np.asarray(rows, dtype=np.float64)


def read_labels_file(path: str) -> np.ndarray:
    labels = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"{path}: missing file") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
    if not labels:
        raise InputError(f"{path}: no labels found")
    return np.asarray(labels, dtype=np.int64)


def read_dataset(directory) -> DatasetBundle:
    """Load and validate a canonical dataset directory."""
    directory = str(directory)
    meta = _read_meta(os.path.join(directory, "meta.json"))
    edges_path = os.path.join(directory, "edges.tsv")
    graph = from_edges(meta.num_nodes, _read_edges(edges_path, meta.num_nodes))
    if graph.num_stored_entries != meta.num_edges:
        raise InputError(
            f"{edges_path}: stored entry count {graph.num_stored_entries} "
            f"does not match meta num_edges {meta.num_edges}"
        )
    features = _read_features(os.path.join(directory, "features.tsv"), meta.num_nodes)
    if features.shape[1] != meta.num_features:
        raise InputError(
            f"{os.path.join(directory, 'features.tsv')}: expected "
            f"{meta.num_features} columns, found {features.shape[1]}"
        )
    labels_path = os.path.join(directory, "labels.tsv")
    labels = None
    if os.path.exists(labels_path):
        labels = read_labels_file(labels_path)
        if labels.size != meta.num_nodes:
            raise InputError(
                f"{labels_path}: expected {meta.num_nodes} labels, found {labels.size}"
            )
        if labels.min() < 0 or labels.max() >= meta.num_classes:
            raise InputError(f"{labels_path}: label outside [0, {meta.num_classes})")
    return DatasetBundle(graph=graph, features=features, labels=labels, meta=meta)


def write_dataset(bundle: DatasetBundle, directory) -> None:
    """Write a bundle in the canonical format; inverse of read_dataset."""
    directory = str(directory)
    os.makedirs(directory, exist_ok=True)
    meta = bundle.meta
    with open(os.path.join(directory, "meta.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(
            {
                "name": meta.name,
                "num_nodes": meta.num_nodes,
                "num_edges": meta.num_edges,
                "num_features": meta.num_features,
                "num_classes": meta.num_classes,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    g = bundle.graph
    with open(os.path.join(directory, "edges.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        for i in range(g.num_nodes):
            lo, hi = g.row_offsets[i], g.row_offsets[i + 1]
            for p in range(lo, hi):
                j = int(g.col_indices[p])
                if i < j:
                    w = float(g.weights[p])
                    fh.write(f"{i}\t{j}\n" if w == 1.0 else f"{i}\t{j}\t{w!r}\n")
    with open(os.path.join(directory, "features.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        for row in bundle.features:
            fh.write("\t".join(repr(float(v)) for v in row))
            fh.write("\n")
    if bundle.labels is not None:
        write_assignments(bundle.labels, os.path.join(directory, "labels.tsv"))


def write_assignments(labels: np.ndarray, path) -> None:
    """One integer per line."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for v in np.asarray(labels).ravel():
                fh.write(f"{int(v)}\n")
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_report(report, path) -> None:
    """Training report as JSON: loss array, nmi arrays, timing."""
    payload = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
