"""Conversion jobs: fetch raw files, parse, validate counts, emit datasets."""
import os
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np

from jbgnn import DatasetBundle, DatasetMeta, InputError, from_edges, read_dataset, write_dataset

from .citationfull import parse_citation_full
from .planetoid import parse_planetoid
from .specs import DATASETS, DatasetSpec

DEFAULT_CACHE = os.path.expanduser("~/.cache/jbgnn-datasets")


@dataclass(frozen=True)
class ConversionJob:
    spec: DatasetSpec
    out_dir: str
    cache_dir: str

    @classmethod
    def create(cls, name, out_dir, cache_dir=None):
        if name not in DATASETS:
            raise InputError(
                f"unknown dataset {name!r}; choose from {sorted(DATASETS)}"
            )
        cache = os.path.join(cache_dir or DEFAULT_CACHE, name)
        return cls(spec=DATASETS[name], out_dir=out_dir, cache_dir=cache)


def _fetch(job: ConversionJob):
    """Ensure all raw files exist in the cache, downloading any missing ones."""
    os.makedirs(job.cache_dir, exist_ok=True)
    for url, fname in zip(job.spec.raw_urls(), job.spec.raw_filenames()):
        dest = os.path.join(job.cache_dir, fname)
        if os.path.exists(dest):
            continue
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                payload = resp.read()
        except (urllib.error.URLError, OSError, TimeoutError) as exc:
            raise InputError(
                f"cannot download {url}: {exc}; place the raw files in "
                f"{job.cache_dir} manually to convert offline"
            ) from exc
        tmp = dest + ".part"
        with open(tmp, "wb") as f:
            f.write(payload)
        os.replace(tmp, dest)


def convert(name, out_dir, cache_dir=None):
    """Convert one dataset; returns a summary dict with actual vs expected counts."""
    job = ConversionJob.create(name, out_dir, cache_dir)
    _fetch(job)
    spec = job.spec
    if spec.format == "planetoid":
        feats, labels, edges = parse_planetoid(job.cache_dir, spec.name)
    else:
        feats, labels, edges = parse_citation_full(
            os.path.join(job.cache_dir, f"{spec.name}.npz")
        )

    g = from_edges(feats.shape[0], edges)
    actual = {
        "num_nodes": g.num_nodes,
        "num_edges": g.num_stored_entries,
        "num_features": feats.shape[1],
        "num_classes": int(labels.max()) + 1,
    }
    expected = {
        "num_nodes": spec.num_nodes,
        "num_edges": spec.num_edges,
        "num_features": spec.num_features,
        "num_classes": spec.num_classes,
    }
    mismatches = {k: (actual[k], expected[k]) for k in expected if actual[k] != expected[k]}
    if mismatches:
        detail = ", ".join(f"{k}: got {a}, expected {e}" for k, (a, e) in mismatches.items())
        raise InputError(f"{name}: converted counts disagree with the reference ({detail})")

    meta = DatasetMeta(
        name=spec.name,
        num_nodes=g.num_nodes,
        num_edges=g.num_stored_entries,
        num_features=feats.shape[1],
        num_classes=int(labels.max()) + 1,
    )
    write_dataset(DatasetBundle(graph=g, features=feats, labels=labels, meta=meta), out_dir)
    read_dataset(out_dir)  # emitted directory must pass consumer-side validation
    return {"name": spec.name, "out": str(out_dir), "actual": actual, "expected": expected}


def class_distribution(data_dir):
    """Per-class node counts of a converted dataset."""
    bundle = read_dataset(data_dir)
    if bundle.labels is None:
        raise InputError(f"{data_dir}: dataset has no labels.tsv")
    counts = np.bincount(bundle.labels, minlength=bundle.meta.num_classes)
    return {
        "name": bundle.meta.name,
        "num_nodes": bundle.meta.num_nodes,
        "counts": counts.tolist(),
    }
