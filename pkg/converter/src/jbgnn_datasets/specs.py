"""Dataset registry: names, expected shapes, and raw-file sources."""
from dataclasses import dataclass, field

PLANETOID_BASE = "https://github.com/kimiyoung/planetoid/raw/master/data"
CITATION_FULL_BASE = "https://github.com/abojchevski/graph2gauss/raw/master/data"

PLANETOID_SUFFIXES = ("x", "y", "tx", "ty", "allx", "ally", "graph", "test.index")


@dataclass(frozen=True)
class DatasetSpec:
    """Expected shape of a converted dataset.

    num_edges counts directed entries (each undirected edge twice), matching
    the convention of the canonical format's meta.json.
    """

    name: str
    format: str  # "planetoid" or "citation-full"
    num_nodes: int
    num_edges: int
    num_features: int
    num_classes: int
    files: tuple = field(default=())

    def raw_urls(self):
        if self.format == "planetoid":
            return [f"{PLANETOID_BASE}/ind.{self.name}.{s}" for s in PLANETOID_SUFFIXES]
        return [f"{CITATION_FULL_BASE}/{self.name}.npz"]

    def raw_filenames(self):
        if self.format == "planetoid":
            return [f"ind.{self.name}.{s}" for s in PLANETOID_SUFFIXES]
        return [f"{self.name}.npz"]


DATASETS = {
    "cora": DatasetSpec("cora", "planetoid", 2708, 10556, 1433, 7),
    "citeseer": DatasetSpec("citeseer", "planetoid", 3327, 9104, 3703, 6),
    "pubmed": DatasetSpec("pubmed", "planetoid", 19717, 88648, 500, 3),
    "dblp": DatasetSpec("dblp", "citation-full", 17716, 105734, 1639, 4),
}
