"""Citation-dataset fetch/convert companion for the jbgnn package."""
from .convert import ConversionJob, class_distribution, convert
from .specs import DATASETS, DatasetSpec

__all__ = ["ConversionJob", "DATASETS", "DatasetSpec", "class_distribution", "convert"]
__version__ = "0.1.0"
