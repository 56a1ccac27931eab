"""Exact orbit and stabiliser experiments for ordered partitions of {0,1}^n."""
from .core import AutPair, BitString, DimensionError, PositionPerm, StringSet
from .groups import CapExceeded, PermGroup
from .hfsets import HFObject
from .partitions import Partition, coarsest_supporting_partition
from .preorders import OrderedPartition

__all__ = [
    "AutPair",
    "BitString",
    "CapExceeded",
    "DimensionError",
    "HFObject",
    "OrderedPartition",
    "Partition",
    "PermGroup",
    "PositionPerm",
    "StringSet",
    "coarsest_supporting_partition",
]
