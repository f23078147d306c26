"""Knowledge relations over histories."""

from .neighbourhoods import (
    CKN,
    ckn_of,
    ckn_partition,
    hist_indist,
    indist_classes,
    observation_key,
    subjective_starts,
)

__all__ = [
    "CKN",
    "ckn_of",
    "ckn_partition",
    "hist_indist",
    "indist_classes",
    "observation_key",
    "subjective_starts",
]
