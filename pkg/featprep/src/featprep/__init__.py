"""Offline preparation for the vsumrl engine: decode videos, sample frames
at 2 fps, embed them with a pretrained image CNN, and convert public
SumMe/TVSum annotation archives into the engine's FVS1 + JSON sidecar
formats."""

from .backbone import FeatureBackbone  # noqa: F401
from .convert import (  # noqa: F401
    attach_summe_annotations,
    attach_tvsum_annotations,
    convert_summe,
    convert_tvsum,
)
from .extract import extract_directory, extract_features  # noqa: F401
from .fvs import FeatPrepError  # noqa: F401

__version__ = "0.1.0"
