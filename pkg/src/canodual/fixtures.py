"""Bundled problem instances and fibril template geometry.

The five distance-geometry instances and the one-dimensional double-well
program ship as JSON documents under canodual/data and load through the
regular instance parser.  Family geometry (the orthogonal sheet transform
of each template and its strand stacking offset) drives chain replication;
the per-model sheet translations fitted from solved sensor positions are
kept as constants for model assembly.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .chains import AffineTransform
from .formats import InstanceDocument, parse_instance
from .mdgp import MdgpInstance
from .quartic import QuarticProgram

_FILES = {
    "doublewell": "doublewell.json",
    "3nvf-model-1": "3nvf_model1.json",
    "3nvf-models-2-3": "3nvf_models23.json",
    "3nvg-model-1": "3nvg_model1.json",
    "3nvg-models-2-3": "3nvg_models23.json",
    "3nvh-models-1-2": "3nvh_models12.json",
}

MDGP_NAMES = (
    "3nvf-model-1",
    "3nvf-models-2-3",
    "3nvg-model-1",
    "3nvg-models-2-3",
    "3nvh-models-1-2",
)


def instance_text(name: str) -> str:
    try:
        fname = _FILES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {sorted(_FILES)}") from None
    return (resources.files("canodual") / "data" / fname).read_text()


def load_document(name: str) -> InstanceDocument:
    return parse_instance(instance_text(name))


def load_instance(name: str) -> MdgpInstance:
    doc = load_document(name)
    if not isinstance(doc.payload, MdgpInstance):
        raise ValueError(f"fixture {name!r} is not a distance-geometry instance")
    return doc.payload


def double_well() -> QuarticProgram:
    """The classic one-dimensional program 0.5*(0.5 x^2 - 2)^2 - 0.5 x."""
    return load_document("doublewell").payload


@dataclass(frozen=True, eq=False)
class FibrilFamily:
    """Template geometry of one fibril family."""

    name: str
    sheet: AffineTransform  # maps chain A onto the opposing sheet
    stack: np.ndarray  # translation between stacked strands, angstroms

    def __post_init__(self):
        stack = np.array(self.stack, dtype=float).reshape(3)
        stack.flags.writeable = False
        object.__setattr__(self, "stack", stack)


FAMILIES = {
    "3nvf": FibrilFamily(
        name="3nvf",
        sheet=AffineTransform(R=np.diag([-1.0, -1.0, 1.0]), t=[27.546, 0.0, 0.0]),
        stack=[0.0, 0.0, 4.8],
    ),
    "3nvg": FibrilFamily(
        name="3nvg",
        sheet=AffineTransform(R=np.diag([-1.0, 1.0, -1.0]), t=[-27.28, 2.385, 15.738]),
        stack=[0.0, 4.77, 0.0],
    ),
    "3nvh": FibrilFamily(
        name="3nvh",
        sheet=AffineTransform(R=np.diag([-1.0, 1.0, -1.0]), t=[0.0, 2.437, -15.553]),
        stack=[0.0, 4.87, 0.0],
    ),
}

# Sheet translations refitted from solved sensor positions, one per model
# set.  The 3nvg entries are recorded as-is; they are not derivable from
# the bundled instance data alone.
FITTED_SHEET_TRANSLATIONS = {
    "3nvf-model-1": np.array([-4.5619, -2.4009, 0.0004]),
    "3nvf-models-2-3": np.array([20.8459, -2.1533, 0.6638]),
    "3nvg-model-1": np.array([-18.133923, 0.6673703, 11.955023]),
    "3nvg-models-2-3": np.array([-19.3102, 0.6644, 13.5316]),
    "3nvh-models-1-2": np.array([5.42607, 1.964071, -13.99593]),
}

FAMILY_OF_INSTANCE = {name: name.split("-")[0] for name in MDGP_NAMES}
