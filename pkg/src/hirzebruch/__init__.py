"""Diagram reduction calculus and non-speciality checks for homogeneous
linear systems on Hirzebruch surfaces."""

from .diagrams import (
    Diagram,
    DiagramError,
    DiagramSet,
    SymbolicDiagram,
    canonicalize,
    concat,
    cut,
    cutr,
    format_diagram,
    leng,
    parse_diagram,
    read_diagram_file,
    rev,
    size,
    write_diagram_file,
)
from .reduction import red_set, redout_set, reduce, sequence_reduce, top_reduce
from .tails import TailsError, atails, h_tails, ltails, symb_reduce, tails_enum

__version__ = "0.1.0"
