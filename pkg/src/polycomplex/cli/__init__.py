"""Command line surface and text file format."""
from .fileformat import FormatError, load, parse, save, serialize
from .harness import Report, cmd_braid, cmd_decompose, cmd_espage, cmd_random, cmd_tot, cmd_verify
from .main import main
