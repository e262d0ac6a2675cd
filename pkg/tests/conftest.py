"""Shared access to the bundled data files."""

from importlib import resources
from pathlib import Path

from neighborly.incmat import parse_matrix

DATA = Path(str(resources.files("neighborly").joinpath("data")))


def data_path(*parts) -> Path:
    return DATA.joinpath(*parts)


def load_matrix(name):
    return parse_matrix(data_path("matrices", name + ".txt").read_text())
