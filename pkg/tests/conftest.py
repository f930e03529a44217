"""Shared pytest fixtures for jacres tests."""

from collections.abc import Callable
from pathlib import Path

import pytest

from jacres.parser import System, parse_system

CORPUS_DIR = Path(__file__).parent.parent / "ex"


@pytest.fixture
def corpus_dir() -> Path:
    """Directory holding the example system and arc files."""
    return CORPUS_DIR


@pytest.fixture
def make_system() -> Callable[..., System]:
    """Build a system from a ring header and generator expressions.

    ``make_system("Q[x,y]", "x^2", "y^3")`` parses ``ring: Q[x,y]`` followed by
    one ``f:`` line per expression; ``coeff=`` adds a coefficient ring line.
    """

    def build(ring: str, *generators: str, coeff: str | None = None) -> System:
        lines = [f"ring: {ring}"]
        if coeff is not None:
            lines.append(f"coeff: {coeff}")
        lines.extend(f"f: {g}" for g in generators)
        return parse_system("\n".join(lines) + "\n")

    return build


@pytest.fixture
def x2y3(make_system: Callable[..., System]) -> System:
    """The complete intersection (x^2, y^3) over Q."""
    return make_system("Q[x,y]", "x^2", "y^3")


@pytest.fixture
def write_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write text to a file under tmp_path and return its path."""

    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
