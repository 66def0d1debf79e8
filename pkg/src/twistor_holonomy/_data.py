"""Access to the tab-separated tables shipped in ``twistor_holonomy/data``."""

from __future__ import annotations

from importlib import resources


def read_text(name: str) -> str:
    return resources.files("twistor_holonomy").joinpath("data").joinpath(name).read_text("utf-8")


def parse_table(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rows.append(line.rstrip("\n").split("\t"))
    return rows


def read_table(name: str) -> list[list[str]]:
    return parse_table(read_text(name))
