"""Interchange file formats.

Profile CSV: header ``t,phi``, strictly increasing t.
Polygon CSV: header ``x,y``, counterclockwise vertex cycle.
Function CSV: header ``x,value``.
Stack file: plain text, ``dim=N levels=K`` header, then K lines of
``t=<height> profile=<path to profile CSV>`` (paths relative to the stack
file).
"""

from __future__ import annotations

import os

import numpy as np

from .bodies import ConvexPolygon, RevolutionBody
from .errors import ConfigError
from .pl1d import WHOLE_LINE, GridFn1D
from .pln import LevelStack


def _read_two_columns(path: str, expected_header: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != expected_header:
            raise ConfigError(
                f"{path}: expected header {expected_header!r}, got {header!r}"
            )
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ConfigError(f"{path}: expected two columns")
    return data


def sniff_body_header(path: str) -> str:
    """'profile' for t,phi files and 'polygon' for x,y files."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().replace(" ", "")
    if header == "t,phi":
        return "profile"
    if header == "x,y":
        return "polygon"
    raise ConfigError(f"{path}: unrecognized body header {header!r}")


def load_profile(path: str, dim: int) -> RevolutionBody:
    data = _read_two_columns(path, "t,phi")
    return RevolutionBody(dim, data[:, 0], data[:, 1])


def save_profile(path: str, body: RevolutionBody) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,phi\n")
        for t, r in zip(body.t, body.radius):
            fh.write(f"{t:.17g},{r:.17g}\n")


def load_polygon(path: str, o_symmetric: bool = False) -> ConvexPolygon:
    data = _read_two_columns(path, "x,y")
    return ConvexPolygon(data, o_symmetric=o_symmetric)


def save_polygon(path: str, poly: ConvexPolygon) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y\n")
        for x, y in poly.vertices:
            fh.write(f"{x:.17g},{y:.17g}\n")


def load_body(path: str, dim: int = 3, o_symmetric: bool = False):
    kind = sniff_body_header(path)
    if kind == "profile":
        return load_profile(path, dim)
    return load_polygon(path, o_symmetric=o_symmetric)


def load_gridfn(path: str, domain: str = WHOLE_LINE) -> GridFn1D:
    data = _read_two_columns(path, "x,value")
    return GridFn1D(data[:, 0], data[:, 1], domain=domain)


def save_gridfn(path: str, f: GridFn1D) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,value\n")
        for x, v in zip(f.grid, f.values):
            fh.write(f"{x:.17g},{v:.17g}\n")


def load_stack(path: str) -> LevelStack:
    base = os.path.dirname(os.path.abspath(path))
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ConfigError(f"{path}: empty stack file")
    head = dict(part.split("=", 1) for part in lines[0].split())
    if "dim" not in head or "levels" not in head:
        raise ConfigError(f"{path}: stack header must be 'dim=N levels=K'")
    dim = int(head["dim"])
    count = int(head["levels"])
    if len(lines) - 1 != count:
        raise ConfigError(f"{path}: header promises {count} levels, found {len(lines) - 1}")
    heights = []
    bodies = []
    for ln in lines[1:]:
        fields = dict(part.split("=", 1) for part in ln.split())
        if "t" not in fields or "profile" not in fields:
            raise ConfigError(f"{path}: level line must be 't=<height> profile=<path>'")
        heights.append(float(fields["t"]))
        prof = fields["profile"]
        if not os.path.isabs(prof):
            prof = os.path.join(base, prof)
        bodies.append(load_profile(prof, dim))
    return LevelStack(dim, np.asarray(heights), tuple(bodies))


def save_stack(path: str, stack: LevelStack, profile_prefix: str | None = None) -> None:
    base = os.path.dirname(os.path.abspath(path))
    prefix = profile_prefix or os.path.splitext(os.path.basename(path))[0]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"dim={stack.dim} levels={len(stack.levels)}\n")
        for k, (t, body) in enumerate(zip(stack.levels, stack.bodies)):
            rel = f"{prefix}_level{k:03d}.csv"
            save_profile(os.path.join(base, rel), body)
            fh.write(f"t={t:.17g} profile={rel}\n")
