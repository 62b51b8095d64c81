"""Versioned, checksummed on-disk cache for zero tables.

Layout::

    ZPD-CACHE v1 height_max=<repr> source=<computed|ingested>
    index,gamma,s_at_gamma,phase_re,phase_im[,multiplicity]
    ...
    CHECKSUM <16 hex digits of FNV-1a 64 over all preceding bytes>

gamma is written with 20 significant digits, which round-trips doubles
exactly.  A sixth column appears only for multiple zeros.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .. import kernels
from ..errors import CacheChecksumError, CacheError, CacheVersionError
from .table import ZeroTable

MAGIC = "ZPD-CACHE"
VERSION = "v1"


def cache_store(path, table: ZeroTable) -> None:
    lines = [f"{MAGIC} {VERSION} height_max={table.height_max!r} source={table.source}\n"]
    gam = table.gamma.tolist()
    s_mid = table.s_at_gamma.tolist()
    re = table.phase.real.tolist()
    im = table.phase.imag.tolist()
    for i in range(len(table)):
        row = f"{i + 1},{gam[i]:.19e},{s_mid[i]!r},{re[i]!r},{im[i]!r}"
        if table.multiplicity[i] != 1:
            row += f",{int(table.multiplicity[i])}"
        lines.append(row + "\n")
    body = "".join(lines).encode("utf-8")
    blob = body + f"CHECKSUM {kernels.fnv1a64(body):016x}\n".encode("ascii")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, path)


def cache_load(path) -> ZeroTable:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no zero cache at {path}")
    blob = path.read_bytes()
    if not blob.startswith(MAGIC.encode()):
        raise CacheError(f"{path} is not a zero cache")
    header_end = blob.find(b"\n")
    header = blob[:header_end].decode("utf-8").split()
    if len(header) < 2 or header[1] != VERSION:
        raise CacheVersionError(f"unsupported cache version {header[1] if len(header) > 1 else '?'}")
    cut = blob.rstrip(b"\n").rfind(b"\n") + 1
    footer = blob[cut:].decode("ascii", "replace").strip()
    if not footer.startswith("CHECKSUM "):
        raise CacheChecksumError(f"{path}: checksum line missing (truncated file?)")
    try:
        expected = int(footer.split()[1], 16)
    except (IndexError, ValueError):
        raise CacheChecksumError(f"{path}: malformed checksum line") from None
    if kernels.fnv1a64(blob[:cut]) != expected:
        raise CacheChecksumError(f"{path}: checksum mismatch")

    fields = dict(kv.split("=", 1) for kv in header[2:] if "=" in kv)
    try:
        height_max = float(fields["height_max"])
        source = fields["source"]
    except KeyError as exc:
        raise CacheError(f"{path}: header lacks {exc.args[0]}") from None
    rows = blob[header_end + 1:cut].decode("utf-8").splitlines()
    gam = np.empty(len(rows))
    mult = np.ones(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        parts = row.split(",")
        if int(parts[0]) != i + 1:
            raise CacheError(f"{path}: row {i + 1} has index {parts[0]}")
        gam[i] = float(parts[1])
        if len(parts) > 5:
            mult[i] = int(parts[5])
    return ZeroTable(gam, height_max, source, mult)
