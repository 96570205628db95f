"""The .ssa container: named numeric arrays plus a JSON header of scalars.

Layout:  magic b"SSA\\x01" | uint32-le header length | UTF-8 JSON header |
array payload. The header carries scalar fields and, per array, dtype /
shape / payload offset / sha256 checksum, so files are readable from any
language and any byte flip in array data is detected on load.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ContainerError, TamperError

MAGIC = b"SSA\x01"
FORMAT_VERSION = 1


@dataclass
class SsaFile:
    scalars: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)


def _canonical_array(arr: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(arr)


def array_digest(arr: np.ndarray) -> str:
    """sha256 hex digest of an array's C-order bytes."""
    return hashlib.sha256(_canonical_array(arr).tobytes()).hexdigest()


def write_ssa_bytes(scalars: dict | None = None, arrays: dict | None = None) -> bytes:
    scalars = scalars or {}
    arrays = arrays or {}
    payload = io.BytesIO()
    index = {}
    for name in sorted(arrays):
        arr = _canonical_array(np.asarray(arrays[name]))
        if arr.dtype == object:
            raise ContainerError(f"array {name!r} has non-numeric dtype")
        raw = arr.tobytes()
        index[name] = {
            "dtype": arr.dtype.str,
            "shape": list(arr.shape),
            "offset": payload.tell(),
            "nbytes": len(raw),
            "sha256": hashlib.sha256(raw).hexdigest(),
        }
        payload.write(raw)
    header = json.dumps(
        {"format_version": FORMAT_VERSION, "scalars": scalars, "arrays": index},
        sort_keys=True,
    ).encode("utf-8")
    return MAGIC + struct.pack("<I", len(header)) + header + payload.getvalue()


def write_ssa(path, scalars: dict | None = None, arrays: dict | None = None) -> None:
    """Write a container atomically (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = write_ssa_bytes(scalars, arrays)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, path)


def read_ssa_bytes(blob: bytes) -> SsaFile:
    if len(blob) < len(MAGIC) + 4 or blob[: len(MAGIC)] != MAGIC:
        raise ContainerError("not a .ssa container (bad magic)")
    (header_len,) = struct.unpack_from("<I", blob, len(MAGIC))
    header_end = len(MAGIC) + 4 + header_len
    if header_end > len(blob):
        raise ContainerError("truncated container header")
    try:
        header = json.loads(blob[len(MAGIC) + 4 : header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ContainerError(f"unreadable container header: {exc}") from exc
    if header.get("format_version") != FORMAT_VERSION:
        raise ContainerError(f"unsupported format version {header.get('format_version')!r}")
    arrays = {}
    for name, meta in header.get("arrays", {}).items():
        start = header_end + meta["offset"]
        end = start + meta["nbytes"]
        if end > len(blob):
            raise ContainerError(f"truncated payload for array {name!r}")
        raw = blob[start:end]
        if hashlib.sha256(raw).hexdigest() != meta["sha256"]:
            raise TamperError(f"checksum mismatch for array {name!r}")
        arrays[name] = np.frombuffer(raw, dtype=np.dtype(meta["dtype"])).reshape(
            meta["shape"]
        ).copy()
    return SsaFile(scalars=header.get("scalars", {}), arrays=arrays)


def read_ssa(path) -> SsaFile:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such container file: {path}")
    return read_ssa_bytes(path.read_bytes())
