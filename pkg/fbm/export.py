"""
Path export: CSV (time, component_0, ...) and a binary column-major dump.

Binary layout, little-endian:
    8-byte preamble   magic b'FBMP', uint16 version, uint16 dim
    float64           Hurst index
    uint64            count
    float64[count * (dim + 1)]  columns time, component_0, ..., component_{d-1}
"""
from dataclasses import dataclass
from pathlib import Path
import struct

import numpy as np

from core.exceptions import DomainError
from core.export import write_csv
from .process import FbmParams, PathSample

MAGIC = b'FBMP'
VERSION = 1
_PREAMBLE = struct.Struct('<4sHH')
_FIELDS = struct.Struct('<dQ')


@dataclass(frozen=True)
class PathDump:
    """Contents of a binary dump read back from disk"""
    params: FbmParams
    times: np.ndarray
    values: np.ndarray


def path_header(dim: int):
    return ['time'] + [f'component_{c}' for c in range(dim)]


def write_path_csv(path: PathSample, destination: Path) -> Path:
    rows = (
        [time, *row] for time, row in zip(path.times, path.values)
    )
    return write_csv(destination, path_header(path.params.dim), rows)


def encode_binary(path: PathSample) -> bytes:
    columns = np.column_stack([path.times, path.values]).astype('<f8')
    return (
        _PREAMBLE.pack(MAGIC, VERSION, path.params.dim)
        + _FIELDS.pack(path.params.hurst, path.grid.count)
        + columns.tobytes(order='F')
    )


def write_path_binary(path: PathSample, destination: Path) -> Path:
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_bytes(encode_binary(path))
    return destination


def decode_binary(payload: bytes) -> PathDump:
    if len(payload) < _PREAMBLE.size + _FIELDS.size:
        raise DomainError("Binary path dump is truncated")
    magic, version, dim = _PREAMBLE.unpack_from(payload, 0)
    if magic != MAGIC:
        raise DomainError(f"Not a path dump: magic {magic!r}")
    if version != VERSION:
        raise DomainError(f"Unsupported path dump version {version}")
    hurst, count = _FIELDS.unpack_from(payload, _PREAMBLE.size)
    body = np.frombuffer(payload, dtype='<f8', offset=_PREAMBLE.size + _FIELDS.size)
    if body.size != count * (dim + 1):
        raise DomainError(f"Path dump body holds {body.size} reals, expected {count * (dim + 1)}")
    columns = body.reshape((count, dim + 1), order='F')
    return PathDump(params=FbmParams(hurst=hurst, dim=dim), times=columns[:, 0].copy(),
                    values=columns[:, 1:].copy())


def read_path_binary(source: Path) -> PathDump:
    return decode_binary(Path(source).read_bytes())
