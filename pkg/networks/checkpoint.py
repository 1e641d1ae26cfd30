"""Versioned flat binary parameter dumps.

Layout (little-endian):
    8 bytes   magic b'FOGCKPT\\0'
    uint16    format version
    uint32    header length in bytes
    header    UTF-8 JSON: {"tensors": [[name, shape], ...], "meta": {...}}
    payload   float64 values of every tensor, in header order
"""
import json
import logging
import struct
from pathlib import Path

import numpy as np

from utils.errors import CheckpointFormatError

logger = logging.getLogger(__name__)

MAGIC = b'FOGCKPT\x00'
VERSION = 1
PREFIX = struct.Struct('<8sHI')


def save_checkpoint(path, tensors: dict, meta: dict = None):
    """Write ``tensors`` (name -> array) plus a JSON-serializable ``meta``."""
    names = list(tensors)
    header = json.dumps({
        'tensors': [[name, list(np.shape(tensors[name]))] for name in names],
        'meta': meta or {},
    }).encode('utf-8')
    payload = b''.join(np.asarray(tensors[name], dtype='<f8').tobytes() for name in names)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(PREFIX.pack(MAGIC, VERSION, len(header)))
        f.write(header)
        f.write(payload)
    logger.info('checkpoint written: %s (%d tensors)', path, len(names))
    return path


def load_checkpoint(path):
    """Return (tensors, meta) from a file written by save_checkpoint."""
    raw = Path(path).read_bytes()
    if len(raw) < PREFIX.size:
        raise CheckpointFormatError(f'{path}: truncated prefix')
    magic, version, header_len = PREFIX.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointFormatError(f'{path}: bad magic {magic!r}')
    if version != VERSION:
        raise CheckpointFormatError(f'{path}: unsupported version {version}')
    try:
        header = json.loads(raw[PREFIX.size:PREFIX.size + header_len].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f'{path}: unreadable header') from exc

    payload = np.frombuffer(raw, dtype='<f8', offset=PREFIX.size + header_len)
    expected = sum(int(np.prod(shape)) for _, shape in header['tensors'])
    if payload.shape[0] != expected:
        raise CheckpointFormatError(f'{path}: expected {expected} floats, got {payload.shape[0]}')

    tensors = {}
    offset = 0
    for name, shape in header['tensors']:
        size = int(np.prod(shape))
        tensors[name] = payload[offset:offset + size].reshape(shape).astype(np.float64)
        offset += size
    return tensors, header['meta']
