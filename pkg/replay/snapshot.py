"""Flat binary snapshot of a buffer's live transitions.

Layout (all little-endian):
    8 bytes   magic b'FOGRPLY1'
    uint32    state_dim
    uint32    action_dim
    uint64    record count
    records   float64 fields: insert_index, state[state_dim],
              action[action_dim], reward, next_state[state_dim], done

Not a stability-guaranteed format; it exists for heatmap post-processing.
"""
import struct
from pathlib import Path

import numpy as np

from models.transition import BufferSchema, Transition
from utils.errors import CheckpointFormatError

MAGIC = b'FOGRPLY1'
HEADER = struct.Struct('<8sIIQ')


def record_width(schema: BufferSchema) -> int:
    return 3 + 2 * schema.state_dim + schema.action_dim


def write_snapshot(sampler, path):
    storage = sampler.storage
    batch = storage.gather(storage.live_indices())
    records = np.column_stack([
        batch.indices.astype(np.float64),
        batch.states,
        batch.actions,
        batch.rewards,
        batch.next_states,
        batch.dones,
    ]) if len(batch) else np.zeros((0, record_width(storage.schema)))

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(HEADER.pack(MAGIC, storage.schema.state_dim, storage.schema.action_dim,
                            records.shape[0]))
        f.write(records.astype('<f8').tobytes())
    return path


def read_snapshot(path):
    """Return (schema, dict of column arrays) from a snapshot file."""
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise CheckpointFormatError(f'{path}: truncated header')
    magic, state_dim, action_dim, count = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointFormatError(f'{path}: bad magic {magic!r}')
    schema = BufferSchema(state_dim, action_dim)
    width = record_width(schema)
    payload = np.frombuffer(raw, dtype='<f8', offset=HEADER.size)
    if payload.shape[0] != count * width:
        raise CheckpointFormatError(f'{path}: expected {count * width} floats, got {payload.shape[0]}')
    records = payload.reshape(count, width).astype(np.float64)

    s, a = state_dim, action_dim
    columns = {
        'insert_index': records[:, 0].astype(np.int64),
        'states': records[:, 1:1 + s],
        'actions': records[:, 1 + s:1 + s + a],
        'rewards': records[:, 1 + s + a],
        'next_states': records[:, 2 + s + a:2 + 2 * s + a],
        'dones': records[:, 2 + 2 * s + a],
    }
    return schema, columns


def restore_into(sampler, columns):
    """Push snapshot records into an empty sampler, preserving insert indexes."""
    indices = columns['insert_index']
    if indices.shape[0]:
        # fast-forward the global counter so indexes line up with the original run
        sampler.storage.next_index = int(indices[0])
    for k in range(indices.shape[0]):
        sampler.push(Transition(
            state=columns['states'][k],
            action=columns['actions'][k],
            reward=float(columns['rewards'][k]),
            next_state=columns['next_states'][k],
            done=bool(columns['dones'][k]),
        ))
    return sampler
