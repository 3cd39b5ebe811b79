"""Materialization of per-(constraint, subspace) skyline buckets.

Each bucket holds (tuple id, normalized measure vector) entries — a
denormalized copy so comparisons never go back to the table. Two backends
share one interface: an in-memory dict and a file-backed store with one
binary file per non-empty bucket.

File layout: <root>/<subspace-mask-hex>/<constraint-key-hex>.bin
Record format (little-endian): a 4-byte record count, then per record an
8-byte tuple id and one 8-byte float per measure attribute, then a CRC32
trailer over everything before it. Buckets are rewritten whole via a
temp file and atomic rename; an emptied bucket's file is deleted, so
emptiness is a filesystem existence check.
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path
from typing import Iterator

from skyfact.lattice import Pattern, encode_key

BucketEntry = tuple[int, tuple[float, ...]]
StoreKey = tuple[Pattern, int]


class StoreError(RuntimeError):
    """Backend failure: corrupt bucket file, missing root directory."""


class SkylineStore:
    """Interface shared by both backends. Keys are (pattern, subspace mask);
    iteration order and entry order are deterministic."""

    def get(self, key: StoreKey) -> list[BucketEntry]:
        raise NotImplementedError

    def write(self, key: StoreKey, entries: list[BucketEntry]) -> None:
        """Overwrite a bucket with the given entries; empty deletes it."""
        raise NotImplementedError

    def put(self, key: StoreKey, entry: BucketEntry) -> None:
        entries = self.get(key)
        if any(e[0] == entry[0] for e in entries):
            raise StoreError(f"duplicate tuple id {entry[0]} in bucket")
        entries.append(entry)
        self.write(key, entries)

    def remove(self, key: StoreKey, tuple_id: int) -> bool:
        entries = self.get(key)
        kept = [e for e in entries if e[0] != tuple_id]
        if len(kept) == len(entries):
            return False
        self.write(key, kept)
        return True

    def is_empty(self, key: StoreKey) -> bool:
        raise NotImplementedError

    def stored_count(self) -> int:
        """Total entries across all buckets."""
        raise NotImplementedError

    def keys(self) -> Iterator[StoreKey]:
        raise NotImplementedError


class MemoryStore(SkylineStore):
    def __init__(self) -> None:
        self._buckets: dict[tuple[bytes, int], list[BucketEntry]] = {}
        self._patterns: dict[bytes, Pattern] = {}
        self._count = 0

    @staticmethod
    def _raw(key: StoreKey) -> tuple[bytes, int]:
        return encode_key(key[0]), key[1]

    def get(self, key: StoreKey) -> list[BucketEntry]:
        return list(self._buckets.get(self._raw(key), ()))

    def write(self, key: StoreKey, entries: list[BucketEntry]) -> None:
        raw = self._raw(key)
        old = len(self._buckets.get(raw, ()))
        if entries:
            self._buckets[raw] = list(entries)
            self._patterns[raw[0]] = key[0]
        else:
            self._buckets.pop(raw, None)
        self._count += len(entries) - old

    def is_empty(self, key: StoreKey) -> bool:
        return self._raw(key) not in self._buckets

    def stored_count(self) -> int:
        return self._count

    def keys(self) -> Iterator[StoreKey]:
        for raw_key, mask in sorted(self._buckets):
            yield self._patterns[raw_key], mask


_HEADER = struct.Struct("<I")
_CRC = struct.Struct("<I")


class FileStore(SkylineStore):
    """One binary file per non-empty bucket; pure read-modify-write, no
    cross-insertion cache."""

    def __init__(self, root: str | Path, n_measures: int) -> None:
        self.root = Path(root)
        if not self.root.is_dir():
            raise StoreError(f"store root is not a directory: {self.root}")
        self.n_measures = n_measures
        self._record = struct.Struct(f"<q{n_measures}d")
        self._count = 0
        # Rebuild the entry count when opening an existing store directory.
        for path in self.root.glob("*/*.bin"):
            self._count += self._record_count(path)

    def _path(self, key: StoreKey) -> Path:
        pattern, mask = key
        return self.root / f"{mask:08x}" / f"{encode_key(pattern).hex()}.bin"

    def _record_count(self, path: Path) -> int:
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise StoreError(f"truncated bucket file: {path}")
        return _HEADER.unpack(header)[0]

    def load(self, key: StoreKey) -> list[BucketEntry]:
        """Read a whole bucket file into memory, verifying the checksum."""
        path = self._path(key)
        if not path.exists():
            return []
        blob = path.read_bytes()
        if len(blob) < _HEADER.size + _CRC.size:
            raise StoreError(f"truncated bucket file: {path}")
        body, trailer = blob[: -_CRC.size], blob[-_CRC.size :]
        if zlib.crc32(body) != _CRC.unpack(trailer)[0]:
            raise StoreError(f"checksum mismatch in bucket file: {path}")
        (count,) = _HEADER.unpack(body[: _HEADER.size])
        expect = _HEADER.size + count * self._record.size
        if len(body) != expect:
            raise StoreError(f"bucket file length mismatch: {path}")
        entries = []
        for off in range(_HEADER.size, len(body), self._record.size):
            fields = self._record.unpack_from(body, off)
            entries.append((fields[0], tuple(fields[1:])))
        return entries

    def flush(self, key: StoreKey, entries: list[BucketEntry]) -> None:
        """Atomically overwrite the bucket file; delete it when empty."""
        path = self._path(key)
        if not entries:
            path.unlink(missing_ok=True)
            return
        body = bytearray(_HEADER.pack(len(entries)))
        for tuple_id, measures in entries:
            body += self._record.pack(tuple_id, *measures)
        body += _CRC.pack(zlib.crc32(bytes(body)))
        path.parent.mkdir(exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(bytes(body))
        os.replace(tmp, path)

    def get(self, key: StoreKey) -> list[BucketEntry]:
        return self.load(key)

    def write(self, key: StoreKey, entries: list[BucketEntry]) -> None:
        old = self._record_count(self._path(key)) if not self.is_empty(key) else 0
        self.flush(key, entries)
        self._count += len(entries) - old

    def is_empty(self, key: StoreKey) -> bool:
        return not self._path(key).exists()

    def stored_count(self) -> int:
        return self._count

    def keys(self) -> Iterator[StoreKey]:
        from skyfact.lattice import decode_key

        found = []
        for mask_dir in self.root.iterdir():
            if not mask_dir.is_dir():
                continue
            mask = int(mask_dir.name, 16)
            for path in mask_dir.glob("*.bin"):
                found.append((decode_key(bytes.fromhex(path.stem)), mask))
        yield from sorted(found, key=lambda k: (encode_key(k[0]), k[1]))


class ContextCounter:
    """Incremental |context| counts for every capped constraint seen so far.

    Counts are created lazily: the full constraint space over all domains
    is far too large to pre-allocate.
    """

    def __init__(self) -> None:
        self._counts: dict[Pattern, int] = {}

    def add(self, patterns: list[Pattern]) -> None:
        for p in patterns:
            self._counts[p] = self._counts.get(p, 0) + 1

    def count(self, pattern: Pattern) -> int:
        return self._counts.get(pattern, 0)
