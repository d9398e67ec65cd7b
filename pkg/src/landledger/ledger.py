"""Hash-linked block ledger with Merkle roots and append-only file persistence.

Single-writer discipline: appends serialize through one lock; readers see
the in-memory block list, which only ever grows. The chain file is a
sequence of u32-length-prefixed block serializations; a sidecar index
maps block_id to byte offset and block hash and is rebuildable by a full
scan.
"""

from __future__ import annotations

import hashlib
import os
import struct
import threading
import time
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

from .errors import BlockNotFoundError, ChainCorruptError, EmptyBlockError

ZERO32 = bytes(32)
HEADER_LEN = 92
# tolerated clock skew when checking that no block claims a future timestamp
MAX_FUTURE_SKEW = 300


class TxKind(IntEnum):
    GENESIS = 0
    REGISTER = 1
    TRANSFER = 2


@dataclass(frozen=True)
class TransactionRecord:
    kind: TxKind
    owner_id: str
    dna_payload: str
    key_fingerprint: bytes
    deed_hash: bytes
    created_at: int

    def serialize(self) -> bytes:
        owner = self.owner_id.encode("utf-8")
        payload = self.dna_payload.encode("ascii")
        return b"".join(
            (
                struct.pack(">B", int(self.kind)),
                struct.pack(">H", len(owner)),
                owner,
                struct.pack(">I", len(payload)),
                payload,
                self.key_fingerprint,
                self.deed_hash,
                struct.pack(">Q", self.created_at),
            )
        )

    @property
    def tx_id(self) -> bytes:
        return hashlib.sha256(self.serialize()).digest()

    @classmethod
    def parse(cls, data: bytes, off: int) -> tuple["TransactionRecord", int]:
        try:
            kind = TxKind(data[off])
            off += 1
            (owner_len,) = struct.unpack_from(">H", data, off)
            off += 2
            owner = data[off : off + owner_len].decode("utf-8")
            if len(owner.encode("utf-8")) != owner_len:
                raise ValueError("short owner field")
            off += owner_len
            (payload_len,) = struct.unpack_from(">I", data, off)
            off += 4
            payload_bytes = data[off : off + payload_len]
            if len(payload_bytes) != payload_len:
                raise ValueError("short payload field")
            payload = payload_bytes.decode("ascii")
            off += payload_len
            fingerprint = bytes(data[off : off + 32])
            deed_hash = bytes(data[off + 32 : off + 64])
            if len(deed_hash) != 32:
                raise ValueError("short hash fields")
            off += 64
            (created_at,) = struct.unpack_from(">Q", data, off)
            off += 8
        except (struct.error, ValueError, IndexError, UnicodeDecodeError) as exc:
            raise ChainCorruptError(f"unparseable transaction: {exc}") from exc
        return (
            cls(
                kind=kind,
                owner_id=owner,
                dna_payload=payload,
                key_fingerprint=fingerprint,
                deed_hash=deed_hash,
                created_at=created_at,
            ),
            off,
        )


@dataclass(frozen=True)
class BlockHeader:
    block_id: int
    prev_hash: bytes
    tx_count: int
    nonce: int
    merkle_root: bytes
    timestamp: int

    def serialize(self) -> bytes:
        return struct.pack(
            ">Q32sIQ32sQ",
            self.block_id,
            self.prev_hash,
            self.tx_count,
            self.nonce,
            self.merkle_root,
            self.timestamp,
        )

    @classmethod
    def parse(cls, data: bytes) -> "BlockHeader":
        if len(data) != HEADER_LEN:
            raise ChainCorruptError(f"header must be {HEADER_LEN} bytes")
        block_id, prev_hash, tx_count, nonce, merkle_root, timestamp = struct.unpack(
            ">Q32sIQ32sQ", data
        )
        return cls(block_id, prev_hash, tx_count, nonce, merkle_root, timestamp)


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    transactions: tuple[TransactionRecord, ...]

    def serialize(self) -> bytes:
        parts = [self.header.serialize()]
        for tx in self.transactions:
            body = tx.serialize()
            parts.append(struct.pack(">I", len(body)))
            parts.append(body)
        return b"".join(parts)

    @classmethod
    def parse(cls, data: bytes) -> "Block":
        header = BlockHeader.parse(data[:HEADER_LEN])
        txs = []
        off = HEADER_LEN
        for _ in range(header.tx_count):
            if off + 4 > len(data):
                raise ChainCorruptError("truncated transaction frame")
            (tx_len,) = struct.unpack_from(">I", data, off)
            off += 4
            if off + tx_len > len(data):
                raise ChainCorruptError("transaction frame overruns block")
            tx, consumed = TransactionRecord.parse(data, off)
            if consumed != off + tx_len:
                raise ChainCorruptError("transaction frame length mismatch")
            off += tx_len
            txs.append(tx)
        if off != len(data):
            raise ChainCorruptError("trailing bytes after last transaction")
        return cls(header=header, transactions=tuple(txs))


def merkle_root(tx_hashes: list[bytes]) -> bytes:
    """Pairwise SHA-256 tree; odd node pairs with a copy of itself; single leaf is the root."""
    if not tx_hashes:
        raise EmptyBlockError("merkle root of zero transactions is undefined")
    level = list(tx_hashes)
    while len(level) > 1:
        if len(level) % 2 == 1:
            level.append(level[-1])
        level = [
            hashlib.sha256(level[i] + level[i + 1]).digest()
            for i in range(0, len(level), 2)
        ]
    return level[0]


def block_hash(block: Block) -> bytes:
    return hashlib.sha256(block.header.serialize()).digest()


@dataclass(frozen=True)
class Violation:
    position: int
    reason: str


@dataclass
class Chain:
    """In-memory chain plus its append-only backing files."""

    data_dir: Path
    blocks: list[Block] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def chain_path(self) -> Path:
        return self.data_dir / "chain.dat"

    @property
    def index_path(self) -> Path:
        return self.data_dir / "chain.idx"

    # --- lifecycle ---------------------------------------------------------

    @classmethod
    def create(cls, data_dir: str | Path) -> "Chain":
        """Initialize a new chain with its genesis block."""
        chain = cls(data_dir=Path(data_dir))
        chain.data_dir.mkdir(parents=True, exist_ok=True)
        if chain.chain_path.exists():
            raise ChainCorruptError(f"chain file already exists at {chain.chain_path}")
        chain.chain_path.touch()
        chain.index_path.write_text("")
        genesis_tx = TransactionRecord(
            kind=TxKind.GENESIS,
            owner_id="",
            dna_payload="",
            key_fingerprint=ZERO32,
            deed_hash=ZERO32,
            created_at=int(time.time()),
        )
        chain._append_unlocked([genesis_tx])
        return chain

    @classmethod
    def load(cls, data_dir: str | Path) -> "Chain":
        """Parse the chain file; raises chain-corrupt on any framing damage."""
        chain = cls(data_dir=Path(data_dir))
        data = chain.chain_path.read_bytes()
        off = 0
        while off < len(data):
            if off + 4 > len(data):
                raise ChainCorruptError("truncated block length prefix")
            (length,) = struct.unpack_from(">I", data, off)
            off += 4
            if off + length > len(data):
                raise ChainCorruptError("block frame overruns file")
            chain.blocks.append(Block.parse(data[off : off + length]))
            off += length
        if not chain.blocks:
            raise ChainCorruptError("chain file holds no blocks")
        return chain

    @classmethod
    def open(cls, data_dir: str | Path) -> "Chain":
        data_dir = Path(data_dir)
        if (data_dir / "chain.dat").exists():
            return cls.load(data_dir)
        return cls.create(data_dir)

    # --- reads ---------------------------------------------------------------

    @property
    def tip(self) -> Block:
        return self.blocks[-1]

    def get_block(self, block_id: int) -> Block:
        if 0 <= block_id < len(self.blocks):
            return self.blocks[block_id]
        raise BlockNotFoundError(f"no block with id {block_id}", block_id=block_id)

    # --- writes --------------------------------------------------------------

    def append_block(self, transactions: list[TransactionRecord]) -> int:
        if not transactions:
            raise EmptyBlockError("a block must carry at least one transaction")
        with self._lock:
            return self._append_unlocked(transactions)

    def _append_unlocked(self, transactions: list[TransactionRecord]) -> int:
        prev = block_hash(self.blocks[-1]) if self.blocks else ZERO32
        ts = int(time.time())
        if self.blocks:
            ts = max(ts, self.blocks[-1].header.timestamp)
        header = BlockHeader(
            block_id=len(self.blocks),
            prev_hash=prev,
            tx_count=len(transactions),
            nonce=0,
            merkle_root=merkle_root([tx.tx_id for tx in transactions]),
            timestamp=ts,
        )
        block = Block(header=header, transactions=tuple(transactions))
        self._persist(block)
        self.blocks.append(block)
        return header.block_id

    def _persist(self, block: Block) -> None:
        body = block.serialize()
        with open(self.chain_path, "ab") as fh:
            offset = fh.tell()
            fh.write(struct.pack(">I", len(body)))
            fh.write(body)
            fh.flush()
            os.fsync(fh.fileno())
        with open(self.index_path, "a") as fh:
            fh.write(f"{block.header.block_id} {offset} {block_hash(block).hex()}\n")
            fh.flush()
            os.fsync(fh.fileno())

    # --- verification ----------------------------------------------------------

    def _index_hashes(self) -> dict[int, bytes] | None:
        if not self.index_path.exists():
            return None
        hashes = {}
        try:
            for line in self.index_path.read_text().splitlines():
                if not line.strip():
                    continue
                block_id, _offset, digest = line.split()
                hashes[int(block_id)] = bytes.fromhex(digest)
        except ValueError:
            return None
        return hashes

    def verify(self, now: int | None = None) -> Violation | None:
        """Full-chain integrity check; returns the first violation, or None."""
        now = int(time.time()) if now is None else now
        index = self._index_hashes()
        prev_ts = 0
        for i, block in enumerate(self.blocks):
            h = block.header
            if h.block_id != i:
                return Violation(i, "id-not-sequential")
            if h.nonce != 0:
                return Violation(i, "nonce-nonzero")
            if i == 0:
                if h.prev_hash != ZERO32:
                    return Violation(i, "genesis-prev-hash")
            elif h.prev_hash != block_hash(self.blocks[i - 1]):
                return Violation(i, "link-broken")
            if h.tx_count != len(block.transactions) or not block.transactions:
                return Violation(i, "tx-count-mismatch")
            if h.merkle_root != merkle_root([tx.tx_id for tx in block.transactions]):
                return Violation(i, "merkle-mismatch")
            if h.timestamp < prev_ts:
                return Violation(i, "timestamp-regression")
            if h.timestamp > now + MAX_FUTURE_SKEW:
                return Violation(i, "timestamp-in-future")
            if index is not None and index.get(i) != block_hash(block):
                return Violation(i, "hash-index-mismatch")
            prev_ts = h.timestamp
        return None


def verify_chain_dir(data_dir: str | Path, now: int | None = None) -> Violation | None:
    """Load and verify a persisted chain; parse damage counts as a violation."""
    try:
        chain = Chain.load(data_dir)
    except ChainCorruptError:
        return Violation(-1, "chain-unparseable")
    return chain.verify(now=now)
