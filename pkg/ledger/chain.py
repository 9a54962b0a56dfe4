"""
Hash-linked blocks over the charging contract.

A single sequencer orders transactions into blocks; any number of replicas
re-execute them and must arrive at the same state root at every height.
"""
import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from errors import ChainVerificationError
from ledger import codec, contract
from ledger.contract import ContractState, Receipt
from ledger.transactions import Transaction, TxKind
from scheduler import SchedulerFactory, SchedulerKind
from utils.logger import setup_logger

logger = setup_logger()

GENESIS_PREV_HASH = b"\x00" * 32
EMPTY_STATE_ROOT = codec.digest(b"")


@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: bytes
    tx_list: Tuple[Transaction, ...]
    receipts: Tuple[Receipt, ...]
    state_root: bytes
    block_hash: bytes

    @staticmethod
    def compute_hash(height: int, prev_hash: bytes, tx_list: Sequence[Transaction],
                     receipts: Sequence[Receipt], state_root: bytes) -> bytes:
        return codec.digest(codec.encode([
            height, prev_hash, [tx.to_item() for tx in tx_list],
            [r.to_item() for r in receipts], state_root,
        ]))

    def encode(self) -> bytes:
        return codec.encode([
            self.height, self.prev_hash, [tx.to_item() for tx in self.tx_list],
            [r.to_item() for r in self.receipts], self.state_root, self.block_hash,
        ])

    @classmethod
    def decode(cls, data: bytes) -> "Block":
        height, prev_hash, txs, receipts, root, block_hash = codec.as_list(codec.decode(data), 6)
        return cls(
            codec.as_int(height),
            codec.as_bytes(prev_hash),
            tuple(Transaction.from_item(t) for t in codec.as_list(txs)),
            tuple(Receipt.from_item(r) for r in codec.as_list(receipts)),
            codec.as_bytes(root),
            codec.as_bytes(block_hash),
        )


class Replica:
    """Independent copy of the contract state machine."""

    def __init__(self, kind=SchedulerKind.PROPOSED):
        self.state: Optional[ContractState] = None
        self.kind = SchedulerFactory.parse_kind(kind)
        self.roots: List[bytes] = []

    def state_root(self) -> bytes:
        return self.state.state_root() if self.state is not None else EMPTY_STATE_ROOT

    def apply_tx(self, tx: Transaction) -> Receipt:
        if self.state is None:
            if tx.kind != TxKind.CONTRACT_DEPLOY:
                return contract.rejected("contract not deployed")
            try:
                self.state = contract.deploy_from_tx(tx)
            except Exception as e:
                self.state = None
                return contract.rejected(f"deployment rejected: {e}")
            return Receipt(contract.ACCEPTED)

        handlers = {
            TxKind.CHARGING_REQUEST: contract.receive_charging_request,
            TxKind.UTILITY_LOAD_POST: contract.post_utility_load,
            TxKind.SLOT_TRIGGER: lambda s, t: contract.trigger_slot(s, t, self.kind),
        }
        handler = handlers.get(tx.kind)
        if handler is None:
            return contract.rejected("contract already deployed")
        snapshot = copy.deepcopy(self.state)
        try:
            self.state, receipt = handler(self.state, tx)
        except Exception as e:
            # handlers mutate in place; roll back
            self.state = snapshot
            logger.warning(f"{tx.kind.name} from {tx.sender_address.hex()} raised: {e!r}")
            return contract.rejected(f"execution failed: {e}")
        return receipt

    def execute(self, tx_list: Iterable[Transaction]) -> Tuple[Tuple[Receipt, ...], bytes]:
        receipts = tuple(self.apply_tx(tx) for tx in tx_list)
        root = self.state_root()
        self.roots.append(root)
        return receipts, root

    def apply_block(self, block: Block) -> bytes:
        return self.execute(block.tx_list)[1]


@dataclass
class Chain:
    blocks: List[Block] = field(default_factory=list)
    replica: Replica = field(default_factory=Replica)

    @property
    def head_hash(self) -> bytes:
        return self.blocks[-1].block_hash if self.blocks else GENESIS_PREV_HASH

    @property
    def height(self) -> int:
        return len(self.blocks)

    @property
    def state(self) -> Optional[ContractState]:
        return self.replica.state

    @classmethod
    def from_blocks(cls, blocks: Sequence[Block]) -> "Chain":
        """Rebuild head state from verified blocks."""
        height = first_invalid_block(blocks)
        if height is not None:
            raise ChainVerificationError(height, "hash link or state root mismatch")
        chain = cls()
        for block in blocks:
            chain.replica.apply_block(block)
            chain.blocks.append(block)
        return chain


def append_block(chain: Chain, tx_list: Sequence[Transaction]) -> Block:
    height = chain.height
    prev_hash = chain.head_hash
    tx_list = tuple(tx_list)
    receipts, root = chain.replica.execute(tx_list)
    block = Block(height, prev_hash, tx_list, receipts, root,
                  Block.compute_hash(height, prev_hash, tx_list, receipts, root))
    chain.blocks.append(block)
    logger.info(f"Appended block {height} with {len(tx_list)} transactions")
    return block


def first_invalid_block(blocks: Sequence[Block]) -> Optional[int]:
    replica = Replica()
    prev_hash = GENESIS_PREV_HASH
    for index, block in enumerate(blocks):
        if block.height != index or block.prev_hash != prev_hash:
            return index
        receipts, root = replica.execute(block.tx_list)
        if receipts != block.receipts or root != block.state_root:
            return index
        expected = Block.compute_hash(block.height, block.prev_hash, block.tx_list, block.receipts, block.state_root)
        if expected != block.block_hash:
            return index
        prev_hash = block.block_hash
    return None


def verify_chain(chain: Union[Chain, Sequence[Block]]) -> bool:
    blocks = chain.blocks if isinstance(chain, Chain) else chain
    return first_invalid_block(blocks) is None


def replicas_agree(replicas: Sequence[Replica]) -> bool:
    if not replicas:
        return True
    first = replicas[0].roots
    return all(r.roots == first for r in replicas[1:])


def find_request(blocks: Sequence[Block], address: bytes) -> Optional[Tuple[int, Receipt]]:
    """Locate the (first) charging request sent from `address`."""
    for block in blocks:
        for tx, receipt in zip(block.tx_list, block.receipts):
            if tx.kind == TxKind.CHARGING_REQUEST and tx.sender_address == address:
                return block.height, receipt
    return None


def audit_slot(blocks: Sequence[Block], height: int) -> bool:
    """Recompute every slot schedule recorded in block `height` from the preceding state."""
    replica = Replica()
    for block in blocks[:height]:
        replica.apply_block(block)
    block = blocks[height]
    for tx, receipt in zip(block.tx_list, block.receipts):
        if tx.kind == TxKind.SLOT_TRIGGER and receipt.accepted and replica.state is not None:
            scheduler = SchedulerFactory.get_scheduler(replica.kind)
            expected = scheduler(replica.state.demands(), replica.state.params)
            if expected != receipt.schedule:
                logger.warning(f"Block {height}: recorded schedule differs from recomputation")
                return False
        replica.apply_tx(tx)
    return True


# --- file formats: one hex-encoded item per line ---

def write_chain(path: Union[str, Path], blocks: Iterable[Block], append: bool = False) -> None:
    with open(path, "a" if append else "w") as f:
        for block in blocks:
            f.write(block.encode().hex() + "\n")


def read_chain(path: Union[str, Path]) -> List[Block]:
    path = Path(path)
    if not path.exists():
        return []
    blocks = []
    lines = [line for line in path.read_text().splitlines() if line.strip()]
    for height, line in enumerate(lines):
        try:
            blocks.append(Block.decode(bytes.fromhex(line.strip())))
        except ValueError as e:
            raise ChainVerificationError(height, f"undecodable block: {e}")
    return blocks


def write_tx_log(path: Union[str, Path], txs: Iterable[Transaction]) -> None:
    with open(path, "w") as f:
        for tx in txs:
            f.write(tx.encode().hex() + "\n")


def read_tx_log(path: Union[str, Path]) -> List[Transaction]:
    return [Transaction.decode(bytes.fromhex(line.strip()))
            for line in Path(path).read_text().splitlines() if line.strip()]


def replay_tx_log(txs: Sequence[Transaction], block_size: int = 10) -> Chain:
    """Sequence a transaction log into blocks of `block_size` on a fresh replica."""
    chain = Chain()
    for start in range(0, len(txs), block_size):
        append_block(chain, txs[start:start + block_size])
    return chain
