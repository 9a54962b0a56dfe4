from ledger.transactions import (RequestPayload, Transaction, TxKind, charging_request_tx, deploy_tx,
                                 load_post_tx, slot_trigger_tx)
from ledger.contract import (ContractState, Receipt, admit, deploy, is_authorized, post_utility_load,
                             receive_charging_request, run_slot)
from ledger.chain import Block, Chain, Replica, append_block, verify_chain

__all__ = [
    "RequestPayload", "Transaction", "TxKind", "charging_request_tx", "deploy_tx",
    "load_post_tx", "slot_trigger_tx",
    "ContractState", "Receipt", "admit", "deploy", "is_authorized", "post_utility_load",
    "receive_charging_request", "run_slot",
    "Block", "Chain", "Replica", "append_block", "verify_chain",
]
