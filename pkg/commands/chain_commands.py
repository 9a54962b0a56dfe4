"""
Chain-log commands. Every command reads and re-verifies the whole log before
acting and only ever appends to it.
"""
import datetime
from pathlib import Path
from typing import Optional, Union

from credentials import KeyRole, UtilityKeyPair, load_token
from commands.key_commands import load_role, load_pseudonym
from errors import ChainVerificationError, ValidationError
from ledger.chain import (Block, Chain, append_block, audit_slot, find_request, first_invalid_block, read_chain,
                          write_chain)
from ledger.contract import Receipt
from ledger.transactions import DeployPayload, charging_request_tx, deploy_tx, load_post_tx, slot_trigger_tx
from utils.logger import setup_logger

logger = setup_logger()


def load_chain(chain_log: Union[str, Path]) -> Chain:
    chain = Chain.from_blocks(read_chain(chain_log))
    logger.debug(f"Loaded {chain.height} blocks from {chain_log}")
    return chain


def _deployed(chain: Chain, chain_log) -> None:
    if chain.state is None:
        raise ValidationError(f"no contract deployed in {chain_log}; run `deploy` first")


def _commit(chain: Chain, tx_list, chain_log) -> Block:
    block = append_block(chain, tx_list)
    write_chain(chain_log, [block], append=True)
    return block


def _report(block: Block) -> Receipt:
    receipt = block.receipts[-1]
    if receipt.accepted:
        print(f"accepted in block {block.height}")
    else:
        print(f"rejected in block {block.height}: {receipt.reason}")
    return receipt


def cmd_deploy(utility_key: Union[str, Path], capacity_C: int, regular_load_PR: int, community: str,
               chain_log: Union[str, Path], start_date: Optional[datetime.date] = None,
               battery_capacity: int = 200, period_days: int = 7,
               beta1: int = 500, beta2: int = 500) -> Block:
    chain = load_chain(chain_log)
    if chain.height:
        raise ValidationError(f"{chain_log} already holds {chain.height} blocks")
    if min(capacity_C, regular_load_PR, battery_capacity, period_days, beta1, beta2) < 0:
        raise ValidationError("deployment parameters must be non-negative")

    utility = load_role(utility_key, KeyRole.UTILITY, UtilityKeyPair)
    payload = DeployPayload(capacity_C, regular_load_PR, community, utility.public_bytes,
                            start_date or datetime.date.today(), beta1, beta2,
                            battery_capacity, period_days)
    genesis = append_block(chain, [deploy_tx(utility, payload)])
    if not genesis.receipts[0].accepted:
        raise ValidationError(genesis.receipts[0].reason)
    write_chain(chain_log, [genesis])
    print(f"contract deployed for {community}: headroom {capacity_C - regular_load_PR} kW, "
          f"starting {payload.start_date.isoformat()}")
    return genesis


def cmd_post_load(utility_key: Union[str, Path], regular_load_PR: int, chain_log: Union[str, Path]) -> Receipt:
    if regular_load_PR < 0:
        raise ValidationError(f"regular_load_PR must be >= 0, got: {regular_load_PR}")
    chain = load_chain(chain_log)
    _deployed(chain, chain_log)
    utility = load_role(utility_key, KeyRole.UTILITY, UtilityKeyPair)
    return _report(_commit(chain, [load_post_tx(utility, regular_load_PR)], chain_log))


def cmd_submit(token: Union[str, Path], pseudonym_key: Union[str, Path], power_Pv: int, soc_Sv: int,
               tcc_Kv: int, chain_log: Union[str, Path]) -> Receipt:
    """Append a charging request; a rejection is recorded on the chain and returned."""
    for name, value in (("power_Pv", power_Pv), ("soc_Sv", soc_Sv), ("tcc_Kv", tcc_Kv)):
        if value < 0:
            raise ValidationError(f"{name} must be >= 0, got: {value}")
    chain = load_chain(chain_log)
    _deployed(chain, chain_log)
    pseudonym = load_pseudonym(pseudonym_key)
    tx = charging_request_tx(pseudonym, load_token(token), power_Pv, soc_Sv, tcc_Kv)
    print(f"request from {pseudonym.address.hex()}")
    return _report(_commit(chain, [tx], chain_log))


def cmd_run_slot(chain_log: Union[str, Path], date: Optional[datetime.date] = None) -> Receipt:
    chain = load_chain(chain_log)
    _deployed(chain, chain_log)
    state = chain.state
    slot = state.current_slot
    demands = {d.id: d for d in state.demands()}
    tx = slot_trigger_tx(slot, date or state.current_date)

    block = append_block(chain, [tx])
    receipt = block.receipts[0]
    if not receipt.accepted:
        # nothing was written
        raise ValidationError(f"slot trigger rejected: {receipt.reason}")
    write_chain(chain_log, [block], append=True)

    schedule = receipt.schedule
    print(f"slot {slot} (block {block.height}): granted {schedule.total_granted} kW "
          f"to {len(schedule.granted)} of {len(demands)} requests")
    for address, demand in demands.items():
        grant = schedule.granted.get(address, 0)
        if address in schedule.fully_scheduled:
            status = "full"
        elif address == schedule.partially_scheduled:
            status = "partial"
        else:
            status = "deferred"
        print(f"  {address.hex()}  {grant:>5}/{demand.power_Pv} kW  {status}")
    return receipt


def cmd_verify(chain_log: Union[str, Path], audit: bool = False) -> int:
    """Raise ChainVerificationError naming the first failing block; return the verified height."""
    blocks = read_chain(chain_log)
    height = first_invalid_block(blocks)
    if height is not None:
        raise ChainVerificationError(height, "hash link, receipts or state root mismatch")
    if audit:
        for block in blocks:
            if not audit_slot(blocks, block.height):
                raise ChainVerificationError(block.height, "recorded schedule differs from recomputation")
    print(f"chain valid: {len(blocks)} blocks")
    return len(blocks)


def cmd_find_request(address: str, chain_log: Union[str, Path]) -> Optional[Receipt]:
    try:
        raw = bytes.fromhex(address)
    except ValueError:
        raise ValidationError(f"address must be hex, got: {address}")
    chain = load_chain(chain_log)
    found = find_request(chain.blocks, raw)
    if found is None:
        print(f"no request from {address}")
        return None
    height, receipt = found
    verdict = "accepted" if receipt.accepted else f"rejected: {receipt.reason}"
    print(f"request from {address} in block {height}, {verdict}")
    return receipt
