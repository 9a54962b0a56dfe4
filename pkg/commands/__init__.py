from commands.key_commands import cmd_issue, cmd_keygen
from commands.chain_commands import (cmd_deploy, cmd_find_request, cmd_post_load, cmd_run_slot, cmd_submit,
                                     cmd_verify)
from commands.sim_commands import cmd_simulate

__all__ = [
    "cmd_issue", "cmd_keygen",
    "cmd_deploy", "cmd_find_request", "cmd_post_load", "cmd_run_slot", "cmd_submit", "cmd_verify",
    "cmd_simulate",
]
