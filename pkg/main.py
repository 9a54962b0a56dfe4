import argparse
import datetime
import sys
import traceback
from typing import List, Optional

from commands import (cmd_deploy, cmd_find_request, cmd_issue, cmd_keygen, cmd_post_load, cmd_run_slot,
                      cmd_simulate, cmd_submit, cmd_verify)
from config import CliConfig, Config
from errors import ValidationError, VerificationError
from utils.logger import set_verbosity, setup_logger

logger = setup_logger()

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2


def _date(value: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got: {value}")


def _u64(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got: {value}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charging",
        description="Privacy-preserving charging coordination for energy storage units",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--chain", help="chain log path (default: $CHARGING_CHAIN_LOG)")
    parser.add_argument("--community", help="community identifier (default: $CHARGING_COMMUNITY)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a utility or ESU identity key")
    p.add_argument("role", choices=["utility", "esu"])
    p.add_argument("--out", help="key file (default: <keystore>/<role>.key)")
    p.add_argument("--force", action="store_true", help="overwrite an existing key file")

    p = sub.add_parser("issue", help="acquire partially blind tokens for an ESU identity")
    p.add_argument("utility_key")
    p.add_argument("identity_key")
    p.add_argument("-n", "--tokens", type=int, default=1)
    p.add_argument("--date", type=_date, default=None, help="token date (default: today)")
    p.add_argument("--out", help="output directory (default: <keystore>/tokens)")
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("deploy", help="write the genesis block of a chain log")
    p.add_argument("utility_key")
    p.add_argument("--capacity", type=int, required=True, help="bus capacity C in kW")
    p.add_argument("--regular-load", type=int, default=0, help="regular load P_R in kW")
    p.add_argument("--start-date", type=_date, default=None)

    p = sub.add_parser("post-load", help="post the utility's regular load for the next slot")
    p.add_argument("utility_key")
    p.add_argument("regular_load", type=int)

    p = sub.add_parser("submit", help="submit a charging request with a token")
    p.add_argument("token")
    p.add_argument("pseudonym_key")
    p.add_argument("--power", type=int, required=True, help="requested power P_v in kW")
    p.add_argument("--soc", type=int, required=True, help="state of charge S_v, per mille")
    p.add_argument("--tcc", type=int, required=True, help="slots to complete charge K_v")

    p = sub.add_parser("run-slot", help="trigger the end-of-slot schedule")
    p.add_argument("--date", type=_date, default=None, help="slot date (default: contract date)")

    p = sub.add_parser("verify", help="re-execute and verify the chain log")
    p.add_argument("--audit", action="store_true", help="also recompute every recorded slot schedule")

    p = sub.add_parser("find-request", help="look up a request by pseudonym address")
    p.add_argument("address")

    p = sub.add_parser("simulate", help="Monte Carlo sweep over arrival rates")
    p.add_argument("--config", help="simulation config JSON")
    p.add_argument("--out", default="results.csv")
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: $CHARGING_SIM_WORKERS)")
    p.add_argument("--compare", action="store_true", help="print paired bootstrap comparisons")

    return parser


class ChargingCli:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = Config()
        self.cli = CliConfig.from_env(
            self.config,
            chain_log=args.chain,
            community=args.community,
            sim_config=getattr(args, "config", None),
            verbosity=args.verbose,
        )
        self.handlers = {
            "keygen": self.keygen,
            "issue": self.issue,
            "deploy": self.deploy,
            "post-load": self.post_load,
            "submit": self.submit,
            "run-slot": self.run_slot,
            "verify": self.verify,
            "find-request": self.find_request,
            "simulate": self.simulate,
        }

    def run(self) -> int:
        return self.handlers[self.args.command]()

    def keygen(self) -> int:
        out = self.args.out or self.cli.keystore_dir / f"{self.args.role}.key"
        cmd_keygen(self.args.role, out, force=self.args.force)
        return EXIT_OK

    def issue(self) -> int:
        cmd_issue(
            self.args.utility_key, self.args.identity_key, self.args.tokens,
            self.args.date or datetime.date.today(), self.cli.community,
            self.args.out or self.cli.keystore_dir / "tokens",
            store_path=self.config.store_path, quota=self.config.TOKEN_QUOTA,
            period_days=self.config.PERIOD_DAYS, force=self.args.force,
        )
        return EXIT_OK

    def deploy(self) -> int:
        cmd_deploy(
            self.args.utility_key, self.args.capacity, self.args.regular_load, self.cli.community,
            self.cli.chain_log, start_date=self.args.start_date,
            battery_capacity=self.config.BATTERY_CAPACITY, period_days=self.config.PERIOD_DAYS,
        )
        return EXIT_OK

    def post_load(self) -> int:
        receipt = cmd_post_load(self.args.utility_key, self.args.regular_load, self.cli.chain_log)
        return EXIT_OK if receipt.accepted else EXIT_VALIDATION

    def submit(self) -> int:
        receipt = cmd_submit(self.args.token, self.args.pseudonym_key, self.args.power,
                             self.args.soc, self.args.tcc, self.cli.chain_log)
        return EXIT_OK if receipt.accepted else EXIT_VALIDATION

    def run_slot(self) -> int:
        cmd_run_slot(self.cli.chain_log, date=self.args.date)
        return EXIT_OK

    def verify(self) -> int:
        cmd_verify(self.cli.chain_log, audit=self.args.audit)
        return EXIT_OK

    def find_request(self) -> int:
        cmd_find_request(self.args.address, self.cli.chain_log)
        return EXIT_OK

    def simulate(self) -> int:
        workers = self.args.workers if self.args.workers is not None else self.config.SIM_WORKERS
        cmd_simulate(self.cli.sim_config, self.args.out, seed=self.args.seed, workers=workers,
                     compare=self.args.compare)
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    try:
        return ChargingCli(args).run()
    except VerificationError as e:
        logger.info(f"Verification failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except ValidationError as e:
        logger.info(f"Validation error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception:
        logger.error(f"An unexpected error occurred: {traceback.format_exc()}")
        return EXIT_VALIDATION


if __name__ == '__main__':
    sys.exit(main())
