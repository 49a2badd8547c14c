"""
Toolkit Bootstrap - Sets up logging and hands the command line to the CLI
"""
import logging
import signal
import sys

import cli
from config import LOG_FORMAT, LOG_LEVEL


def signal_handler(signum, frame):
    """Stop a long search without a traceback"""
    print("\n🛑 interrupted", file=sys.stderr)
    sys.exit(130)


def main():
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    signal.signal(signal.SIGINT, signal_handler)
    sys.exit(cli.main(sys.argv[1:]))


if __name__ == "__main__":
    main()
