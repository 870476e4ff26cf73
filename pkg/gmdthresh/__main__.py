"""Main entry point for gmdthresh."""

import sys

from .cli import main as cli_main


def main():
    """Console script entry: run the CLI and exit with its status."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
