"""Run the command line: python3 -m open_horizon <subcommand>."""

import sys

from .cli.app import main


sys.exit(main())
