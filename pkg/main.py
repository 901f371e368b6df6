#!/usr/bin/env python3
"""
locdom - Entry Point

Runs the command-line interface (see cli/cli.py). The library itself lives
in core/ and can be imported directly:

    from core.graph_io import parse_graph6
    from core.construct import construct_half_ld

    cert = construct_half_ld(parse_graph6("Ch"))  # P4
"""

import sys
import os

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, PROJECT_ROOT)

from cli.cli import main


if __name__ == "__main__":
    sys.exit(main())
