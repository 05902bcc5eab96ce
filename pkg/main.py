"""
Main entry point for bastion runs.

Usage:
    python main.py run scenarios/case7_bas.yaml --out out/case1
    python main.py compare out/case1 out/case3
    python main.py oracle-lqr
    python main.py check out/case1/trajectory.csv
"""

import sys
import os

# Add the 'src' directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), 'src')))

from bastion_cli.cli import main


if __name__ == "__main__":
    sys.exit(main())
