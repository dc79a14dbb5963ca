#!/usr/bin/env python3
"""
Wrapper script to run ensemblr from a source checkout.

Usage:
    python run_experiment.py [command] [arguments]

Examples:
    python run_experiment.py run --config experiment.yaml --seed 3 --out out/seed-3
    python run_experiment.py oracle-check --suite all --log-format=json
"""

import sys

from ensemblr.app import cli

if __name__ == '__main__':
    sys.exit(cli(prog_name="ensemblr"))
