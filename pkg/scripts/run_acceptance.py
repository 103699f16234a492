#!/usr/bin/env python3
"""Run every acceptance criterion and print one PASS/FAIL line each.

Usage: python scripts/run_acceptance.py [--out FILE] [--seed N] [--config FILE] [--set KEY=VALUE ...]
"""
import sys

from mimo_mc.harness.cli import main

if __name__ == "__main__":
    sys.exit(main(["acceptance", *sys.argv[1:]]))
