#!/usr/bin/env python3
"""Completion success rate versus sample count for random M = 64, K = 3 ULA scenes.

Usage: python scripts/recovery_phase.py [--out FILE] [--seed N] [--config FILE] [--set KEY=VALUE ...]
"""
import sys

from mimo_mc.harness.cli import main

if __name__ == "__main__":
    sys.exit(main(["recovery-phase", *sys.argv[1:]]))
