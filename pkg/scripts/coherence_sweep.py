#!/usr/bin/env python3
"""Measured coherence against the ULA bound as the array grows (fixed K = 4 scene).

Usage: python scripts/coherence_sweep.py [--out FILE] [--seed N] [--config FILE] [--set KEY=VALUE ...]
"""
import sys

from mimo_mc.harness.cli import main

if __name__ == "__main__":
    sys.exit(main(["coherence-sweep", *sys.argv[1:]]))
