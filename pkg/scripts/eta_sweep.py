#!/usr/bin/env python3
"""ULA coherence bound curves over M for several angular gaps eta.

Usage: python scripts/eta_sweep.py [--out FILE] [--seed N] [--config FILE] [--set KEY=VALUE ...]
"""
import sys

from mimo_mc.harness.cli import main

if __name__ == "__main__":
    sys.exit(main(["eta-sweep", *sys.argv[1:]]))
