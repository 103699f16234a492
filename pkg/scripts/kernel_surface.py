#!/usr/bin/env python3
"""Array kernel surface on [-pi, pi]^2 (default: 20-element UCA, R = 0.5 m, lambda = 0.5 m).

For the high-DOF transmit ULA use --set tx.kind=ULA --set tx.count=8 --set tx.spacing=2.0.

Usage: python scripts/kernel_surface.py [--out FILE] [--seed N] [--config FILE] [--set KEY=VALUE ...]
"""
import sys

from mimo_mc.harness.cli import main

if __name__ == "__main__":
    sys.exit(main(["surface", *sys.argv[1:]]))
