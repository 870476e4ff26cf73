#!/usr/bin/env python3
"""Convenience script to run gmdthresh."""

from gmdthresh.__main__ import main

if __name__ == "__main__":
    main()
