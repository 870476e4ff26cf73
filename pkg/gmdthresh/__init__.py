"""gmdthresh - Erasure thresholds for error/erasure and GMD decoding over AWGN/BPSK."""

__version__ = "0.1.0"
__app_name__ = "gmdthresh"
