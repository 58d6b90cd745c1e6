"""Targeted evaluation of idiom translation: LitTER, APT-Eval and friends."""

__version__ = "0.1.0"
CORPUS_FORMAT_VERSION = 1
REPORT_FORMAT_VERSION = 1
