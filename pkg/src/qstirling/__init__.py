"""Quasi-Stirling multipermutations, VE-labeled trees and the identities linking them."""

from .core import GuardExceeded, MultisetSpec, RootedWord

__all__ = ["GuardExceeded", "MultisetSpec", "RootedWord"]
__version__ = "0.1.0"
