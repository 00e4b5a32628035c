"""Pytest configuration - isolate tests from local .env settings.

MUST be loaded before any kmix imports to ensure settings picks up test env vars.
"""

import os

# Self-checks on, nothing read from a developer's .env overrides these
os.environ["ENV"] = "test"
os.environ["DEBUG_CHECKS"] = "true"
os.environ["WILDCARD_CHAR"] = "?"

import random

import pytest

from kmix.trie.suffix_tree import SuffixTreeIndex


@pytest.fixture
def rng():
    """Seeded generator so failures reproduce."""
    return random.Random(20240611)


@pytest.fixture
def banana_host():
    """Suffix tree, suffix array and LCP structures of 'banana'."""
    return SuffixTreeIndex(b"banana")
