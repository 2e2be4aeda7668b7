"""Policy-optimization lab: violation-area restarts on top of clipped and
trust-region policy-gradient learners, with a reachability verifier for
trained policies."""

__version__ = "0.1.0"
