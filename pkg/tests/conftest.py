"""
Pytest configuration for the test suite.

Settings are read from the environment when ``persistence.settings`` is first
imported. A developer's ``.env`` must not change collector defaults under
test, so the variables are pinned here before any project module loads.
"""

import os

os.environ["WRI_PARALLELISM"] = "4"
os.environ["WRI_HTTP_TIMEOUT"] = "15"
os.environ["WRI_HTTP_RETRIES"] = "3"
os.environ["WRI_PROBE_TIMEOUT"] = "3"
os.environ["WRI_PROBE_PORT"] = "443"
