"""Root conftest: isolates the environment BEFORE any projcert module is imported.

config.py builds its singleton at import time from PROJCERT_* variables and
.env files, so stray settings from the developer's shell or home directory
must be removed before pytest collects a test that imports projcert.
"""

import os
import tempfile

# Clear (not just override) so real env vars cannot leak into tests
for _name in [name for name in os.environ if name.startswith("PROJCERT_")]:
    del os.environ[_name]
os.environ["PROJCERT_DIR"] = tempfile.mkdtemp(prefix="projcert-test-")
