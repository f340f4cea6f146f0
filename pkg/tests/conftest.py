import os

import pytest


@pytest.fixture(autouse=True)
def clean_env():
    """Keep DEPTHKIT_* variables from leaking between tests"""
    def clear():
        for key in [k for k in os.environ if k.startswith("DEPTHKIT_")]:
            del os.environ[key]

    clear()
    yield
    clear()
