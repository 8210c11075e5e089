from __future__ import annotations

import pytest

from helpers import FIXTURE_LEX, fixture_pair


@pytest.fixture(scope="session")
def pair():
    return fixture_pair()


@pytest.fixture(scope="session")
def fixture_lexicon_text():
    return FIXTURE_LEX
