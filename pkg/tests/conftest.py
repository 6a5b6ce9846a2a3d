import random

import pytest

from walign.corpus import Text
from walign.selfcheck import WORKED_TABLE, WORKED_TEXT, worked_example_hash

# Token ids used by the worked example (think A=0, B=1, C=2).
A, B, C = 0, 1, 2


@pytest.fixture
def worked_text() -> Text:
    return WORKED_TEXT


@pytest.fixture
def worked_fn():
    return worked_example_hash()


@pytest.fixture
def worked_table():
    return dict(WORKED_TABLE)


def random_text(rng: random.Random, max_len: int = 20, alphabet: int = 4, text_id: int = 0) -> Text:
    n = rng.randint(1, max_len)
    return Text(text_id, tuple(rng.randrange(alphabet) for _ in range(n)))
