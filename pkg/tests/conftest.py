#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""共通フィクスチャ"""

import os

import numpy as np
import pytest

from common.config_manager import FIXTURE_DIR
from common.logger import ColorLogger
from ilf_control.lmi.matrix_io import read_matrix
from ilf_control.lmi.plant import build_chain


@pytest.fixture(autouse=True)
def _quiet_numpy():
    with np.errstate(over='ignore', under='ignore'):
        yield


@pytest.fixture
def logger():
    return ColorLogger(quiet=True)


@pytest.fixture(scope="session")
def example_p():
    return read_matrix(os.path.join(FIXTURE_DIR, "example1_P.txt"))


@pytest.fixture(scope="session")
def example_k():
    return read_matrix(os.path.join(FIXTURE_DIR, "example1_K.txt")).reshape(-1)


@pytest.fixture(scope="session")
def plant3():
    return build_chain(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
