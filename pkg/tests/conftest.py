import os
import sys

os.environ.setdefault('CAYLEY_ENV', 'testing')
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

import fingroup

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')

CLASS_TWO = ['z2', 'z4', 'z2xz2', 'd4', 'q8', 'heis3']
ABELIAN = ['z2', 'z4', 'z2xz2']

# (n, g, h) at which the relation fails in the dihedral group of order 16:
# the first letter goes to [g,h] a on the left and to [g^-1,h^-1] a on the right,
# and [r,s] = r^-2 differs from [r^-1,s^-1] = r^2.
D16_WITNESS = (1, 'r', 's')


@pytest.fixture
def q8():
    return fingroup.builtin('q8')


@pytest.fixture
def d4():
    return fingroup.builtin('d4')


@pytest.fixture
def z4():
    return fingroup.builtin('z4')


@pytest.fixture
def z2():
    return fingroup.builtin('z2')


@pytest.fixture
def heis3():
    return fingroup.builtin('heis3')


@pytest.fixture
def d16():
    return fingroup.builtin('d8_16')


@pytest.fixture
def d4_file():
    return os.path.join(DATA_DIR, 'd4.grp')
