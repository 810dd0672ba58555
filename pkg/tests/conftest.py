import pathlib

import pytest

from khext import families

REPO = pathlib.Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO / "corpus"

# The diagrams every cross-check suite runs over: all named PD codes plus
# the abstract chord-diagram families small enough for exhaustive work.
SMALL_PD = [
    "unknot",
    "kink_pos",
    "kink_neg",
    "hopf_pos",
    "hopf_neg",
    "trefoil_right",
    "trefoil_left",
    "figure_eight",
    "t2_2",
    "t2_3",
    "t2_4",
    "t2_5",
    "t2_6",
    "t2_7",
    "t3_4",
]

SMALL_CD = ["altpair", "onemono_2", "onemono_3", "onemono_4", "diskdisk_2"]


def pd(name):
    return families.CORPUS_PD[name]()


def cd(name):
    return families.CORPUS_CD[name]()


@pytest.fixture(scope="session")
def corpus_dir():
    assert CORPUS_DIR.is_dir(), "shipped corpus directory is missing"
    return CORPUS_DIR
