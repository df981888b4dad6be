from dataclasses import dataclass

import numpy as np
import pytest

from ungas.characters import eigenmatrices, family_character_table, zeta_table
from ungas.groups import FamilySpec, build_family, conjugacy_classes
from ungas.scheme import adjacency_matrices

BUILTINS = {
    "D6": FamilySpec.dihedral(6),
    "Z4": FamilySpec.cyclic(4),
    "Z6": FamilySpec.cyclic(6),
    "SL23": FamilySpec.sl2(3),
    "V24": FamilySpec.v8k(3),
}


@dataclass
class Setup:
    spec: FamilySpec
    g: object
    p: object
    ct: object
    em: object
    z: object
    A: list


_cache = {}


def setup_for(name):
    if name not in _cache:
        spec = BUILTINS[name]
        g = build_family(spec)
        p = conjugacy_classes(g)
        ct = family_character_table(spec, g, p)
        _cache[name] = Setup(spec, g, p, ct, eigenmatrices(ct), zeta_table(ct), adjacency_matrices(g, p))
    return _cache[name]


@pytest.fixture(params=list(BUILTINS))
def builtin(request):
    return setup_for(request.param)


@pytest.fixture
def d6():
    return setup_for("D6")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_dual_couplings(rng, dual, scale=1.0):
    J = rng.normal(scale=scale, size=len(dual))
    return 0.5 * (J + J[list(dual)])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
