import subprocess
import sys

import numpy as np
import pytest

from paigeloops import (DomainError, LimitError, PermGroup, Permutation,
                        kernel_backend)
from paigeloops._backend import kernels as active_kernels
from paigeloops import _kernels_py
from paigeloops.config import MAX_PERM_DEGREE


def P(*images):
    return Permutation(list(images))


def test_composition_applies_left_factor_first():
    p = P(1, 0, 2)
    q = P(0, 2, 1)
    r = p * q
    for x in range(3):
        assert r(x) == q(p(x))


def test_identity_inverse_pow():
    e = Permutation.identity(5)
    p = Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    assert p * p.inverse() == e
    assert p.inverse() * p == e
    assert p ** 5 == e
    assert p ** -2 == (p ** 2).inverse()
    assert p ** 0 == e
    assert e.is_identity() and not p.is_identity()


def test_order_and_cycles():
    p = Permutation.from_cycles(7, [(0, 1), (2, 3, 4)])
    assert p.order() == 6
    assert p.cycles() == [(0, 1), (2, 3, 4)]
    q = Permutation.from_text(p.to_text())
    assert q == p
    assert Permutation.identity(4).cycles() == []


def test_permutation_validation():
    with pytest.raises(DomainError):
        Permutation([0, 0, 1])
    with pytest.raises(DomainError):
        Permutation([0, 3, 1])
    with pytest.raises(DomainError):
        Permutation([])
    with pytest.raises(DomainError):
        P(0, 1) * P(0, 1, 2)


def test_symmetric_and_alternating_orders():
    s5 = PermGroup([Permutation.from_cycles(5, [(0, 1)]),
                    Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])])
    assert s5.order == 120
    a5 = PermGroup([Permutation.from_cycles(5, [(0, 1, 2)]),
                    Permutation.from_cycles(5, [(2, 3, 4)])])
    assert a5.order == 60
    assert s5.is_transitive() and a5.is_transitive()
    odd = Permutation.from_cycles(5, [(0, 1)])
    assert odd in s5 and odd not in a5


def test_dihedral_and_cyclic():
    rot = Permutation.from_cycles(6, [(0, 1, 2, 3, 4, 5)])
    flip = Permutation.from_cycles(6, [(1, 5), (2, 4)])
    d6 = PermGroup([rot, flip])
    assert d6.order == 12
    c6 = PermGroup([rot])
    assert c6.order == 6
    assert not PermGroup([flip]).is_transitive()


def test_empty_and_trivial_groups():
    g = PermGroup([], degree=4)
    assert g.order == 1
    assert Permutation.identity(4) in g
    assert P(1, 0, 2, 3) not in g
    with pytest.raises(DomainError):
        PermGroup([])
    t = PermGroup([Permutation.identity(3)])
    assert t.order == 1


def test_base_and_orbit_sizes_multiply_to_order():
    g = PermGroup([Permutation.from_cycles(6, [(0, 1)]),
                   Permutation.from_cycles(6, [(0, 1, 2, 3, 4, 5)])])
    assert g.order == 720
    sizes = g.basic_orbit_sizes()
    prod = 1
    for s in sizes:
        prod *= s
    assert prod == 720
    assert len(g.base()) == len(sizes)


def test_point_stabilizer():
    s5 = PermGroup([Permutation.from_cycles(5, [(0, 1)]),
                    Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])])
    for pt in (0, 3):
        stab = s5.point_stabilizer(pt)
        assert stab.order == 24
        for g in stab.generators:
            assert g(pt) == pt
    with pytest.raises(DomainError):
        s5.point_stabilizer(9)


def test_strong_generators_regenerate():
    g = PermGroup([Permutation.from_cycles(7, [(0, 1, 2)]),
                   Permutation.from_cycles(7, [(0, 1, 2, 3, 4, 5, 6)])])
    sg = g.strong_generators()
    assert PermGroup(sg, degree=7).order == g.order == 2520


def test_derived_subgroup_series():
    s4 = PermGroup([Permutation.from_cycles(4, [(0, 1)]),
                    Permutation.from_cycles(4, [(0, 1, 2, 3)])])
    a4 = s4.derived_subgroup()
    assert a4.order == 12
    v4 = a4.derived_subgroup()
    assert v4.order == 4
    assert v4.derived_subgroup().order == 1
    c5 = PermGroup([Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])])
    assert c5.derived_subgroup().order == 1


def test_elements_iteration():
    g = PermGroup([Permutation.from_cycles(4, [(0, 1, 2)]),
                   Permutation.from_cycles(4, [(1, 2, 3)])])
    elems = list(g.elements())
    assert len(elems) == g.order == 12
    assert len({e.images.tobytes() for e in elems}) == 12
    for e in elems:
        assert e in g


def test_membership_rejects_degree_mismatch():
    g = PermGroup([Permutation.from_cycles(4, [(0, 1)])])
    with pytest.raises(DomainError):
        g.contains(P(1, 0, 2))
    with pytest.raises(DomainError):
        PermGroup([P(1, 0), P(0, 2, 1)])


def test_orbits():
    g = PermGroup([Permutation.from_cycles(6, [(0, 1, 2)]),
                   Permutation.from_cycles(6, [(4, 5)])])
    assert list(g.orbit(0)) == [0, 1, 2]
    assert list(g.orbit(3)) == [3]
    assert list(g.orbit(5)) == [4, 5]
    assert not g.is_transitive()


def test_degree_limit():
    big = Permutation.identity(MAX_PERM_DEGREE + 1)
    with pytest.raises(LimitError):
        PermGroup([big])
    g = PermGroup([big], override_limits=True)
    assert g.order == 1


def test_order_matches_bfs_closure_on_random_groups(bfs_order):
    rng = np.random.default_rng(7)
    for _ in range(6):
        degree = int(rng.integers(4, 8))
        gens = [Permutation(rng.permutation(degree).astype(np.int32))
                for _ in range(2)]
        g = PermGroup(gens)
        assert g.order == bfs_order([p.images for p in gens])


def test_random_elements_are_deterministic_members():
    g = PermGroup([Permutation.from_cycles(5, [(0, 1)]),
                   Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])])
    a = g.random_elements(20, seed=3)
    b = g.random_elements(20, seed=3)
    assert a == b
    assert g.random_elements(20, seed=4) != a
    for p in a:
        assert p in g
    assert g.random_uniform(11) == g.random_elements(1, 11)[0]


def test_small_group_sampler_hits_every_element():
    rot = Permutation.from_cycles(3, [(0, 1, 2)])
    flip = Permutation.from_cycles(3, [(0, 1)])
    s3 = PermGroup([rot, flip])
    draws = s3.random_elements(600, seed=0)
    counts = {}
    for p in draws:
        counts[p.images.tobytes()] = counts.get(p.images.tobytes(), 0) + 1
    assert len(counts) == 6
    assert min(counts.values()) > 40


# -- kernel backends ---------------------------------------------------------


def test_active_backend_reported():
    assert kernel_backend() in ("c", "py")
    assert active_kernels.backend_name() == kernel_backend()


def test_backends_agree_on_primitives():
    if kernel_backend() == "py":
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(0)
    for degree in (1, 2, 17, 1000):
        p = rng.permutation(degree).astype(np.int32)
        q = rng.permutation(degree).astype(np.int32)
        assert (active_kernels.compose(p, q) == _kernels_py.compose(p, q)).all()
        assert (active_kernels.invert(p) == _kernels_py.invert(p)).all()
        assert active_kernels.is_identity(p) == _kernels_py.is_identity(p)
        out_c = np.empty_like(p)
        out_py = np.empty_like(p)
        active_kernels.compose_into(p, q, out_c)
        _kernels_py.compose_into(p, q, out_py)
        assert (out_c == out_py).all()


@pytest.mark.parametrize("kern", [active_kernels, _kernels_py])
def test_compose_into_may_alias_first_argument(kern):
    rng = np.random.default_rng(1)
    p = rng.permutation(300).astype(np.int32)
    q = rng.permutation(300).astype(np.int32)
    want = kern.compose(p.copy(), q)
    buf = p.copy()
    kern.compose_into(buf, q, buf)
    assert (buf == want).all()


def test_pure_python_backend_selectable_by_env():
    code = ("import paigeloops\n"
            "from paigeloops import PermGroup, Permutation\n"
            "print(paigeloops.kernel_backend())\n"
            "g = PermGroup([Permutation.from_cycles(5, [(0, 1)]),\n"
            "               Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])])\n"
            "print(g.order)\n"
            "print(g.point_stabilizer(2).order)\n")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"PAIGELOOPS_BACKEND": "py", "PATH": "/usr/bin"},
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["py", "120", "24"]
