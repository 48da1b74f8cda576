import itertools
import random

import pytest

from eqbirat import atoms as at
from eqbirat.laurent import LaurentPoly
from oracles import reachable_sums, solutions_by_product


def test_catalog_p2_table_rows():
    cat = at.catalog_low_dim(2)
    rows = {(r.rho, r.rho_g, str(r.hodge_poly)) for _, r in cat.entries}
    assert (1, 1, "1") in rows
    assert (2, 1, "2") in rows
    assert (2, 2, "t + 2 + t^-1") in rows


def test_catalog_entries():
    cat = at.catalog_low_dim(3)
    assert cat["free_orbit_point"].rank_vector == (3, 1)
    assert cat["free_orbit_point"].hodge_poly == LaurentPoly.constant(3)
    for name, rec in cat.entries:
        assert rec.violations() == [], name
        assert rec.rho_g == 1 or (rec.rho_g == 2 and rec.hodge_poly.coeff(0) % 2 == 0), name
    assert not cat["nontrivial_curve_g2"].g_action_trivial
    assert not cat["free_orbit_curve_g1"].g_action_trivial
    assert cat["trivial_curve_g3"].hodge_poly == LaurentPoly.curve(3)
    assert [n for n, _ in cat.point_atoms()] == ["point", "free_orbit_point"]


def test_catalog_names_distinct():
    with pytest.raises(ValueError):
        at.AtomCatalog((("a", at.trivial_point()), ("a", at.trivial_point())))


def test_rational_curve_atoms_rejected():
    for f in (at.trivial_curve, at.nontrivial_curve):
        with pytest.raises(ValueError):
            f(0)
    with pytest.raises(ValueError):
        at.free_orbit_curve(2, 0)


def test_feasibility_examples():
    r = at.feasibility((3, 1), [(1, 1), (2, 1)])
    assert not r.feasible and "exhausted" in r.certificate
    r = at.feasibility((0, 0), [(1, 1)])
    assert r.feasible and r.witness == (0,)
    r = at.feasibility((5, 3), [(1, 1), (2, 1)])
    assert r.feasible and r.witness == (1, 2)


def test_feasibility_forced():
    r = at.feasibility((5, 3), [(1, 1), (2, 1)], forced=[(1, 2)])
    assert r.witness == (1, 2)
    r = at.feasibility((5, 3), [(1, 1), (2, 1)], forced=[(0, 2)])
    assert not r.feasible
    r = at.feasibility((2, 2), [(1, 1)], forced=[(0, 3)])
    assert not r.feasible and "exceed" in r.certificate


def test_feasibility_errors():
    for target, basis in [((1, 1), []), ((1, 1), [(1,)]), ((1, 1), [(0, 0)]), ((1, 1), [(1, -1)])]:
        with pytest.raises(ValueError):
            at.feasibility(target, basis)
    with pytest.raises(ValueError):
        at.feasibility((1,), [(1,)], forced=[(3, 1)])


def brute_force_check(basis, cap):
    reach = reachable_sums(basis, cap)
    for target in itertools.product(range(cap + 1), repeat=len(basis[0])):
        r = at.feasibility(target, basis)
        assert r.feasible == (target in reach), (target, basis)
        if r.feasible:
            combo = [sum(x * b[j] for x, b in zip(r.witness, basis)) for j in range(len(target))]
            assert combo == list(target)
        else:
            assert r.witness is None and r.certificate


def test_feasibility_against_reachability():
    rng = random.Random(99)
    for _ in range(25):
        k = rng.randint(1, 4)
        basis = []
        while len(basis) < k:
            v = (rng.randint(0, 4), rng.randint(0, 4))
            if any(v):
                basis.append(v)
        brute_force_check(basis, 12)


def test_witness_is_lexicographically_first():
    rng = random.Random(4)
    for _ in range(40):
        basis = [(rng.randint(1, 3), rng.randint(0, 2)) for _ in range(rng.randint(1, 3))]
        target = (rng.randint(0, 8), rng.randint(0, 6))
        sols = solutions_by_product(target, basis, 8)
        r = at.feasibility(target, basis)
        assert r.feasible == bool(sols)
        if sols:
            assert r.witness == sols[0]


def x1111_atoms():
    return [
        ("lambda=16", at.AtomRecord(LaurentPoly.constant(1), 1, 1, True)),
        ("lambda=4", at.AtomRecord(LaurentPoly.constant(4), 4, 2, False)),
        ("lambda=0", at.AtomRecord(LaurentPoly({-1: 1, 0: 3, 1: 1}), 5, 3, False)),
    ]


def test_obstruction_replay():
    rep = at.obstruction_report(x1111_atoms(), at.catalog_low_dim(2), [("lambda=0", at.trivial_curve(1))])
    verdicts = {v.name: v for v in rep.verdicts}
    assert verdicts["lambda=0"].obstructed and verdicts["lambda=0"].remainder == (3, 1)
    assert not verdicts["lambda=16"].obstructed
    assert verdicts["lambda=16"].result.witness == (1, 0)
    assert not verdicts["lambda=4"].obstructed
    assert rep.obstructed
    assert "(3, 1)" in rep.narrative


def test_obstruction_forced_orbit():
    rep = at.obstruction_report(x1111_atoms()[1:2], at.catalog_low_dim(2), [("lambda=4", at.free_orbit_point(2))])
    (v,) = rep.verdicts
    assert v.remainder == (2, 1) and not v.obstructed


def test_obstruction_inconsistent_forcing():
    with pytest.raises(at.InconsistentForcing):
        at.obstruction_report(x1111_atoms()[:1], at.catalog_low_dim(2), [("lambda=16", at.trivial_curve(1))])
    with pytest.raises(KeyError):
        at.obstruction_report(x1111_atoms(), at.catalog_low_dim(2), [("nope", at.trivial_curve(1))])


def test_atom_record_invariant():
    assert at.AtomRecord(LaurentPoly.constant(1), 2, 1, True).violations()
    assert at.AtomRecord(LaurentPoly.constant(3), 1, 2, True).violations()
    assert at.AtomRecord(LaurentPoly({0: 2, 1: -1}), 1, 1, True).violations()
