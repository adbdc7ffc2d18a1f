"""Folding calculus and the growth laws.

The A1 cases are fully worked by hand: the segment 3/4 -> -3/4 descends
through the walls x = 1/2, 0, -1/2 at times 1/6, 1/2, 5/6, and folding at
the middle one reflects the tail up again.  The affine cases pin down the
truncation behavior: a witness that needs a height-3 root must turn the
verdict INCONCLUSIVE, not PASS or FAIL, when the search stops at height 1.
"""

from fractions import Fraction as Q

import pytest

from masures.errors import (
    DegenerateSegment,
    IllegalFold,
    IndexOutOfRange,
    NotOnWall,
)
from masures.heckepath import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    PLPath,
    derivatives,
    fold_tail,
    mutated_folded_path,
    random_folded_path,
    verify_growth,
)
from masures.kmcore import (
    EQ,
    LE,
    default_realization,
    simple_root,
    validate_matrix,
)

A1 = default_realization(validate_matrix([[2]]))
A2 = default_realization(validate_matrix([[2, -1], [-1, 2]]))
B2 = default_realization(validate_matrix([[2, -1], [-2, 2]]))
AFF = default_realization(validate_matrix([[2, -2], [-2, 2]]))

ALPHA = simple_root(A1, 0)

SYSTEMS = (
    (A1, 1, 1),
    (A2, 2, 3),
    (B2, 3, 4),
)


def descent(rgs):
    """Endpoints from the sum of the coroots down to its negative; every
    wall crossing of the straight segment is then in the legal direction."""
    rho = rgs.zero()
    for coroot in rgs.simple_coroots:
        rho = tuple(x + c for x, c in zip(rho, coroot))
    return rho, tuple(-x for x in rho)


# -- paths as data ---------------------------------------------------------------


class TestPLPath:
    def test_collinear_knot_merged(self):
        p = PLPath((Q(0), Q(1, 2), Q(1)), ((Q(0),), (Q(1, 2),), (Q(1),)))
        assert p.times == (Q(0), Q(1))
        assert p.breakpoints == ()

    def test_value_and_derivatives(self):
        p = PLPath((Q(0), Q(1, 2), Q(1)), ((Q(0),), (Q(1),), (Q(0),)))
        assert p.value(Q(1, 4)) == (Q(1, 2),)
        assert p.value(Q(1, 2)) == (Q(1),)
        assert p.piece_derivatives() == ((Q(2),), (Q(-2),))
        assert derivatives(p, Q(1, 2)) == ((Q(2),), (Q(-2),))
        assert derivatives(p, 0) == (None, (Q(2),))
        assert derivatives(p, 1) == ((Q(-2),), None)

    def test_displacement(self):
        p = PLPath.straight((Q(1), Q(2)), (Q(0), Q(0)))
        assert p.displacement() == (Q(-1), Q(-2))

    def test_validation(self):
        with pytest.raises(ValueError):
            PLPath((Q(0), Q(2)), ((Q(0),), (Q(1),)))
        with pytest.raises(ValueError):
            PLPath((Q(0), Q(1, 2), Q(1, 2), Q(1)), ((Q(0),), (Q(1),), (Q(2),), (Q(3),)))
        with pytest.raises(DegenerateSegment):
            PLPath((Q(0),), ((Q(0),),))
        with pytest.raises(IndexOutOfRange):
            PLPath.straight((Q(0),), (Q(1),)).value(Q(2))


# -- folding ----------------------------------------------------------------------


class TestFoldTail:
    def test_legal_fold_reflects_the_tail(self):
        p = PLPath.straight((Q(3, 4),), (Q(-3, 4),))
        folded = fold_tail(A1, p, Q(1, 2), ALPHA, 0)
        assert folded.times == (Q(0), Q(1, 2), Q(1))
        assert folded.points == ((Q(3, 4),), (Q(0),), (Q(3, 4),))

    def test_fold_point_must_be_on_the_wall(self):
        p = PLPath.straight((Q(3, 4),), (Q(-3, 4),))
        with pytest.raises(NotOnWall):
            fold_tail(A1, p, Q(1, 3), ALPHA, 0)

    def test_ascending_fold_is_illegal(self):
        p = PLPath.straight((Q(-3, 4),), (Q(3, 4),))
        with pytest.raises(IllegalFold):
            fold_tail(A1, p, Q(1, 2), ALPHA, 0)
        forced = fold_tail(A1, p, Q(1, 2), ALPHA, 0, require_legal=False)
        assert forced.points == ((Q(-3, 4),), (Q(0),), (Q(-3, 4),))

    def test_fold_time_interior(self):
        p = PLPath.straight((Q(1, 2),), (Q(-1, 2),))
        with pytest.raises(IndexOutOfRange):
            fold_tail(A1, p, Q(0), ALPHA, 0)

    def test_legality_reads_the_root_as_given(self):
        # the same wall described by the negative root flips the test
        p = PLPath.straight((Q(3, 4),), (Q(-3, 4),))
        with pytest.raises(IllegalFold):
            fold_tail(A1, p, Q(1, 2), ALPHA.negated(), 0)


# -- growth laws ------------------------------------------------------------------


class TestVerifyGrowth:
    def test_straight_path_passes_with_equality(self):
        report = verify_growth(A1, PLPath.straight((Q(1, 4),), (Q(-3, 4),)), 1, 1)
        assert report.verdict == PASS
        assert report.breakpoints == ()
        assert report.endpoint_comparison == EQ
        assert report.strictness == PASS
        assert report.exact

    def test_single_legal_fold_passes_strictly(self):
        p = fold_tail(A1, PLPath.straight((Q(3, 4),), (Q(-3, 4),)), Q(1, 2), ALPHA, 0)
        report = verify_growth(A1, p, 1, 1)
        assert report.verdict == PASS
        assert report.endpoint_comparison == LE
        assert [bp.status for bp in report.breakpoints] == ["legal"]
        assert report.breakpoints[0].witness == (1,)

    def test_reversed_fold_fails_at_the_breakpoint(self):
        p = fold_tail(
            A1,
            PLPath.straight((Q(-3, 4),), (Q(3, 4),)),
            Q(1, 2),
            ALPHA,
            0,
            require_legal=False,
        )
        report = verify_growth(A1, p, 1, 1)
        assert report.verdict == FAIL
        assert report.first_offense == Q(1, 2)
        assert report.breakpoints[0].status == "illegal"
        assert report.monotone_chain == FAIL

    def test_witness_beyond_height_bound_is_inconclusive(self):
        """Folding across the wall of the height-3 affine root: with the
        root enumeration cut at height 1 nothing explains the turn, and an
        unsaturated search must refuse to pass or fail."""
        a, b = (Q(1), Q(0), Q(0)), (Q(-1), Q(0), Q(0))
        tall = next(
            r
            for r in __import__("masures.kmcore", fromlist=["positive_roots"]).positive_roots(AFF, 3)
            if r.coords == (2, 1)
        )
        p = fold_tail(AFF, PLPath.straight(a, b), Q(1, 2), tall, 0)
        narrow = verify_growth(AFF, p, 1, 3)
        assert narrow.verdict == INCONCLUSIVE
        assert narrow.breakpoints[0].status == "unknown"
        assert not narrow.exact
        wide = verify_growth(AFF, p, 3, 3)
        assert wide.verdict == PASS
        assert wide.breakpoints[0].witness == (2, 1)

    def test_short_weyl_ball_is_inconclusive_not_pass(self):
        a, b = (Q(1), Q(0), Q(0)), (Q(-1), Q(0), Q(0))
        tall = next(
            r
            for r in __import__("masures.kmcore", fromlist=["positive_roots"]).positive_roots(AFF, 3)
            if r.coords == (2, 1)
        )
        p = fold_tail(AFF, PLPath.straight(a, b), Q(1, 2), tall, 0)
        report = verify_growth(AFF, p, 3, 1)
        assert report.verdict == INCONCLUSIVE
        assert report.orbit_condition == INCONCLUSIVE


# -- seeded generators ---------------------------------------------------------------


class TestGenerators:
    def test_deterministic_in_the_seed(self):
        a, b = descent(A2)
        assert random_folded_path(A2, 7, a, b, 2) == random_folded_path(A2, 7, a, b, 2)
        assert mutated_folded_path(A2, 7, a, b, 2) == mutated_folded_path(A2, 7, a, b, 2)

    @pytest.mark.parametrize("rgs,height,length", SYSTEMS, ids=("A1", "A2", "B2"))
    def test_random_paths_pass(self, rgs, height, length):
        a, b = descent(rgs)
        for seed in range(150):
            path = random_folded_path(rgs, seed, a, b, height)
            report = verify_growth(rgs, path, height, length)
            assert report.verdict == PASS, (seed, report)
            folded = len(path.piece_derivatives()) > 1
            assert report.endpoint_comparison == (LE if folded else EQ)

    @pytest.mark.parametrize("rgs,height,length", SYSTEMS, ids=("A1", "A2", "B2"))
    def test_mutants_fail_at_the_planted_fold(self, rgs, height, length):
        a, b = descent(rgs)
        produced = 0
        for seed in range(150):
            out = mutated_folded_path(rgs, seed, a, b, height)
            if out is None:
                continue
            produced += 1
            path, planted = out
            report = verify_growth(rgs, path, height, length)
            assert report.verdict == FAIL, (seed, report)
            assert planted in {bp.time for bp in report.breakpoints if bp.status == "illegal"}
        assert produced > 50

    def test_mutant_none_when_nothing_ascends(self):
        # an unfolded descent never moves up through a wall
        a, b = descent(A1)
        outcomes = {mutated_folded_path(A1, seed, a, b, 1) is None for seed in range(40)}
        assert outcomes == {True, False}

    def test_degenerate_endpoints_rejected(self):
        with pytest.raises(DegenerateSegment):
            random_folded_path(A1, 0, (Q(1),), (Q(1),), 1)
