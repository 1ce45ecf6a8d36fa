import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geosynth.facts import goal_type, parse_prop
from geosynth.problemset import (COVERAGE_BUCKETS, STEP_BUCKETS, ProblemSet, ProblemSetError, Query,
                                 coverage_bucket, dumps, histograms, hint, loads, parse_range, query,
                                 stats_block, step_bucket)


def P(text):
    return parse_prop(text)


@pytest.fixture(scope="module")
def pset(fig1_run):
    return fig1_run.problems


@pytest.fixture(scope="module")
def problem_a(pset, fig1_lay):
    goal = fig1_lay.normalize(P("tri-cong B M C D M A"))
    [rec] = [r for r in pset.records
             if r.goal == goal and set(r.sources) == {P("midpoint M A C"), P("midpoint M B D")}]
    return rec


# -- file format ---------------------------------------------------------------

def test_roundtrip(pset):
    text = dumps(pset)
    back = loads(text)
    assert back == pset and dumps(back) == text


def test_coverage_keeps_its_denominator(pset):
    text = dumps(pset)
    assert "coverage 0/3" in text
    assert all(r.coverage[1] == 3 for r in loads(text).records)


@pytest.mark.parametrize("text", [
    "problem p1\nflags none\n",
    "problem p1\nbogus 3\nend\n",
    "problem p1\nflags none\nreason -\ncoverage 4/3\ngoal midpoint M A C\nmetrics width 1 length 1 steps 1\nend\n",
    "problem p1\nflags none\nreason -\ncoverage 0/3\nend\n",
    "problem p1\nmetrics width x length 1 steps 1\nend\n",
    "stray line\n",
])
def test_loads_rejects_malformed_files(text):
    with pytest.raises(ProblemSetError):
        loads(text)


def test_buckets():
    assert [step_bucket(n) for n in (0, 2, 3, 5, 6, 10, 11)] == ["0-2", "0-2", "3-5", "3-5", "6-10", "6-10", ">10"]
    assert [coverage_bucket(c) for c in ((0, 0), (1, 4), (1, 3), (2, 4), (2, 3), (3, 4), (5, 6), (3, 3))] == [
        "0-25%", "0-25%", "26-50%", "26-50%", "51-75%", "51-75%", "76-99%", "100%"]


def test_stats_block_rows(pset):
    block = stats_block(pset, 4, None)
    for row in ("Figures", "Original Textbook Problems", "Generated Problems", "Interesting Problems",
                "Strictly Interesting Problems", "Converse Problems", "Time (secs / figure)",
                "Ave. Goal Analogous Partitions", "Ave. Proof Width", "Ave. Proof Length", "Ave. Deductive Steps"):
        assert row in block
    assert "Time (secs / figure)              -" in block
    assert "Time (secs / figure)              1.50" in stats_block(pset, 4, 1.5)


# -- queries -------------------------------------------------------------------

def test_single_step_query(pset):
    sub = query(pset, Query(steps=(1, 1)))
    assert sub.records and all(len(r.steps) == 1 for r in sub.records)
    assert any(r.goal == P("seg-cong A M C M") and r.sources == (P("midpoint M A C"),) for r in sub.records)


def test_goal_type_query(pset, fig1_lay):
    sub = query(pset, Query(goal_types=frozenset({"tri-cong"})))
    goals = {r.goal for r in sub.records}
    assert fig1_lay.normalize(P("tri-cong B M C D M A")) in goals
    assert fig1_lay.normalize(P("tri-cong A D C B C D")) in goals
    assert P("parallel A D B C") not in goals


@pytest.mark.parametrize("text", ["0:3", "3:1", "a:b", "3", "1:2:3"])
def test_bad_ranges(text):
    with pytest.raises(ValueError):
        parse_range(text)


def test_query_rejects_bad_range_objects():
    with pytest.raises(ValueError):
        Query(width=(2, 1))


KINDS = ["tri-cong", "seg-cong", "angle-cong", "isosceles", "parallel", "midpoint", "angle-measure", "seg-scale"]


@st.composite
def queries(draw):
    def rng():
        return draw(st.none() | st.tuples(st.integers(1, 20), st.integers(0, 20)).map(lambda t: (t[0], t[0] + t[1])))

    def kinds():
        return draw(st.none() | st.frozensets(st.sampled_from(KINDS), min_size=1))

    return Query(width=rng(), length=rng(), steps=rng(), source_types=kinds(), goal_types=kinds())


@settings(max_examples=200)
@given(queries())
def test_query_is_an_idempotent_restriction(pset, q):
    sub = query(pset, q)
    ids = [r.id for r in sub.records]
    assert set(ids) <= {r.id for r in pset.records}
    assert query(sub, q) == sub
    for r in sub.records:
        assert q.matches(r)
        if q.goal_types:
            assert goal_type(r.goal) in q.goal_types
    for _, members in sub.coarse + sub.goal_classes:
        assert members and set(members) <= set(ids)


@settings(max_examples=100)
@given(queries())
def test_histograms_sum_to_the_total(pset, q):
    sub = query(pset, q)
    lines = histograms(sub.records).splitlines()
    rows = {l.split()[0]: int(l.split()[1]) for l in lines if not l.startswith("[")}
    total = rows.pop("total")
    assert total == len(sub.records)
    assert sum(rows[b] for b in STEP_BUCKETS) == total
    assert sum(rows[b] for b in COVERAGE_BUCKETS) == total


def test_empty_problem_set_histogram():
    assert histograms(ProblemSet("x", []).records).endswith("total   0\n")


# -- hints ---------------------------------------------------------------------

def test_first_hint_of_problem_a(problem_a):
    assert hint(problem_a, []).rule == "midpoint-def"


def test_hint_before_sas(problem_a):
    est = [P("seg-cong A M C M"), P("seg-cong B M D M"), P("angle-cong A M D B M C")]
    assert hint(problem_a, est).rule == "sas"


def test_hint_complete(problem_a):
    assert hint(problem_a, [s.conclusion for s in problem_a.steps]) is None


def test_hint_rejects_foreign_facts(problem_a):
    with pytest.raises(ValueError):
        hint(problem_a, [P("parallel A D B C")])


def test_hint_on_unknown_problem(pset):
    with pytest.raises(KeyError):
        pset.get("p0")


@settings(max_examples=200)
@given(st.data())
def test_following_hints_completes_within_steps(pset, data):
    rec = data.draw(st.sampled_from(pset.records))
    est: list = []
    for _ in range(rec.metrics.steps):
        step = hint(rec, est)
        if step is None:
            break
        assert step.conclusion not in est
        est.append(step.conclusion)
    assert hint(rec, est) is None
