import pytest

import scheduleak as sl


def example1():
    return sl.TaskSet([
        sl.TaskSpec(1, 5, 1, 1, 0, 3),
        sl.TaskSpec(2, 6, 2, 2, 0, 2),
        sl.TaskSpec(3, 10, 2, 2, 0, 1),
    ])


def test_busy_intervals_example1():
    ts = example1()
    trace = sl.simulate(ts, 30)
    got = [(b.start, b.length) for b in sl.busy_intervals(trace)]
    assert got == [(0, 8), (10, 6), (18, 5), (24, 3)]


def test_enumerate_matches_appendix():
    ts = sl.TaskSet([
        sl.TaskSpec(1, 5, 1, 1, 0, 3),
        sl.TaskSpec(2, 17, 6, 6, 0, 2),
        sl.TaskSpec(3, 24, 7, 7, 0, 1),
    ])
    vectors = sl.enumerate_matches(ts, sl.BusyInterval(0, 16))
    assert [v.counts for v in vectors] == [[3, 1, 1]]


def test_candidates():
    c = sl.job_count_candidates(sl.TaskSpec(1, 5, 1, 1), 3)
    assert c.values() == [0, 1]


def test_pipeline_example1_exact():
    r = sl.run_pipeline(example1(), window_start=0)
    assert r.eta_prime == 1.0
    assert r.committed == [0, 0, 0]


def test_generated_pipeline_in_range():
    ts = sl.generate_taskset(n_tasks=6, util_lo=0.4, util_hi=0.5, seed=3)
    assert ts.validate() == ""
    r = sl.run_pipeline(ts, variation="normal", seed=3)
    assert 0.0 <= r.eta_prime <= 1.0
    assert 0.0 <= r.eta_naive <= 1.0


def test_taskset_text_round_trip():
    ts = sl.generate_taskset(seed=11)
    back = sl.TaskSet.from_text(ts.to_text())
    assert [t.period for t in back.tasks] == [t.period for t in ts.tasks]


def test_errors_surface():
    with pytest.raises(sl.Error):
        sl.TaskSet.from_text("garbage")
    with pytest.raises(ValueError):
        sl.run_pipeline(example1(), variation="uniform")
